#include "glevy/fnspace.hpp"

#include "glevy/errors.hpp"
#include "glevy/path_io.hpp"
#include "glevy/uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace glevy {

namespace {

void checkExponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("exponent p must be at least 1");
}

double powAbs(const TestFunction& f, const Point& z, double p) {
    const double y = f.eval(z);
    if (!std::isfinite(y)) throw EvaluationError("test function is not finite at an atom");
    return p == 1.0 ? std::abs(y) : std::pow(std::abs(y), p);
}

}  // namespace

double vNorm(const TestFunction& f, const Region& A, const MeasureFamily& V, double p) {
    checkExponent(p);
    double sup = 0.0;
    for (const auto& v : V) {
        double acc = 0.0;
        for (const auto& a : v.atoms()) {
            if (A.contains(a.location)) acc += powAbs(f, a.location, p) * a.weight;
        }
        sup = std::max(sup, acc);
    }
    return p == 1.0 ? sup : std::pow(sup, 1.0 / p);
}

std::vector<TightnessEntry> tightnessProfile(const TestFunction& f, const MeasureFamily& V, double p,
                                             const std::vector<double>& eps) {
    checkExponent(p);
    for (double e : eps) {
        if (!(e > 0.0)) throw InvalidInput("tightness levels must be positive");
    }
    // Radius levels over all atoms and the |f|^p mass each measure puts on them.
    std::vector<double> radii;
    for (const auto& v : V) {
        for (const auto& a : v.atoms()) radii.push_back(norm(a.location));
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    const std::size_t K = radii.size();
    std::vector<std::vector<double>> level(V.size(), std::vector<double>(K, 0.0));
    for (std::size_t i = 0; i < V.size(); ++i) {
        for (const auto& a : V[i].atoms()) {
            const auto k = static_cast<std::size_t>(
                std::lower_bound(radii.begin(), radii.end(), norm(a.location)) - radii.begin());
            level[i][k] += powAbs(f, a.location, p) * a.weight;
        }
    }

    struct Link {
        std::size_t lo;
        std::size_t hi;  // exclusive; lo == hi is the empty annulus
        double tail;
    };
    std::vector<double> outside(V.size(), 0.0);
    auto supTail = [&](std::size_t drop) {
        double s = 0.0;
        for (std::size_t i = 0; i < V.size(); ++i) s = std::max(s, outside[i] + level[i][drop]);
        return s;
    };
    std::vector<Link> chain{{0, K, 0.0}};
    std::size_t lo = 0;
    std::size_t hi = K;
    while (lo < hi) {
        const double dropInner = supTail(lo);
        const double dropOuter = supTail(hi - 1);
        const std::size_t drop = dropOuter <= dropInner ? hi - 1 : lo;
        for (std::size_t i = 0; i < V.size(); ++i) outside[i] += level[i][drop];
        if (drop == lo) {
            ++lo;
        } else {
            --hi;
        }
        chain.push_back({lo, hi, std::min(dropInner, dropOuter)});
    }

    std::vector<TightnessEntry> out;
    for (double e : eps) {
        TightnessEntry entry;
        entry.eps = e;
        const Link* best = &chain.front();  // tail 0 < eps
        for (const auto& link : chain) {
            if (link.tail < e) best = &link;
        }
        if (best->lo == best->hi) {
            entry.hasAnnulus = false;
            entry.tail = best->tail;
        } else {
            entry.inner = radii[best->lo];
            entry.outer = radii[best->hi - 1];
            entry.tail = best->tail;
        }
        out.push_back(entry);
    }
    return out;
}

std::vector<UiEntry> uniformIntegrabilityProfile(const TestFunction& f, const MeasureFamily& V, double p,
                                                 const std::vector<double>& ns) {
    checkExponent(p);
    std::vector<UiEntry> out;
    for (double n : ns) {
        double sup = 0.0;
        for (const auto& v : V) {
            double acc = 0.0;
            for (const auto& a : v.atoms()) {
                const double y = powAbs(f, a.location, p);
                if (y >= n) acc += y * a.weight;
            }
            sup = std::max(sup, acc);
        }
        out.push_back({n, sup});
    }
    return out;
}

void writeTightnessCsv(std::ostream& out, const std::vector<TightnessEntry>& profile) {
    out << "eps,hasAnnulus,inner,outer,tail\n";
    for (const auto& e : profile) {
        out << formatShortest(e.eps) << ',' << (e.hasAnnulus ? 1 : 0) << ',' << formatShortest(e.inner) << ','
            << formatShortest(e.outer) << ',' << formatShortest(e.tail) << '\n';
    }
}

void writeIntegrabilityCsv(std::ostream& out, const std::vector<UiEntry>& profile) {
    out << "n,tail\n";
    for (const auto& e : profile) out << formatShortest(e.n) << ',' << formatShortest(e.tail) << '\n';
}

MembershipVerdict membershipLpb(const TestFunction& f, const Region& A, const MeasureFamily& V, double p,
                                const MembershipOptions& options) {
    checkExponent(p);
    MeasureFamily restricted;
    for (const auto& v : V) {
        std::vector<Atom> atoms;
        for (const auto& a : v.atoms()) {
            if (A.contains(a.location)) atoms.push_back(a);
        }
        restricted.emplace_back(std::move(atoms), v.dim());
    }
    MembershipVerdict verdict;
    verdict.norm = vNorm(f, A, V, p);
    verdict.normFinite = std::isfinite(verdict.norm);
    verdict.tightness = tightnessProfile(f, restricted, p, options.epsLadder);
    verdict.tight = std::all_of(verdict.tightness.begin(), verdict.tightness.end(),
                                [](const TightnessEntry& e) { return e.tail < e.eps; });
    verdict.integrability = uniformIntegrabilityProfile(f, restricted, p, options.nLadder);
    verdict.uniformlyIntegrable =
        verdict.integrability.empty() || verdict.integrability.back().tail <= options.threshold;
    verdict.member = verdict.normFinite && verdict.tight && verdict.uniformlyIntegrable;
    return verdict;
}

MeasureFamily escapingMassFamily(std::size_t K) {
    MeasureFamily V;
    for (std::size_t k = 1; k <= K; ++k) {
        V.push_back(DiscreteLevyMeasure::dirac(static_cast<double>(k), 1.0 / static_cast<double>(k)));
    }
    return V;
}

QcVerdict qcCriterion(const TestFunction& f, const MeasureFamily& V) {
    QcVerdict verdict;
    if (!f.discontinuities) return verdict;
    const Region closure = f.discontinuities->closure();
    for (std::size_t i = 0; i < V.size(); ++i) {
        for (const auto& a : V[i].atoms()) {
            if (!closure.contains(a.location)) continue;
            if (!verdict.witness) {
                verdict.witness = a.location;
                verdict.witnessMeasure = i;
            }
        }
    }
    verdict.capacity = V.empty() ? 0.0 : vCapacity(V, closure).value;
    verdict.status = verdict.capacity > 0.0 ? QcStatus::notQuasiContinuous : QcStatus::quasiContinuous;
    if (verdict.status == QcStatus::quasiContinuous) {
        verdict.witness.reset();
        verdict.witnessMeasure.reset();
    }
    return verdict;
}

}  // namespace glevy
