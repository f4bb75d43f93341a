#include "glevy/analysis.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <cmath>

namespace glevy {

std::string toString(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::rawJumpPart: return "rawJumpPart";
        case ProcessKind::compensatedJumpPart: return "compensatedJumpPart";
        case ProcessKind::symmetricCompensated: return "symmetricCompensated";
        case ProcessKind::poissonIntegral: return "poissonIntegral";
        case ProcessKind::continuousPart: return "continuousPart";
    }
    return "unknown";
}

ProcessKind processKindFromString(const std::string& name) {
    for (auto k : {ProcessKind::rawJumpPart, ProcessKind::compensatedJumpPart, ProcessKind::symmetricCompensated,
                   ProcessKind::poissonIntegral, ProcessKind::continuousPart}) {
        if (toString(k) == name) return k;
    }
    throw InvalidInput("unknown process kind '" + name + "'");
}

ProcessSpec ProcessSpec::rawJumpPart(UncertaintySet U) { return {ProcessKind::rawJumpPart, std::move(U), {}, {}}; }

ProcessSpec ProcessSpec::compensatedJumpPart(UncertaintySet U) {
    return {ProcessKind::compensatedJumpPart, std::move(U), {}, {}};
}

ProcessSpec ProcessSpec::symmetricCompensated(UncertaintySet U) {
    return {ProcessKind::symmetricCompensated, std::move(U), {}, {}};
}

ProcessSpec ProcessSpec::poissonIntegral(UncertaintySet U, ScalarFunction phi, Region A) {
    return {ProcessKind::poissonIntegral, std::move(U), std::move(phi), std::move(A)};
}

ProcessSpec ProcessSpec::continuousPart(UncertaintySet U) {
    return {ProcessKind::continuousPart, std::move(U), {}, {}};
}

UncertaintySet ProcessSpec::uncertaintySet() const {
    if (U.empty()) throw InvalidInput("uncertainty set is empty");
    const std::size_t d = U.dim();
    std::vector<LevyTriple> out;
    switch (kind) {
        case ProcessKind::rawJumpPart:
            for (const auto& t : U.triples()) out.push_back(LevyTriple::jumpsOnly(t.measure));
            return UncertaintySet(std::move(out));
        case ProcessKind::compensatedJumpPart: {
            const Point m = meanOfJumpPart(U, 1.0);
            for (const auto& t : U.triples()) out.emplace_back(t.measure, -1.0 * m, Matrix::zeros(d));
            return UncertaintySet(std::move(out));
        }
        case ProcessKind::symmetricCompensated:
            return symmetricCompensatedSet(U.measures());
        case ProcessKind::poissonIntegral: {
            if (!phi || !region) throw InvalidInput("Poisson integral spec needs an integrand and a region");
            return UncertaintySet::fromMeasures(pushforwardScalar(U.measures(), *phi, *region));
        }
        case ProcessKind::continuousPart:
            for (const auto& t : U.triples()) out.emplace_back(DiscreteLevyMeasure::zero(d), t.drift, t.covRoot);
            return UncertaintySet(std::move(out));
    }
    throw InvalidInput("unknown process kind");
}

Point meanOfJumpPart(const UncertaintySet& U, double t) {
    if (U.empty()) throw InvalidInput("uncertainty set is empty");
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("time must be nonnegative");
    const MeasureFamily V = U.measures();
    const std::size_t d = U.dim();
    if (d == 1) {
        const double sup = supIntegral(V, [](const Point& z) { return z[0]; }, Region::punctured(1)).value;
        return Point{t * sup};
    }
    std::vector<Point> means;
    for (const auto& v : V) means.push_back(v.firstMoment());
    for (const auto& cand : means) {
        bool dominates = std::all_of(means.begin(), means.end(), [&](const Point& other) {
            for (std::size_t i = 0; i < d; ++i) {
                if (other[i] > cand[i]) return false;
            }
            return true;
        });
        if (dominates) return t * cand;
    }
    throw Unsupported("no single measure attains the sup of the mean in every coordinate");
}

CadlagPath compensate(const CadlagPath& path, const UncertaintySet& U) {
    const Point m = meanOfJumpPart(U, 1.0);
    if (m.size() != path.dim()) throw InvalidInput("path and uncertainty set differ in dimension");
    const double T = path.horizon();
    return CadlagPath(T, {0.0, T}, {zeroPoint(path.dim()), -T * m}, path.jumps());
}

ProcessSpec compensate(const ProcessSpec& spec) {
    if (spec.kind != ProcessKind::rawJumpPart) throw InvalidInput("only the raw jump part can be compensated");
    meanOfJumpPart(spec.U, 1.0);  // surfaces Unsupported early
    return ProcessSpec::compensatedJumpPart(spec.U);
}

UncertaintySet symmetricCompensatedSet(const MeasureFamily& V) {
    std::vector<LevyTriple> out;
    for (const auto& v : V) out.emplace_back(v, -1.0 * v.firstMoment(), Matrix::zeros(v.dim()));
    return UncertaintySet(std::move(out));
}

MeasureFamily pushforwardSet(const MeasureFamily& V, const VectorFunction& phi, const Region& A) {
    constexpr double snap = 1e-12;
    std::optional<std::size_t> dim;
    std::vector<std::vector<Atom>> images;
    for (const auto& v : V) {
        std::vector<Atom> atoms;
        for (const auto& a : v.atoms()) {
            if (!A.contains(a.location)) continue;
            Point y = phi(a.location);
            for (double c : y) {
                if (!std::isfinite(c)) throw EvaluationError("pushforward map is not finite at an atom");
            }
            if (dim && *dim != y.size()) throw InvalidInput("pushforward map changes output dimension");
            dim = y.size();
            if (norm(y) <= snap) continue;
            auto it = std::find_if(atoms.begin(), atoms.end(),
                                   [&](const Atom& b) { return maxAbsDifference(b.location, y) <= snap; });
            if (it == atoms.end()) {
                atoms.push_back(Atom{std::move(y), a.weight});
            } else {
                it->weight += a.weight;
            }
        }
        images.push_back(std::move(atoms));
    }
    // A family that never meets A gives zero measures; their dimension cannot be
    // observed and defaults to 1.
    MeasureFamily out;
    for (auto& atoms : images) out.emplace_back(std::move(atoms), dim.value_or(1));
    return out;
}

MeasureFamily pushforwardScalar(const MeasureFamily& V, const ScalarFunction& phi, const Region& A) {
    return pushforwardSet(V, [&](const Point& z) { return Point{phi(z)}; }, A);
}

UncertaintySet restrictedProductSet(const UncertaintySet& U, const std::vector<Region>& regions) {
    if (regions.empty()) return U;
    if (U.empty()) return U;
    const std::size_t d = U.dim();
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (!regions[i].boundedAwayFromOrigin(d)) throw InvalidInput("region closure contains 0");
        for (std::size_t j = i + 1; j < regions.size(); ++j) {
            if (regions[i].mayOverlap(regions[j])) throw InvalidInput("regions must be pairwise disjoint");
        }
    }
    const std::size_t blocks = regions.size() + 1;
    const std::size_t D = d * blocks;
    std::vector<LevyTriple> out;
    for (const auto& t : U.triples()) {
        std::vector<Atom> atoms;
        for (const auto& a : t.measure.atoms()) {
            std::size_t block = 0;
            for (std::size_t i = 0; i < regions.size(); ++i) {
                if (regions[i].contains(a.location)) {
                    block = i + 1;
                    break;
                }
            }
            Point z = zeroPoint(D);
            std::copy(a.location.begin(), a.location.end(), z.begin() + static_cast<long>(block * d));
            atoms.push_back(Atom{std::move(z), a.weight});
        }
        Point p = zeroPoint(D);
        std::copy(t.drift.begin(), t.drift.end(), p.begin());
        Matrix q = Matrix::zeros(D);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) q(i, j) = t.covRoot(i, j);
        }
        out.emplace_back(DiscreteLevyMeasure(std::move(atoms), D), std::move(p), std::move(q));
    }
    return UncertaintySet(std::move(out));
}

Decomposition decompose(const CadlagPath& path) { return {path.continuousPart(), path.jumpPart()}; }

MartingaleReport martingaleCheck(const ProcessSpec& spec, double s, double t, const Grid1D& grid) {
    if (!(s >= 0.0 && s < t) || !std::isfinite(t)) throw InvalidInterval("martingale check needs 0 <= s < t");
    const UncertaintySet set = spec.uncertaintySet();
    if (set.empty() || set.dim() != 1) {
        throw InvalidInput("martingale checks need a one-dimensional process");
    }
    Grid1D g = grid;
    g.T = t - s;
    g.dt = std::min(grid.dt, g.T);

    MartingaleReport r;
    r.kind = spec.kind;
    r.s = s;
    r.t = t;
    const RefinedValue up = solveWithRefinement([](const Point& x) { return x[0]; }, set, g, 0.0);
    const RefinedValue down = solveWithRefinement([](const Point& x) { return -x[0]; }, set, g, 0.0);
    r.maxDeviation = std::abs(up.fine);
    r.symmetricDeviation = std::abs(down.fine);
    r.schemeError = std::max(up.schemeError, down.schemeError);
    r.tolerance = std::max(2.0 * r.schemeError, 1e-3);
    r.isMartingale = r.maxDeviation <= r.tolerance;
    r.isSymmetric = r.isMartingale && r.symmetricDeviation <= r.tolerance;
    return r;
}

}  // namespace glevy
