#include "glevy/uncertainty.hpp"

#include "glevy/errors.hpp"

#include <cmath>
#include <limits>

namespace glevy {

LevyTriple::LevyTriple(DiscreteLevyMeasure v, Point p, Matrix q)
    : measure(std::move(v)), drift(std::move(p)), covRoot(std::move(q)) {
    const std::size_t d = measure.dim();
    if (drift.size() != d) throw InvalidInput("drift dimension does not match the jump measure");
    if (covRoot.rows() != d || covRoot.cols() != d) {
        throw InvalidInput("covariance root must be d x d");
    }
    for (double x : drift) {
        if (!std::isfinite(x)) throw InvalidInput("non-finite drift");
    }
    for (double x : covRoot.data()) {
        if (!std::isfinite(x)) throw InvalidInput("non-finite covariance root");
    }
}

LevyTriple LevyTriple::jumpsOnly(DiscreteLevyMeasure v) {
    const std::size_t d = v.dim();
    return LevyTriple(std::move(v), zeroPoint(d), Matrix::zeros(d));
}

double LevyTriple::boundTerm() const {
    double jump = 0.0;
    for (const auto& a : measure.atoms()) jump += norm(a.location) * a.weight;
    return jump + norm(drift) + covRoot.traceOuter();
}

UncertaintySet::UncertaintySet(std::vector<LevyTriple> triples) : triples_(std::move(triples)) {
    for (const auto& t : triples_) {
        if (t.dim() != triples_.front().dim()) throw InvalidInput("triples of mixed dimension");
    }
}

UncertaintySet UncertaintySet::parametric(const Point& lo, const Point& hi,
                                          const std::vector<std::size_t>& counts, const Rule& rule) {
    if (lo.size() != hi.size() || lo.size() != counts.size() || lo.empty()) {
        throw InvalidInput("parameter box and grid counts disagree in dimension");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (counts[i] == 0) throw InvalidInput("enumeration grid needs at least one point per axis");
        if (!(lo[i] <= hi[i])) throw InvalidInput("parameter box has lo > hi");
    }
    std::vector<LevyTriple> triples;
    std::vector<Point> params;
    std::vector<std::size_t> idx(lo.size(), 0);
    while (true) {
        Point theta(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            theta[i] = counts[i] == 1
                           ? lo[i]
                           : lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) /
                                         static_cast<double>(counts[i] - 1);
        }
        triples.push_back(rule(theta));
        params.push_back(theta);
        std::size_t axis = 0;
        while (axis < idx.size() && ++idx[axis] == counts[axis]) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == idx.size()) break;
    }
    UncertaintySet set(std::move(triples));
    set.parameters_ = std::move(params);
    return set;
}

UncertaintySet UncertaintySet::fromMeasures(const MeasureFamily& family) {
    std::vector<LevyTriple> triples;
    triples.reserve(family.size());
    for (const auto& v : family) triples.push_back(LevyTriple::jumpsOnly(v));
    return UncertaintySet(std::move(triples));
}

std::size_t UncertaintySet::dim() const {
    if (triples_.empty()) throw InvalidInput("empty uncertainty set has no dimension");
    return triples_.front().dim();
}

MeasureFamily UncertaintySet::measures() const {
    MeasureFamily family;
    family.reserve(triples_.size());
    for (const auto& t : triples_) family.push_back(t.measure);
    return family;
}

namespace {

template <class F>
SupResult supOver(std::size_t n, F&& value) {
    SupResult best{-std::numeric_limits<double>::infinity(), 0};
    for (std::size_t i = 0; i < n; ++i) {
        double v = value(i);
        if (std::isnan(v)) {
            best.value = v;
            best.argmax = i;
            return best;
        }
        if (v > best.value) {
            best.value = v;
            best.argmax = i;
        }
    }
    return best;
}

}  // namespace

ValidationReport validate(const UncertaintySet& set, double qMoment, double pMoment) {
    if (set.empty()) throw InvalidInput("uncertainty set is empty");
    if (!(qMoment > 0.0 && qMoment < 1.0)) throw InvalidInput("small-jump exponent q must lie in (0,1)");
    if (!(pMoment > 1.0)) throw InvalidInput("large-jump exponent p must exceed 1");

    ValidationReport report;
    report.q = qMoment;
    report.p = pMoment;
    report.bound = supOver(set.size(), [&](std::size_t i) { return set[i].boundTerm(); });
    report.smallJumpMoment = supOver(set.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (const auto& a : set[i].measure.atoms()) {
            double r = norm(a.location);
            if (r < 1.0) acc += std::pow(r, qMoment) * a.weight;
        }
        return acc;
    });
    report.largeJumpMoment = supOver(set.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (const auto& a : set[i].measure.atoms()) {
            double r = norm(a.location);
            if (r >= 1.0) acc += std::pow(r, pMoment) * a.weight;
        }
        return acc;
    });
    report.boundFinite = std::isfinite(report.bound.value);
    report.smallJumpFinite = std::isfinite(report.smallJumpMoment.value);
    report.largeJumpFinite = std::isfinite(report.largeJumpMoment.value);
    return report;
}

SupResult vCapacity(const MeasureFamily& family, const Region& region) {
    if (family.empty()) throw InvalidInput("measure family is empty");
    return supOver(family.size(), [&](std::size_t i) { return family[i].mass(region); });
}

SupResult supIntegral(const MeasureFamily& family, const ScalarFunction& phi, const Region& region) {
    if (family.empty()) throw InvalidInput("measure family is empty");
    return supOver(family.size(), [&](std::size_t i) { return family[i].integrate(phi, region); });
}

}  // namespace glevy
