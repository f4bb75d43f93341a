#pragma once

#include "glevy/levy_measure.hpp"
#include "glevy/linalg.hpp"
#include "glevy/region.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace glevy {

/// (v, p, Q): jump measure, drift, covariance root.
struct LevyTriple {
    DiscreteLevyMeasure measure;
    Point drift;
    Matrix covRoot;

    static LevyTriple jumpsOnly(DiscreteLevyMeasure v);
    LevyTriple(DiscreteLevyMeasure v, Point p, Matrix q);

    std::size_t dim() const { return drift.size(); }
    /// int |z| v(dz) + |p| + tr(Q Q^T)
    double boundTerm() const;
};

/// The set U parameterizing the nonlocal generator.
///
/// Either an explicit list of triples or a parametric rule enumerated on a
/// tensor grid over a parameter box; both end up as a finite list, which is
/// the only thing the numerics consume. The empty set is representable (it is
/// the image of the empty measure family) but rejected by `validate`.
class UncertaintySet {
public:
    using Rule = std::function<LevyTriple(const Point& parameter)>;

    UncertaintySet() = default;
    explicit UncertaintySet(std::vector<LevyTriple> triples);

    /// Enumerate `rule` on the tensor grid with `counts[i]` points on [lo[i], hi[i]].
    static UncertaintySet parametric(const Point& lo, const Point& hi,
                                     const std::vector<std::size_t>& counts, const Rule& rule);
    /// Jumps-only set {(v, 0, 0) : v in V}.
    static UncertaintySet fromMeasures(const MeasureFamily& family);

    const std::vector<LevyTriple>& triples() const { return triples_; }
    const LevyTriple& operator[](std::size_t i) const { return triples_[i]; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }
    std::size_t dim() const;

    /// The projection V = {v : (v,p,Q) in U}, one entry per triple.
    MeasureFamily measures() const;
    /// Parameter values the triples were enumerated from (empty for explicit sets).
    const std::vector<Point>& parameters() const { return parameters_; }

private:
    std::vector<LevyTriple> triples_;
    std::vector<Point> parameters_;
};

struct SupResult {
    double value = 0.0;
    std::size_t argmax = 0;
};

struct ValidationReport {
    /// sup of int|z|dv + |p| + tr(QQ^T)
    SupResult bound;
    /// sup_v int_{0<|z|<1} |z|^q dv
    SupResult smallJumpMoment;
    /// sup_v int_{|z|>=1} |z|^p dv
    SupResult largeJumpMoment;
    double q = 0.0;
    double p = 0.0;
    bool boundFinite = false;
    bool smallJumpFinite = false;
    bool largeJumpFinite = false;

    bool passed() const { return boundFinite && smallJumpFinite && largeJumpFinite; }
};

/// Checks the uniform bound and both moment assumptions. Throws InvalidInput on an
/// empty set or q outside (0,1) / p <= 1; a non-finite supremum only clears a flag.
ValidationReport validate(const UncertaintySet& set, double qMoment, double pMoment);

/// sup_{v in V} v(A). Ties resolve to the lowest index.
SupResult vCapacity(const MeasureFamily& family, const Region& region);
/// sup_{v in V} int_A phi dv.
SupResult supIntegral(const MeasureFamily& family, const ScalarFunction& phi, const Region& region);

}  // namespace glevy
