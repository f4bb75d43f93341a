#pragma once

#include "glevy/linalg.hpp"
#include "glevy/region.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace glevy {

struct Atom {
    Point location;
    double weight = 0.0;
};

/// Finite-activity Levy measure with finitely many atoms on R^d_0.
///
/// Invariants (checked at construction): every location is nonzero and finite,
/// every weight is finite and strictly positive, locations are pairwise distinct
/// and share one dimension. The zero measure is represented by an empty atom list.
class DiscreteLevyMeasure {
public:
    DiscreteLevyMeasure() = default;
    explicit DiscreteLevyMeasure(std::vector<Atom> atoms, std::optional<std::size_t> dim = {});

    static DiscreteLevyMeasure zero(std::size_t dim = 1);
    static DiscreteLevyMeasure dirac(double location, double weight = 1.0);
    /// Scalar atoms given as (location, weight) pairs.
    static DiscreteLevyMeasure fromPairs(const std::vector<std::pair<double, double>>& pairs);

    std::size_t dim() const { return dim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    double totalMass() const;
    double mass(const Region& region) const;
    double massWhere(const std::function<bool(const Point&)>& predicate) const;
    /// sum over atoms in `region` of f(z) w; throws EvaluationError on a non-finite f(z).
    double integrate(const ScalarFunction& f, const Region& region) const;
    /// int z v(dz), coordinatewise.
    Point firstMoment() const;

    /// Same atom set and weights up to `tol` (order-insensitive).
    bool approxEqual(const DiscreteLevyMeasure& other, double tol = 1e-12) const;

private:
    std::vector<Atom> atoms_;
    std::size_t dim_ = 1;
};

/// A family V of Levy measures; sup-type operations range over its members.
using MeasureFamily = std::vector<DiscreteLevyMeasure>;

}  // namespace glevy
