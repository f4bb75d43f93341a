#include "glevy/levy_measure.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace glevy {

DiscreteLevyMeasure::DiscreteLevyMeasure(std::vector<Atom> atoms, std::optional<std::size_t> dim)
    : atoms_(std::move(atoms)) {
    if (dim) {
        dim_ = *dim;
    } else if (!atoms_.empty()) {
        dim_ = atoms_.front().location.size();
    }
    if (dim_ == 0) throw InvalidInput("Levy measure dimension must be at least 1");
    for (const auto& a : atoms_) {
        if (a.location.size() != dim_) throw InvalidInput("atom dimension mismatch");
        if (isZero(a.location)) throw InvalidInput("Levy measure atom at the origin");
        for (double c : a.location) {
            if (!std::isfinite(c)) throw InvalidInput("non-finite atom location");
        }
        if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
            throw InvalidInput("atom weight must be finite and positive");
        }
    }
    std::vector<const Point*> locs;
    locs.reserve(atoms_.size());
    for (const auto& a : atoms_) locs.push_back(&a.location);
    std::sort(locs.begin(), locs.end(), [](const Point* x, const Point* y) { return *x < *y; });
    for (std::size_t i = 1; i < locs.size(); ++i) {
        if (*locs[i] == *locs[i - 1]) throw InvalidInput("duplicate atom location");
    }
}

DiscreteLevyMeasure DiscreteLevyMeasure::zero(std::size_t dim) { return DiscreteLevyMeasure({}, dim); }

DiscreteLevyMeasure DiscreteLevyMeasure::dirac(double location, double weight) {
    return DiscreteLevyMeasure({Atom{{location}, weight}});
}

DiscreteLevyMeasure DiscreteLevyMeasure::fromPairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Atom> atoms;
    atoms.reserve(pairs.size());
    for (auto [z, w] : pairs) atoms.push_back(Atom{{z}, w});
    return DiscreteLevyMeasure(std::move(atoms), 1);
}

double DiscreteLevyMeasure::totalMass() const {
    return std::accumulate(atoms_.begin(), atoms_.end(), 0.0,
                           [](double acc, const Atom& a) { return acc + a.weight; });
}

double DiscreteLevyMeasure::mass(const Region& region) const {
    double m = 0.0;
    for (const auto& a : atoms_) {
        if (region.contains(a.location)) m += a.weight;
    }
    return m;
}

double DiscreteLevyMeasure::massWhere(const std::function<bool(const Point&)>& predicate) const {
    double m = 0.0;
    for (const auto& a : atoms_) {
        if (predicate(a.location)) m += a.weight;
    }
    return m;
}

double DiscreteLevyMeasure::integrate(const ScalarFunction& f, const Region& region) const {
    double acc = 0.0;
    for (const auto& a : atoms_) {
        if (!region.contains(a.location)) continue;
        double y = f(a.location);
        if (!std::isfinite(y)) throw EvaluationError("integrand is not finite at an atom");
        acc += y * a.weight;
    }
    return acc;
}

Point DiscreteLevyMeasure::firstMoment() const {
    Point m = zeroPoint(dim_);
    for (const auto& a : atoms_) {
        for (std::size_t i = 0; i < dim_; ++i) m[i] += a.weight * a.location[i];
    }
    return m;
}

bool DiscreteLevyMeasure::approxEqual(const DiscreteLevyMeasure& other, double tol) const {
    if (dim_ != other.dim_ || atoms_.size() != other.atoms_.size()) return false;
    std::vector<bool> used(other.atoms_.size(), false);
    for (const auto& a : atoms_) {
        bool found = false;
        for (std::size_t j = 0; j < other.atoms_.size(); ++j) {
            if (used[j]) continue;
            const auto& b = other.atoms_[j];
            if (maxAbsDifference(a.location, b.location) <= tol && std::abs(a.weight - b.weight) <= tol) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace glevy
