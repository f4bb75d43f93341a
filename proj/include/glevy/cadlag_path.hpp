#pragma once

#include "glevy/linalg.hpp"

#include <vector>

namespace glevy {

struct Jump {
    double time = 0.0;
    Point size;

    friend bool operator==(const Jump&, const Jump&) = default;
};

/// Right-continuous path with left limits on [0, T].
///
/// Stored as a continuous part sampled on a grid (linear in between) plus an
/// explicit list of jumps, so jump sizes are exact:
///
///     x(t) = c(t) + sum_{t_j <= t} Delta_j,   c(0) = 0.
///
/// Grid times are strictly increasing, start at 0 and end at T. Jump times are
/// strictly increasing in (0, T] and jump sizes are nonzero.
class CadlagPath {
public:
    CadlagPath() = default;
    CadlagPath(double horizon, std::vector<double> gridTimes, std::vector<Point> gridValues,
               std::vector<Jump> jumps);

    /// The zero path.
    static CadlagPath zero(double horizon, std::size_t dim = 1);
    /// A path that only moves by jumps.
    static CadlagPath pureJump(double horizon, std::vector<Jump> jumps, std::size_t dim = 1);
    /// Scalar convenience: jumps given as (time, size) pairs.
    static CadlagPath scalarJumps(double horizon, const std::vector<std::pair<double, double>>& jumps);

    double horizon() const { return horizon_; }
    std::size_t dim() const { return dim_; }
    const std::vector<double>& gridTimes() const { return gridTimes_; }
    const std::vector<Point>& gridValues() const { return gridValues_; }
    const std::vector<Jump>& jumps() const { return jumps_; }

    /// x(t) for t in [0, T].
    Point value(double t) const;
    /// x(t-); equals x(0) at t = 0.
    Point leftLimit(double t) const;
    /// Continuous part c(t).
    Point continuousValue(double t) const;
    /// sum_{t_j <= t} Delta_j.
    Point jumpSum(double t) const;

    /// True when the continuous part vanishes, i.e. the path is constant between jumps.
    bool isPiecewiseConstant() const;
    /// Sorted union of grid times and jump times (always contains 0 and T).
    std::vector<double> eventTimes() const;

    /// The path without its jumps.
    CadlagPath continuousPart() const;
    /// The path keeping only its jumps.
    CadlagPath jumpPart() const;

    friend bool operator==(const CadlagPath&, const CadlagPath&) = default;

private:
    double horizon_ = 1.0;
    std::size_t dim_ = 1;
    std::vector<double> gridTimes_{0.0, 1.0};
    std::vector<Point> gridValues_{Point{0.0}, Point{0.0}};
    std::vector<Jump> jumps_;
    std::vector<Point> jumpPrefix_{Point{0.0}};  // jumpPrefix_[k] = sum of the first k jumps
};

}  // namespace glevy
