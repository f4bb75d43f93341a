#include "glevy/cadlag_path.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <cmath>

namespace glevy {

namespace {

bool allFinite(const Point& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

CadlagPath::CadlagPath(double horizon, std::vector<double> gridTimes, std::vector<Point> gridValues,
                       std::vector<Jump> jumps)
    : horizon_(horizon),
      gridTimes_(std::move(gridTimes)),
      gridValues_(std::move(gridValues)),
      jumps_(std::move(jumps)) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw InvalidInput("path horizon must be positive");
    if (gridTimes_.size() < 2 || gridTimes_.size() != gridValues_.size()) {
        throw InvalidInput("path grid needs at least two samples with one value each");
    }
    if (gridTimes_.front() != 0.0 || gridTimes_.back() != horizon_) {
        throw InvalidInput("path grid must start at 0 and end at the horizon");
    }
    for (std::size_t i = 1; i < gridTimes_.size(); ++i) {
        if (!(gridTimes_[i] > gridTimes_[i - 1])) throw InvalidInput("path grid times must increase");
    }
    dim_ = gridValues_.front().size();
    if (dim_ == 0) throw InvalidInput("path dimension must be at least 1");
    for (const auto& v : gridValues_) {
        if (v.size() != dim_ || !allFinite(v)) throw InvalidInput("bad path sample value");
    }
    if (!isZero(gridValues_.front())) throw InvalidInput("path must start at 0");
    double prev = 0.0;
    jumpPrefix_.assign(1, zeroPoint(dim_));
    jumpPrefix_.reserve(jumps_.size() + 1);
    for (const auto& j : jumps_) {
        if (!(j.time > prev) || j.time > horizon_) {
            throw InvalidInput("jump times must increase strictly within (0, T]");
        }
        if (j.size.size() != dim_ || !allFinite(j.size) || isZero(j.size)) {
            throw InvalidInput("jump sizes must be finite, nonzero and of the path dimension");
        }
        prev = j.time;
        jumpPrefix_.push_back(jumpPrefix_.back() + j.size);
    }
}

CadlagPath CadlagPath::zero(double horizon, std::size_t dim) { return pureJump(horizon, {}, dim); }

CadlagPath CadlagPath::pureJump(double horizon, std::vector<Jump> jumps, std::size_t dim) {
    return CadlagPath(horizon, {0.0, horizon}, {zeroPoint(dim), zeroPoint(dim)}, std::move(jumps));
}

CadlagPath CadlagPath::scalarJumps(double horizon, const std::vector<std::pair<double, double>>& jumps) {
    std::vector<Jump> js;
    js.reserve(jumps.size());
    for (auto [t, s] : jumps) js.push_back(Jump{t, {s}});
    return pureJump(horizon, std::move(js), 1);
}

Point CadlagPath::continuousValue(double t) const {
    if (t <= 0.0) return gridValues_.front();
    if (t >= horizon_) return gridValues_.back();
    auto it = std::upper_bound(gridTimes_.begin(), gridTimes_.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - gridTimes_.begin());
    std::size_t lo = hi - 1;
    double t0 = gridTimes_[lo];
    if (t == t0) return gridValues_[lo];
    double w = (t - t0) / (gridTimes_[hi] - t0);
    Point out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = gridValues_[lo][i] + w * (gridValues_[hi][i] - gridValues_[lo][i]);
    }
    return out;
}

Point CadlagPath::jumpSum(double t) const {
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                               [](double x, const Jump& j) { return x < j.time; });
    return jumpPrefix_[static_cast<std::size_t>(it - jumps_.begin())];
}

Point CadlagPath::value(double t) const { return continuousValue(t) + jumpSum(t); }

Point CadlagPath::leftLimit(double t) const {
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                               [](const Jump& j, double x) { return j.time < x; });
    return continuousValue(t) + jumpPrefix_[static_cast<std::size_t>(it - jumps_.begin())];
}

bool CadlagPath::isPiecewiseConstant() const {
    return std::all_of(gridValues_.begin(), gridValues_.end(), [](const Point& v) { return isZero(v); });
}

std::vector<double> CadlagPath::eventTimes() const {
    std::vector<double> times = gridTimes_;
    for (const auto& j : jumps_) times.push_back(j.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

CadlagPath CadlagPath::continuousPart() const { return CadlagPath(horizon_, gridTimes_, gridValues_, {}); }

CadlagPath CadlagPath::jumpPart() const { return pureJump(horizon_, jumps_, dim_); }

}  // namespace glevy
