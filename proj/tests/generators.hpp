#pragma once

// Small random generators for property tests. Every generator takes the engine
// by reference so a test controls its whole stream from one seed.

#include "glevy/cadlag_path.hpp"
#include "glevy/levy_measure.hpp"
#include "glevy/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Scalar atoms on a coarse lattice (multiples of 1/8) so that boundary hits and
/// coincidences are reproducible; locations in [-reach, reach] \ {0}.
inline glevy::DiscreteLevyMeasure measure(Rng& rng, std::size_t maxAtoms = 4, double reach = 3.0,
                                          double maxWeight = 2.0) {
    const std::size_t n = index(rng, 1, maxAtoms);
    std::set<long> used;
    std::vector<std::pair<double, double>> atoms;
    const long lim = static_cast<long>(reach * 8.0);
    while (atoms.size() < n) {
        const long k = std::uniform_int_distribution<long>(-lim, lim)(rng);
        if (k == 0 || !used.insert(k).second) continue;
        atoms.emplace_back(static_cast<double>(k) / 8.0, uniform(rng, 0.05, maxWeight));
    }
    return glevy::DiscreteLevyMeasure::fromPairs(atoms);
}

/// Positive atoms only.
inline glevy::DiscreteLevyMeasure positiveMeasure(Rng& rng, std::size_t maxAtoms = 4, double reach = 3.0,
                                                  double maxWeight = 2.0) {
    const std::size_t n = index(rng, 1, maxAtoms);
    std::set<long> used;
    std::vector<std::pair<double, double>> atoms;
    const long lim = static_cast<long>(reach * 8.0);
    while (atoms.size() < n) {
        const long k = std::uniform_int_distribution<long>(1, lim)(rng);
        if (!used.insert(k).second) continue;
        atoms.emplace_back(static_cast<double>(k) / 8.0, uniform(rng, 0.05, maxWeight));
    }
    return glevy::DiscreteLevyMeasure::fromPairs(atoms);
}

inline glevy::MeasureFamily family(Rng& rng, std::size_t maxSize = 4) {
    glevy::MeasureFamily V;
    const std::size_t n = index(rng, 1, maxSize);
    for (std::size_t i = 0; i < n; ++i) V.push_back(measure(rng));
    return V;
}

/// Piecewise-constant scalar path with up to maxJumps jumps of size in
/// [-2, 2] \ (-0.05, 0.05) at distinct times in (0, T].
inline glevy::CadlagPath jumpPath(Rng& rng, double T = 1.0, std::size_t maxJumps = 6) {
    const std::size_t n = index(rng, 0, maxJumps);
    std::set<double> times;
    while (times.size() < n) times.insert(uniform(rng, 0.0, T));
    std::vector<std::pair<double, double>> jumps;
    for (double t : times) {
        if (t <= 0.0) continue;
        double s = uniform(rng, 0.05, 2.0);
        if (rng() & 1u) s = -s;
        jumps.emplace_back(t, s);
    }
    return glevy::CadlagPath::scalarJumps(T, jumps);
}

/// Jump path plus a random-walk continuous part sampled on a random grid.
inline glevy::CadlagPath mixedPath(Rng& rng, double T = 1.0) {
    const glevy::CadlagPath jumps = jumpPath(rng, T);
    const std::size_t m = index(rng, 1, 20);
    std::set<double> inner;
    while (inner.size() < m) inner.insert(uniform(rng, 0.0, T));
    std::vector<double> grid{0.0};
    for (double t : inner) {
        if (t > 0.0 && t < T) grid.push_back(t);
    }
    grid.push_back(T);
    std::vector<glevy::Point> values{glevy::Point{0.0}};
    for (std::size_t i = 1; i < grid.size(); ++i) values.push_back({values.back()[0] + uniform(rng, -0.3, 0.3)});
    return glevy::CadlagPath(T, grid, values, jumps.jumps());
}

/// Bounded Lipschitz payoff on the real line: a random clamped piecewise-linear function.
struct Payoff {
    std::vector<double> xs;
    std::vector<double> ys;

    double operator()(const glevy::Point& p) const {
        const double x = p[0];
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        const double th = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
        return ys[k - 1] + th * (ys[k] - ys[k - 1]);
    }
};

inline Payoff payoff(Rng& rng, double reach = 4.0) {
    Payoff f;
    const std::size_t n = index(rng, 2, 6);
    std::set<double> xs;
    while (xs.size() < n) xs.insert(uniform(rng, -reach, reach));
    f.xs.assign(xs.begin(), xs.end());
    for (std::size_t i = 0; i < n; ++i) f.ys.push_back(uniform(rng, -1.0, 1.0));
    return f;
}

}  // namespace gen
