#pragma once

#include "glevy/cadlag_path.hpp"
#include "glevy/region.hpp"
#include "glevy/transport.hpp"
#include "glevy/uncertainty.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

namespace glevy {

/// Shared Monte Carlo settings.
struct MonteCarloSetup {
    double horizon = 1.0;
    /// Euler step for the Brownian part; only used when some triple has Q != 0.
    double dt = 0.01;
    BaseMeasure base = TailDensity::inverseSquare();
    /// Worker threads; 0 means one per hardware thread.
    unsigned threads = 0;
    /// Paths per work unit. Results depend on it, so it is part of the setup.
    std::size_t chunkSize = 512;
};

/// What a scenario has to carry for a given uncertainty set.
struct ScenarioSpec {
    double horizon = 1.0;
    double dt = 0.01;
    std::size_t nSteps = 100;
    std::size_t dim = 1;
    /// Rate of the base jumps that can be mapped to a nonzero jump.
    double jumpRate = 0.0;
    bool brownian = false;
    BaseMeasure base = TailDensity::inverseSquare();
};

/// Base jumps of the Poisson random measure N(dt, dz) with intensity mu x dt,
/// restricted to marks that some admissible control can see.
struct BaseJump {
    double time = 0.0;
    /// Mark in (0, inf) for a density base measure.
    double mark = 0.0;
    /// Atom index for a discrete base measure.
    std::size_t atom = 0;
};

/// One outcome of the base space: Brownian increments on a uniform grid and
/// base Poisson jumps. It depends on (seed, pathIndex, spec) only, so every
/// control evaluated on it sees common random numbers.
struct BaseScenario {
    std::uint64_t seed = 0;
    std::uint64_t pathIndex = 0;
    double horizon = 1.0;
    double dt = 0.01;
    std::size_t nSteps = 0;
    std::size_t dim = 1;
    /// nSteps * dim increments, step-major; empty when no triple has Q != 0.
    std::vector<double> brownian;
    std::vector<BaseJump> jumps;
};

/// Mark relabeling for a discrete base measure: base atom i maps to targets[i]
/// (the zero vector means "no jump").
struct AtomRelabeling {
    std::vector<Point> targets;
};

using JumpMap = std::variant<TransportMap, AtomRelabeling>;

/// Control value theta = (theta^d, theta^{1,c}, theta^{2,c}) on one interval.
struct ControlValue {
    JumpMap jumpMap;
    Point drift;
    Matrix covRoot;
};

/// Deterministic control, constant on each interval (b_i, b_{i+1}].
class ControlPolicy {
public:
    ControlPolicy() = default;
    ControlPolicy(std::vector<double> breakpoints, std::vector<ControlValue> values);
    static ControlPolicy constant(ControlValue value, double horizon);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<ControlValue>& values() const { return values_; }

    /// Index of the interval (b_i, b_{i+1}] containing t; t = b_0 maps to 0.
    std::size_t indexAt(double t) const;
    bool covers(double t0, double t1) const;

private:
    std::vector<double> breakpoints_;
    std::vector<ControlValue> values_;
};

ScenarioSpec makeScenarioSpec(const MonteCarloSetup& setup, const UncertaintySet& U);
BaseScenario generateScenario(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t pathIndex);

/// The control value realizing triple (v, p, Q) over a density base measure.
ControlValue controlValueFor(const LevyTriple& triple, const BaseMeasure& base);
/// The measure mu o theta^{-1} restricted to R_0.
DiscreteLevyMeasure pushforward(const JumpMap& map, const BaseMeasure& base);
/// Throws InvalidPolicy unless every value of the policy lies in U~.
void checkAdmissible(const ControlPolicy& policy, const UncertaintySet& U, const BaseMeasure& base);

/// One constant policy per triple of U.
std::vector<ControlPolicy> constantControls(const UncertaintySet& U, const BaseMeasure& base, double horizon);
/// Every assignment of triples to `nIntervals` equal subintervals (|U|^n policies).
/// Throws InvalidInput when that exceeds `maxPolicies`.
std::vector<ControlPolicy> piecewiseConstantControls(const UncertaintySet& U, const BaseMeasure& base,
                                                     double horizon, std::size_t nIntervals,
                                                     std::size_t maxPolicies = 4096);

/// B^{t0,theta}: zero on [0, t0], then drift, diffusion and mapped base jumps
/// on (t0, T]. Throws InvalidPolicy when theta leaves a gap or, with Q != 0,
/// its breakpoints are not on the Brownian grid.
CadlagPath simulatePath(const BaseScenario& scenario, const ControlPolicy& theta, double t0, double T);

using PathFunctional = std::function<double(const CadlagPath&)>;
using PathEvent = std::function<bool(const CadlagPath&)>;

struct McEstimate {
    double value = 0.0;
    double stdError = 0.0;
    std::size_t argmax = 0;
    std::vector<double> means;
    std::vector<double> stdErrors;
    std::size_t nPaths = 0;
};

/// max over candidates of the sample mean of xi, all candidates on the same
/// scenarios. A lower estimate of the sublinear expectation. Reductions run in
/// path-index order, so the result does not depend on the thread count.
McEstimate estimateUpperExpectation(const PathFunctional& xi, const UncertaintySet& U,
                                    const std::vector<ControlPolicy>& candidates, std::size_t nPaths,
                                    std::uint64_t seed, const MonteCarloSetup& setup = {});

McEstimate estimateCapacity(const PathEvent& event, const UncertaintySet& U,
                            const std::vector<ControlPolicy>& candidates, std::size_t nPaths,
                            std::uint64_t seed, const MonteCarloSetup& setup = {});

/// P(Gamma(k, rate) in [lo, hi]); hi may be +inf.
double erlangIntervalMass(std::size_t k, double rate, double lo, double hi);

struct ErlangBound {
    double value = 0.0;
    std::size_t argmax = 0;
};

/// sup_v v(B n A)/v(A) * Erlang_{k, rate v(A)}([lo, hi]). Throws
/// PreconditionViolation if some v has v(A) = 0.
ErlangBound erlangAnalyticBound(const MeasureFamily& V, const Region& A, const Region& B, std::size_t k,
                                double lo, double hi);

struct ErlangCheck {
    McEstimate mc;
    double analyticBound = 0.0;
    std::size_t boundArgmax = 0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
};

/// Estimates c(Delta X_{tau^k_A} in B, tau^k_A in C) with constant controls and
/// compares it with the analytic bound; C = [lo, hi] is clipped to [0, T].
ErlangCheck erlangBoundCheck(const UncertaintySet& U, const Region& A, const Region& B, std::size_t k,
                             double lo, double hi, std::size_t nPaths, std::uint64_t seed,
                             const MonteCarloSetup& setup = {});

}  // namespace glevy
