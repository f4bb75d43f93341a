#pragma once

#include "glevy/linalg.hpp"
#include "glevy/uncertainty.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace glevy {

/// Uniform space-time lattice for the one-dimensional integro-PDE.
struct Grid1D {
    double xMin = -5.0;
    double xMax = 5.0;
    std::size_t nx = 1001;
    /// Requested time step; the solver uses T / ceil(T / dt).
    double dt = 1e-3;
    double T = 1.0;

    double dx() const;
    std::size_t nt() const;
    double effectiveDt() const;
    double node(std::size_t i) const;
    void validate() const;
};

/// Largest dt with dt * (sup_v v(R_0) + sup Q^2 / dx^2 + sup |p| / dx) <= 1.
double stableDt(const UncertaintySet& U, double dx);
/// dt * (sup_v v(R_0) + sup Q^2 / dx^2 + sup |p| / dx) for the grid's effective step.
double cflNumber(const UncertaintySet& U, const Grid1D& grid);
/// Half the spacing, with dt halved or cut further to stay within the CFL bound.
Grid1D refineGrid(const Grid1D& grid, const UncertaintySet& U);

struct SolveDiagnostics {
    double cflNumber = 0.0;
    /// How often each triple attained the sup over all nodes and steps.
    std::vector<std::size_t> argmaxCounts;
    /// Largest |z| over all atoms.
    double jumpReach = 0.0;
    std::size_t steps = 0;
};

struct GridSolution {
    Grid1D grid;
    std::vector<double> x;
    /// Stored layer times; always includes 0 and T.
    std::vector<double> times;
    /// values[m][i] = u(times[m], x[i]).
    std::vector<std::vector<double>> values;
    SolveDiagnostics diagnostics;

    /// u(t, x) by linear interpolation in x and t (constant outside [xMin, xMax]).
    double at(double t, double x) const;
    /// u(T, x).
    double terminalAt(double x) const;
};

struct SolveOptions {
    /// Keep at most this many stored values; intermediate layers are thinned.
    std::size_t maxStoredValues = 4'000'000;
};

/// Explicit monotone scheme for d_t u = G[u(t, x + .) - u(t, x)], u(0, .) = phi:
///
///     u_i^{m+1} = u_i^m + dt * max_j { sum_atoms w (u^m(x_i + z) - u_i^m)
///                                      + p D u_i^m + 1/2 Q^2 D^2 u_i^m }
///
/// with upwind first differences, central second differences, linear
/// interpolation for x_i + z and constant extrapolation past the ends.
/// Throws Unsupported for d != 1, CflViolation when the CFL number exceeds 1
/// and NumericalError on a non-finite value.
GridSolution solveIPDE(const ScalarFunction& phi, const UncertaintySet& U, const Grid1D& grid,
                       const SolveOptions& options = {});
/// Same, from initial node values.
GridSolution solveIPDEValues(const std::vector<double>& initial, const UncertaintySet& U, const Grid1D& grid,
                             const SolveOptions& options = {});

/// Final layer only (no stored history).
std::vector<double> solveTerminal(const std::vector<double>& initial, const UncertaintySet& U,
                                  const Grid1D& grid);

/// Value at one node of u(T, .) with its scheme error estimated from one refinement.
struct RefinedValue {
    double coarse = 0.0;
    double fine = 0.0;
    /// |fine - coarse|, the first-order error estimate of the fine value.
    double schemeError = 0.0;
};
RefinedValue solveWithRefinement(const ScalarFunction& phi, const UncertaintySet& U, const Grid1D& grid,
                                 double x = 0.0);

/// Analytic derivatives at 0 for applyG.
struct Derivatives {
    Point gradient;
    Matrix hessian;
};

struct ApplyGOptions {
    double h = 1e-4;
    std::optional<Derivatives> derivatives;
};

/// G[f] = sup_{(v,p,Q) in U} { int f dv + <Df(0), p> + 1/2 tr(D^2 f(0) Q Q^T) }.
/// Throws InvalidInput when |f(0)| > 1e-12.
SupResult applyG(const ScalarFunction& f, const UncertaintySet& U, const ApplyGOptions& options = {});

using CylinderFunction = std::function<double(const std::vector<double>&)>;

/// E[phi(X_{t_1}, X_{t_2} - X_{t_1}, ..., X_{t_n} - X_{t_{n-1}})] by backward
/// recursion; each stage is solved for every frozen argument on the spatial
/// grid nodes (the grid's T is ignored). n <= 3.
double iteratedExpectation(const CylinderFunction& phi, const std::vector<double>& times,
                           const UncertaintySet& U, const Grid1D& grid);

/// E[xi | F_{t_i}] at realized increments x_1, ..., x_i (i = realized.size()).
double conditionalExpectation(const CylinderFunction& phi, const std::vector<double>& times,
                              const std::vector<double>& realized, const UncertaintySet& U,
                              const Grid1D& grid);

/// u(t, 0) for u' = sup_{lambda in [lo, hi]} lambda (u(. + 1) - u), u(0, .) = phi on the
/// counting lattice, i.e. the sublinear expectation of phi(N_t) for a Poisson
/// process with intensity uncertainty [lo, hi].
double gPoissonDistribution(double lambdaMin, double lambdaMax, double t,
                            const std::function<double(long)>& phi);

/// Rows are time layers, columns are x nodes; first row holds the x coordinates
/// behind a leading "t" column.
void writeSolutionCsv(std::ostream& out, const GridSolution& solution);

}  // namespace glevy
