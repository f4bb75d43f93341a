#include "glevy/pide.hpp"

#include "glevy/errors.hpp"
#include "glevy/path_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace glevy {

double Grid1D::dx() const { return (xMax - xMin) / static_cast<double>(nx - 1); }

std::size_t Grid1D::nt() const {
    const double ratio = T / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(rounded));
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

double Grid1D::effectiveDt() const { return T / static_cast<double>(nt()); }

double Grid1D::node(std::size_t i) const {
    if (i + 1 == nx) return xMax;
    return xMin + static_cast<double>(i) * dx();
}

void Grid1D::validate() const {
    if (!(std::isfinite(xMin) && std::isfinite(xMax) && xMax > xMin)) throw InvalidInput("grid needs xMin < xMax");
    if (nx < 3) throw InvalidInput("grid needs at least 3 nodes");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("grid time step must be positive");
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("grid horizon must be positive");
}

namespace {

void requireScalar(const UncertaintySet& U) {
    if (U.empty()) throw InvalidInput("uncertainty set is empty");
    if (U.dim() != 1) throw Unsupported("the integro-PDE solver is one-dimensional");
}

struct CflTerms {
    double mass = 0.0;
    double q2 = 0.0;
    double drift = 0.0;
};

CflTerms cflTerms(const UncertaintySet& U) {
    CflTerms c;
    for (const auto& t : U.triples()) {
        c.mass = std::max(c.mass, t.measure.totalMass());
        c.q2 = std::max(c.q2, t.covRoot.traceOuter());
        c.drift = std::max(c.drift, std::abs(t.drift[0]));
    }
    return c;
}

}  // namespace

double stableDt(const UncertaintySet& U, double dx) {
    requireScalar(U);
    const CflTerms c = cflTerms(U);
    const double rate = c.mass + c.q2 / (dx * dx) + c.drift / dx;
    return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

double cflNumber(const UncertaintySet& U, const Grid1D& grid) {
    requireScalar(U);
    const CflTerms c = cflTerms(U);
    const double dx = grid.dx();
    return grid.effectiveDt() * (c.mass + c.q2 / (dx * dx) + c.drift / dx);
}

Grid1D refineGrid(const Grid1D& grid, const UncertaintySet& U) {
    Grid1D fine = grid;
    fine.nx = 2 * grid.nx - 1;
    fine.dt = std::min(grid.dt / 2.0, stableDt(U, fine.dx()));
    return fine;
}

namespace {

struct AtomStencil {
    long shift;
    double theta;
    double weight;
};

struct TripleStencil {
    std::vector<AtomStencil> atoms;
    double drift;
    double halfQ2;
};

// One explicit step of the monotone scheme on a fixed grid.
class Stepper {
public:
    Stepper(const UncertaintySet& U, const Grid1D& grid) : dx_(grid.dx()), dt_(grid.effectiveDt()) {
        for (const auto& t : U.triples()) {
            TripleStencil s{{}, t.drift[0], 0.5 * t.covRoot.traceOuter()};
            for (const auto& a : t.measure.atoms()) {
                const double pos = a.location[0] / dx_;
                double fl = std::floor(pos);
                double theta = pos - fl;
                if (theta < 1e-9) {
                    theta = 0.0;
                } else if (theta > 1.0 - 1e-9) {
                    fl += 1.0;
                    theta = 0.0;
                }
                s.atoms.push_back({static_cast<long>(fl), theta, a.weight});
            }
            stencils_.push_back(std::move(s));
        }
        counts_.assign(stencils_.size(), 0);
    }

    void step(const std::vector<double>& u, std::vector<double>& out) {
        const long n = static_cast<long>(u.size());
        auto at = [&](long k) { return u[static_cast<std::size_t>(std::clamp(k, 0L, n - 1))]; };
        const double invDx = 1.0 / dx_;
        const double invDx2 = invDx * invDx;
        for (long i = 0; i < n; ++i) {
            const double ui = u[static_cast<std::size_t>(i)];
            const double up = at(i + 1);
            const double dn = at(i - 1);
            double best = -std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t j = 0; j < stencils_.size(); ++j) {
                const auto& s = stencils_[j];
                double val = 0.0;
                for (const auto& a : s.atoms) {
                    const double lo = at(i + a.shift);
                    const double shifted = a.theta == 0.0 ? lo : lo + a.theta * (at(i + a.shift + 1) - lo);
                    val += a.weight * (shifted - ui);
                }
                if (s.drift > 0.0) {
                    val += s.drift * (up - ui) * invDx;
                } else if (s.drift < 0.0) {
                    val += s.drift * (ui - dn) * invDx;
                }
                if (s.halfQ2 != 0.0) val += s.halfQ2 * (up - 2.0 * ui + dn) * invDx2;
                if (val > best) {
                    best = val;
                    arg = j;
                }
            }
            ++counts_[arg];
            const double next = ui + dt_ * best;
            if (!std::isfinite(next)) throw NumericalError("non-finite value in the integro-PDE scheme");
            out[static_cast<std::size_t>(i)] = next;
        }
    }

    const std::vector<std::size_t>& counts() const { return counts_; }

private:
    double dx_;
    double dt_;
    std::vector<TripleStencil> stencils_;
    std::vector<std::size_t> counts_;
};

void checkCfl(const UncertaintySet& U, const Grid1D& grid) {
    const double cfl = cflNumber(U, grid);
    if (cfl > 1.0 + 1e-12) {
        throw CflViolation("CFL number " + formatShortest(cfl) + " exceeds 1; reduce dt to at most " +
                           formatShortest(stableDt(U, grid.dx())));
    }
}

std::vector<double> sampleNodes(const ScalarFunction& phi, const Grid1D& grid) {
    std::vector<double> v(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i) {
        v[i] = phi(Point{grid.node(i)});
        if (!std::isfinite(v[i])) throw EvaluationError("initial condition is not finite on the grid");
    }
    return v;
}

double interpolate(const std::vector<double>& values, const Grid1D& grid, double x) {
    if (x <= grid.xMin) return values.front();
    if (x >= grid.xMax) return values.back();
    const double pos = (x - grid.xMin) / grid.dx();
    std::size_t k = std::min(static_cast<std::size_t>(pos), grid.nx - 2);
    const double theta = pos - static_cast<double>(k);
    if (theta == 0.0) return values[k];
    return values[k] + theta * (values[k + 1] - values[k]);
}

double jumpReach(const UncertaintySet& U) {
    double r = 0.0;
    for (const auto& t : U.triples()) {
        for (const auto& a : t.measure.atoms()) r = std::max(r, std::abs(a.location[0]));
    }
    return r;
}

}  // namespace

double GridSolution::at(double t, double xq) const {
    if (t <= times.front()) return interpolate(values.front(), grid, xq);
    if (t >= times.back()) return interpolate(values.back(), grid, xq);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double a = interpolate(values[lo], grid, xq);
    if (t == times[lo]) return a;
    const double b = interpolate(values[hi], grid, xq);
    return a + (t - times[lo]) / (times[hi] - times[lo]) * (b - a);
}

double GridSolution::terminalAt(double xq) const { return interpolate(values.back(), grid, xq); }

GridSolution solveIPDEValues(const std::vector<double>& initial, const UncertaintySet& U, const Grid1D& grid,
                             const SolveOptions& options) {
    requireScalar(U);
    grid.validate();
    if (initial.size() != grid.nx) throw InvalidInput("initial values do not match the grid");
    checkCfl(U, grid);

    GridSolution sol;
    sol.grid = grid;
    sol.x.resize(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i) sol.x[i] = grid.node(i);
    const std::size_t nt = grid.nt();
    const double dt = grid.effectiveDt();
    const std::size_t budget = std::max<std::size_t>(options.maxStoredValues / grid.nx, 2);
    const std::size_t stride = std::max<std::size_t>(1, (nt + budget - 1) / (budget - 1));

    Stepper stepper(U, grid);
    std::vector<double> u = initial;
    std::vector<double> next(grid.nx);
    sol.times.push_back(0.0);
    sol.values.push_back(u);
    for (std::size_t m = 1; m <= nt; ++m) {
        stepper.step(u, next);
        u.swap(next);
        if (m % stride == 0 || m == nt) {
            sol.times.push_back(m == nt ? grid.T : static_cast<double>(m) * dt);
            sol.values.push_back(u);
        }
    }
    sol.diagnostics.cflNumber = cflNumber(U, grid);
    sol.diagnostics.argmaxCounts = stepper.counts();
    sol.diagnostics.jumpReach = jumpReach(U);
    sol.diagnostics.steps = nt;
    return sol;
}

GridSolution solveIPDE(const ScalarFunction& phi, const UncertaintySet& U, const Grid1D& grid,
                       const SolveOptions& options) {
    grid.validate();
    return solveIPDEValues(sampleNodes(phi, grid), U, grid, options);
}

std::vector<double> solveTerminal(const std::vector<double>& initial, const UncertaintySet& U,
                                  const Grid1D& grid) {
    requireScalar(U);
    grid.validate();
    if (initial.size() != grid.nx) throw InvalidInput("initial values do not match the grid");
    checkCfl(U, grid);
    Stepper stepper(U, grid);
    std::vector<double> u = initial;
    std::vector<double> next(grid.nx);
    for (std::size_t m = 0, nt = grid.nt(); m < nt; ++m) {
        stepper.step(u, next);
        u.swap(next);
    }
    return u;
}

RefinedValue solveWithRefinement(const ScalarFunction& phi, const UncertaintySet& U, const Grid1D& grid,
                                 double x) {
    grid.validate();
    RefinedValue r;
    r.coarse = interpolate(solveTerminal(sampleNodes(phi, grid), U, grid), grid, x);
    const Grid1D fine = refineGrid(grid, U);
    r.fine = interpolate(solveTerminal(sampleNodes(phi, fine), U, fine), fine, x);
    r.schemeError = std::abs(r.fine - r.coarse);
    return r;
}

SupResult applyG(const ScalarFunction& f, const UncertaintySet& U, const ApplyGOptions& options) {
    if (U.empty()) throw InvalidInput("uncertainty set is empty");
    const std::size_t d = U.dim();
    const Point origin = zeroPoint(d);
    const double f0 = f(origin);
    if (!std::isfinite(f0) || std::abs(f0) > 1e-12) throw InvalidInput("applyG needs f(0) = 0");

    bool needGrad = false;
    bool needHess = false;
    for (const auto& t : U.triples()) {
        needGrad = needGrad || !isZero(t.drift);
        needHess = needHess || !t.covRoot.isZero();
    }
    Point grad = zeroPoint(d);
    Matrix hess = Matrix::zeros(d);
    if (options.derivatives) {
        grad = options.derivatives->gradient;
        hess = options.derivatives->hessian;
        if (grad.size() != d || hess.rows() != d || hess.cols() != d) {
            throw InvalidInput("supplied derivatives have the wrong dimension");
        }
    } else if (needGrad || needHess) {
        const double h = options.h;
        if (!(h > 0.0)) throw InvalidInput("difference step must be positive");
        auto eval = [&](const Point& z) {
            double y = f(z);
            if (!std::isfinite(y)) throw EvaluationError("f is not finite near 0");
            return y;
        };
        auto shifted = [&](std::size_t i, double si, std::size_t j, double sj) {
            Point z = origin;
            z[i] += si;
            z[j] += sj;
            return z;
        };
        for (std::size_t i = 0; i < d; ++i) {
            const double fp = eval(shifted(i, h, i, 0.0));
            const double fm = eval(shifted(i, -h, i, 0.0));
            grad[i] = (fp - fm) / (2.0 * h);
            hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        }
        if (needHess) {
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i + 1; j < d; ++j) {
                    const double v = (eval(shifted(i, h, j, h)) - eval(shifted(i, h, j, -h)) -
                                      eval(shifted(i, -h, j, h)) + eval(shifted(i, -h, j, -h))) /
                                     (4.0 * h * h);
                    hess(i, j) = v;
                    hess(j, i) = v;
                }
            }
        }
    }

    SupResult best{-std::numeric_limits<double>::infinity(), 0};
    for (std::size_t k = 0; k < U.size(); ++k) {
        const auto& t = U[k];
        double val = t.measure.integrate(f, Region::punctured(d));
        for (std::size_t i = 0; i < d; ++i) val += grad[i] * t.drift[i];
        if (!t.covRoot.isZero()) {
            // 1/2 tr(H Q Q^T) = 1/2 sum_{i,j} H_ij (Q Q^T)_ji
            double tr = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    double qq = 0.0;
                    for (std::size_t l = 0; l < d; ++l) qq += t.covRoot(j, l) * t.covRoot(i, l);
                    tr += hess(i, j) * qq;
                }
            }
            val += 0.5 * tr;
        }
        if (val > best.value) best = {val, k};
    }
    return best;
}

namespace {

// E[phi(prefix, X_{s_k}, X_{s_{k+1}} - X_{s_k}, ...)] for the stage lengths deltas[k..].
double stageValue(const CylinderFunction& phi, std::vector<double>& prefix, const std::vector<double>& deltas,
                  std::size_t k, const UncertaintySet& U, const Grid1D& grid) {
    const bool last = k + 1 == deltas.size();
    auto inner = [&](double y) {
        prefix.push_back(y);
        const double v = last ? phi(prefix) : stageValue(phi, prefix, deltas, k + 1, U, grid);
        prefix.pop_back();
        if (!std::isfinite(v)) throw EvaluationError("cylinder function is not finite on the grid");
        return v;
    };
    if (deltas[k] == 0.0) return inner(0.0);
    std::vector<double> initial(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i) initial[i] = inner(grid.node(i));
    Grid1D stage = grid;
    stage.T = deltas[k];
    stage.dt = std::min(grid.dt, deltas[k]);
    return interpolate(solveTerminal(initial, U, stage), stage, 0.0);
}

}  // namespace

double iteratedExpectation(const CylinderFunction& phi, const std::vector<double>& times,
                           const UncertaintySet& U, const Grid1D& grid) {
    requireScalar(U);
    grid.validate();
    if (times.empty()) throw InvalidInput("need at least one time");
    if (times.size() > 3) throw InvalidInput("iterated expectations are limited to n <= 3 (memory bound)");
    std::vector<double> deltas;
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const bool ok = i == 0 ? times[i] >= 0.0 : times[i] > prev;
        if (!ok || !std::isfinite(times[i])) throw InvalidInput("times must satisfy 0 <= t_1 < ... < t_n");
        deltas.push_back(times[i] - prev);
        prev = times[i];
    }
    std::vector<double> prefix;
    return stageValue(phi, prefix, deltas, 0, U, grid);
}

double conditionalExpectation(const CylinderFunction& phi, const std::vector<double>& times,
                              const std::vector<double>& realized, const UncertaintySet& U,
                              const Grid1D& grid) {
    const std::size_t n = times.size();
    const std::size_t i = realized.size();
    if (i > n) throw InvalidInput("more realized increments than observation times");
    if (i == n) return phi(realized);
    if (i == 0) return iteratedExpectation(phi, times, U, grid);
    std::vector<double> shifted;
    for (std::size_t k = i; k < n; ++k) shifted.push_back(times[k] - times[i - 1]);
    auto rest = [&](const std::vector<double>& ys) {
        std::vector<double> args = realized;
        args.insert(args.end(), ys.begin(), ys.end());
        return phi(args);
    };
    return iteratedExpectation(rest, shifted, U, grid);
}

double gPoissonDistribution(double lambdaMin, double lambdaMax, double t,
                            const std::function<double(long)>& phi) {
    if (!(lambdaMin >= 0.0 && lambdaMin <= lambdaMax && std::isfinite(lambdaMax))) {
        throw InvalidInput("intensity interval needs 0 <= lambdaMin <= lambdaMax < inf");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("time must be nonnegative");
    auto eval = [&](long k) {
        double y = phi(k);
        if (!std::isfinite(y)) throw EvaluationError("payoff is not finite on the counting lattice");
        return y;
    };
    if (t == 0.0 || lambdaMax == 0.0) return eval(0);

    // Truncate where P(Poisson(lambdaMax t) > N) < 1e-10, plus a margin.
    const double mean = lambdaMax * t;
    double logPmf = -mean;
    double cdf = std::exp(logPmf);
    long nMax = 0;
    while (1.0 - cdf >= 1e-10 || static_cast<double>(nMax) < mean) {
        ++nMax;
        logPmf += std::log(mean) - std::log(static_cast<double>(nMax));
        cdf += std::exp(logPmf);
        if (nMax > 10'000'000) throw NumericalError("counting lattice too large");
    }
    nMax += 10 + static_cast<long>(std::sqrt(mean));

    const std::size_t n = static_cast<std::size_t>(nMax) + 1;
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = eval(static_cast<long>(k));

    auto rhs = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t k = 0; k < n; ++k) {
            const double diff = (k + 1 < n ? v[k + 1] : v[k]) - v[k];
            out[k] = diff >= 0.0 ? lambdaMax * diff : lambdaMin * diff;
        }
    };
    // Third-order strong-stability-preserving Runge-Kutta; each stage is a
    // monotone Euler step under dt * lambdaMax <= 1/2.
    const double dtMax = std::min(0.5 / lambdaMax, 2e-3);
    const auto steps = static_cast<std::size_t>(std::ceil(t / dtMax));
    const double dt = t / static_cast<double>(steps);
    std::vector<double> k1(n), u1(n), u2(n);
    for (std::size_t s = 0; s < steps; ++s) {
        rhs(u, k1);
        for (std::size_t k = 0; k < n; ++k) u1[k] = u[k] + dt * k1[k];
        rhs(u1, k1);
        for (std::size_t k = 0; k < n; ++k) u2[k] = 0.75 * u[k] + 0.25 * (u1[k] + dt * k1[k]);
        rhs(u2, k1);
        for (std::size_t k = 0; k < n; ++k) u[k] = u[k] / 3.0 + 2.0 / 3.0 * (u2[k] + dt * k1[k]);
    }
    if (!std::isfinite(u[0])) throw NumericalError("non-finite value in the counting ODE");
    return u[0];
}

void writeSolutionCsv(std::ostream& out, const GridSolution& solution) {
    out << 't';
    for (double x : solution.x) out << ',' << formatShortest(x);
    out << '\n';
    for (std::size_t m = 0; m < solution.times.size(); ++m) {
        out << formatShortest(solution.times[m]);
        for (double v : solution.values[m]) out << ',' << formatShortest(v);
        out << '\n';
    }
}

}  // namespace glevy
