#include "generators.hpp"

#include "glevy/errors.hpp"
#include "glevy/pide.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace glevy;

namespace {

UncertaintySet scaledDiracs(std::initializer_list<double> lambdas, double x = 1.0) {
    std::vector<LevyTriple> t;
    for (double l : lambdas) t.push_back(LevyTriple::jumpsOnly(DiscreteLevyMeasure::dirac(x, l)));
    return UncertaintySet(t);
}

Grid1D wideGrid(double T = 1.0) {
    Grid1D g;
    g.xMin = -15.0;
    g.xMax = 15.0;
    g.nx = 3001;
    g.dt = 1e-3;
    g.T = T;
    return g;
}

Grid1D coarseGrid() {
    Grid1D g;
    g.xMin = -15.0;
    g.xMax = 15.0;
    g.nx = 301;
    g.dt = 1e-2;
    return g;
}

double linear(const Point& x) { return x[0]; }

// sum_k phi(k) e^{-m} m^k / k! with terms until they vanish.
double poissonSeries(double m, const std::function<double(long)>& phi) {
    double p = std::exp(-m);
    double s = 0.0;
    for (long k = 0; k < 400; ++k) {
        s += phi(k) * p;
        p *= m / static_cast<double>(k + 1);
    }
    return s;
}

}  // namespace

TEST(Grid1D, Geometry) {
    Grid1D g;
    EXPECT_DOUBLE_EQ(g.dx(), 0.01);
    EXPECT_EQ(g.nt(), 1000u);
    EXPECT_DOUBLE_EQ(g.node(1000), 5.0);
    g.dt = 0.3;
    EXPECT_EQ(g.nt(), 4u);
    EXPECT_DOUBLE_EQ(g.effectiveDt(), 0.25);
    g.nx = 1;
    EXPECT_THROW(g.validate(), InvalidInput);
}

TEST(Cfl, StableStepAndViolation) {
    const UncertaintySet U({LevyTriple(DiscreteLevyMeasure::dirac(1.0, 2.0), {0.5}, Matrix::scalar(0.2))});
    const double dx = 0.01;
    const double dt = stableDt(U, dx);
    EXPECT_NEAR(dt * (2.0 + 0.04 / (dx * dx) + 0.5 / dx), 1.0, 1e-12);
    Grid1D g;
    g.dt = 2.0 * dt;
    EXPECT_GT(cflNumber(U, g), 1.0);
    EXPECT_THROW(solveIPDE(linear, U, g), CflViolation);
    const Grid1D fine = refineGrid(g, U);
    EXPECT_EQ(fine.nx, 2 * g.nx - 1);
    EXPECT_LE(cflNumber(U, fine), 1.0 + 1e-12);
}

TEST(ApplyG, Examples) {
    EXPECT_DOUBLE_EQ(applyG(linear, scaledDiracs({2.0})).value, 2.0);
    EXPECT_DOUBLE_EQ(applyG([](const Point&) { return 0.0; }, scaledDiracs({2.0})).value, 0.0);
    const UncertaintySet brownian({LevyTriple(DiscreteLevyMeasure::zero(), {0.0}, Matrix::scalar(1.0))});
    EXPECT_NEAR(applyG([](const Point& z) { return z[0] * z[0]; }, brownian).value, 1.0, 1e-6);
    EXPECT_THROW(applyG([](const Point&) { return 1.0; }, brownian), InvalidInput);
}

TEST(ApplyG, AnalyticDerivativesAndArgmax) {
    const UncertaintySet U({LevyTriple(DiscreteLevyMeasure::dirac(1.0), {1.0}, Matrix::scalar(0.0)),
                            LevyTriple(DiscreteLevyMeasure::dirac(-1.0), {2.0}, Matrix::scalar(1.0))});
    ApplyGOptions opts;
    opts.derivatives = Derivatives{{1.0}, Matrix::scalar(2.0)};
    const auto f = [](const Point& z) { return z[0] + z[0] * z[0]; };
    const SupResult r = applyG(f, U, opts);
    // (2 + 1) versus (0 + 2 + 1)
    EXPECT_DOUBLE_EQ(r.value, 3.0);
    EXPECT_EQ(r.argmax, 0u);
}

TEST(Solve, LinearPayoffUnderIntensityUncertainty) {
    const GridSolution s = solveIPDE(linear, scaledDiracs({1.0, 1.5, 2.0}), wideGrid());
    EXPECT_NEAR(s.terminalAt(0.0), 2.0, 1e-9);
    EXPECT_NEAR(s.at(0.5, 0.0), 1.0, 1e-9);
    EXPECT_GT(s.diagnostics.argmaxCounts[2], s.diagnostics.steps * (s.grid.nx - 20));
}

TEST(Solve, SymmetricCompensationKeepsLinearPayoffs) {
    std::vector<LevyTriple> z;
    for (double l : {1.0, 1.5, 2.0}) z.emplace_back(DiscreteLevyMeasure::dirac(1.0, l), Point{-l}, Matrix::zeros(1));
    const UncertaintySet Z(z);
    const Grid1D g = wideGrid();
    const GridSolution up = solveIPDE(linear, Z, g);
    const GridSolution down = solveIPDE([](const Point& x) { return -x[0]; }, Z, g);
    for (double x : {-2.0, 0.0, 1.5}) {
        EXPECT_NEAR(up.terminalAt(x), x, 1e-9);
        EXPECT_NEAR(down.terminalAt(x), -x, 1e-9);
    }
}

TEST(Solve, ClassicalPoissonCap) {
    const GridSolution s = solveIPDE([](const Point& x) { return std::min(x[0], 1.0); }, scaledDiracs({1.0}), wideGrid());
    EXPECT_NEAR(s.terminalAt(0.0), 1.0 - std::exp(-1.0), 5e-3);
}

TEST(Solve, InitialLayerIsPayoff) {
    gen::Rng rng(71);
    const auto phi = gen::payoff(rng);
    const GridSolution s = solveIPDE(phi, scaledDiracs({1.0, 2.0}), coarseGrid());
    for (std::size_t i = 0; i < s.grid.nx; ++i) EXPECT_EQ(s.values.front()[i], phi(Point{s.x[i]}));
    EXPECT_EQ(s.times.front(), 0.0);
    EXPECT_EQ(s.times.back(), 1.0);
}

TEST(Solve, ConstantsArePreservedExactly) {
    const UncertaintySet U({LevyTriple(DiscreteLevyMeasure::fromPairs({{0.37, 1.0}, {-1.3, 0.5}}), {0.3},
                                       Matrix::scalar(0.4))});
    Grid1D g = coarseGrid();
    g.dt = stableDt(U, g.dx());
    const GridSolution s = solveIPDE([](const Point&) { return 0.7; }, U, g);
    for (double v : s.values.back()) EXPECT_EQ(v, 0.7);
}

TEST(Solve, SublinearityOnRandomPayoffs) {
    gen::Rng rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<LevyTriple> triples;
        const std::size_t n = gen::index(rng, 1, 3);
        for (std::size_t i = 0; i < n; ++i) {
            triples.emplace_back(gen::measure(rng, 3, 2.0, 1.0), Point{gen::uniform(rng, -1.0, 1.0)},
                                 Matrix::scalar(gen::uniform(rng, 0.0, 0.5)));
        }
        const UncertaintySet U(triples);
        Grid1D g = coarseGrid();
        g.T = 0.5;
        g.dt = std::min(0.01, stableDt(U, g.dx()));
        const auto f = gen::payoff(rng);
        const auto h = gen::payoff(rng);
        const double lambda = gen::uniform(rng, 0.0, 3.0);
        const double c = gen::uniform(rng, -2.0, 2.0);
        const auto uf = solveIPDE(f, U, g).values.back();
        const auto uh = solveIPDE(h, U, g).values.back();
        const auto usum = solveIPDE([&](const Point& x) { return f(x) + h(x); }, U, g).values.back();
        const auto uscaled = solveIPDE([&](const Point& x) { return lambda * f(x); }, U, g).values.back();
        const auto ushift = solveIPDE([&](const Point& x) { return f(x) + c; }, U, g).values.back();
        const auto umax = solveIPDE([&](const Point& x) { return std::max(f(x), h(x)); }, U, g).values.back();
        for (std::size_t i = 0; i < g.nx; ++i) {
            EXPECT_LE(usum[i], uf[i] + uh[i] + 1e-12);
            EXPECT_NEAR(uscaled[i], lambda * uf[i], 1e-12);
            EXPECT_NEAR(ushift[i], uf[i] + c, 1e-12);
            EXPECT_GE(umax[i], uf[i] - 1e-15);
            EXPECT_GE(umax[i], uh[i] - 1e-15);
        }
    }
}

TEST(Solve, RefinementConverges) {
    const auto phi = [](const Point& x) { return std::min(std::max(x[0], -1.0), 1.0); };
    const UncertaintySet U = scaledDiracs({1.0, 2.0}, 0.75);
    Grid1D g = wideGrid();
    g.nx = 301;
    g.dt = 0.01;
    const RefinedValue a = solveWithRefinement(phi, U, g);
    const RefinedValue b = solveWithRefinement(phi, U, refineGrid(g, U));
    EXPECT_LT(b.schemeError, a.schemeError);
    EXPECT_NEAR(a.fine, b.coarse, 1e-15);
}

TEST(Solve, RejectsVectorSets) {
    const UncertaintySet planar({LevyTriple(DiscreteLevyMeasure::zero(2), {0.0, 0.0}, Matrix::zeros(2))});
    EXPECT_THROW(solveIPDE(linear, planar, coarseGrid()), Unsupported);
}

TEST(Solve, NonFinitePayoffAborts) {
    EXPECT_THROW(solveIPDE([](const Point& x) { return x[0] > 0.0 ? NAN : 0.0; }, scaledDiracs({1.0}), coarseGrid()),
                 Error);
}

TEST(Solve, CsvExport) {
    Grid1D g = coarseGrid();
    g.nx = 5;
    g.dt = 0.5;
    const GridSolution s = solveIPDE(linear, scaledDiracs({1.0}), g);
    std::ostringstream out;
    writeSolutionCsv(out, s);
    std::istringstream in(out.str());
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, s.times.size() + 1);
    EXPECT_EQ(out.str().substr(0, 2), "t,");
}

TEST(Iterated, SingleTimeMatchesSolve) {
    const UncertaintySet U = scaledDiracs({1.0, 2.0});
    Grid1D g = coarseGrid();
    const auto phi = [](const std::vector<double>& x) { return std::min(x[0], 1.0); };
    const double it = iteratedExpectation(phi, {0.5}, U, g);
    g.T = 0.5;
    EXPECT_NEAR(it, solveIPDE([](const Point& x) { return std::min(x[0], 1.0); }, U, g).terminalAt(0.0), 1e-14);
}

TEST(Iterated, LinearIncrementsAdd) {
    const UncertaintySet U = scaledDiracs({1.0, 1.5, 2.0});
    const Grid1D g = coarseGrid();
    const double v = iteratedExpectation([](const std::vector<double>& x) { return x[0] + x[1]; }, {0.25, 0.5}, U, g);
    EXPECT_NEAR(v, 2.0 * 0.5, 1e-9);
}

TEST(Iterated, UnusedMarginalDoesNotMatter) {
    const UncertaintySet U = scaledDiracs({1.0, 2.0});
    const Grid1D g = coarseGrid();
    const auto phi = [](const std::vector<double>& x) { return std::min(x[0], 1.0); };
    const double a = iteratedExpectation(phi, {0.3, 0.5}, U, g);
    const double b = iteratedExpectation(phi, {0.3, 0.9}, U, g);
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_THROW(iteratedExpectation(phi, {0.1, 0.2, 0.3, 0.4}, U, g), InvalidInput);
    EXPECT_THROW(iteratedExpectation(phi, {0.3, 0.2}, U, g), InvalidInput);
}

TEST(Iterated, NonlinearPayoffTowerProperty) {
    // E[min(X_1, 1) ] computed in one step or split at t = 0.5 with phi(x1, x2) = min(x1 + x2, 1).
    const UncertaintySet U = scaledDiracs({1.0, 2.0});
    Grid1D g = coarseGrid();
    const double split =
        iteratedExpectation([](const std::vector<double>& x) { return std::min(x[0] + x[1], 1.0); }, {0.5, 1.0}, U, g);
    const double direct = iteratedExpectation([](const std::vector<double>& x) { return std::min(x[0], 1.0); }, {1.0},
                                              U, g);
    EXPECT_NEAR(split, direct, 1e-9);
}

TEST(Conditional, EdgeCases) {
    const UncertaintySet U = scaledDiracs({1.0, 2.0});
    const Grid1D g = coarseGrid();
    const auto phi = [](const std::vector<double>& x) { return std::min(x[0] + x[1], 1.0); };
    EXPECT_EQ(conditionalExpectation(phi, {0.5, 1.0}, {0.3, 0.4}, U, g), 0.7);
    EXPECT_EQ(conditionalExpectation(phi, {0.5, 1.0}, {}, U, g), iteratedExpectation(phi, {0.5, 1.0}, U, g));
    EXPECT_THROW(conditionalExpectation(phi, {0.5, 1.0}, {1.0, 2.0, 3.0}, U, g), InvalidInput);
}

TEST(Conditional, CompensatedProcessIsMartingale) {
    std::vector<LevyTriple> y;
    for (double l : {1.0, 1.5, 2.0}) y.emplace_back(DiscreteLevyMeasure::dirac(1.0, l), Point{-2.0}, Matrix::zeros(1));
    const UncertaintySet Y(y);
    Grid1D g = coarseGrid();
    g.dt = stableDt(Y, g.dx());
    const auto phi = [](const std::vector<double>& x) { return x[0] + x[1]; };
    for (double realized : {-1.0, 0.0, 0.7}) {
        EXPECT_NEAR(conditionalExpectation(phi, {0.4, 1.0}, {realized}, Y, g), realized, 1e-9);
    }
}

TEST(GPoisson, Examples) {
    EXPECT_NEAR(gPoissonDistribution(1.0, 2.0, 1.0, [](long n) { return static_cast<double>(n); }), 2.0, 1e-6);
    EXPECT_NEAR(gPoissonDistribution(1.0, 2.0, 1.0, [](long n) { return std::min<double>(n, 1.0); }),
                1.0 - std::exp(-2.0), 1e-6);
    EXPECT_NEAR(gPoissonDistribution(1.0, 2.0, 1.0, [](long n) { return -std::min<double>(n, 1.0); }),
                -(1.0 - std::exp(-1.0)), 1e-6);
    EXPECT_EQ(gPoissonDistribution(1.0, 2.0, 0.0, [](long n) { return n + 3.0; }), 3.0);
    EXPECT_THROW(gPoissonDistribution(2.0, 1.0, 1.0, [](long) { return 0.0; }), InvalidInput);
}

TEST(GPoisson, ClassicalSeries) {
    gen::Rng rng(79);
    for (int trial = 0; trial < 30; ++trial) {
        const double lambda = gen::uniform(rng, 0.1, 5.0);
        const double t = gen::uniform(rng, 0.1, 2.0);
        const double a = gen::uniform(rng, -1.0, 1.0);
        const double b = gen::uniform(rng, 0.1, 2.0);
        const auto phi = [&](long n) { return std::sin(a * static_cast<double>(n)) + std::exp(-b * n); };
        EXPECT_NEAR(gPoissonDistribution(lambda, lambda, t, phi), poissonSeries(lambda * t, phi), 1e-6);
    }
}

TEST(GPoisson, MonotoneInIntensityBand) {
    const auto phi = [](long n) { return std::cos(static_cast<double>(n)); };
    const double narrow = gPoissonDistribution(1.2, 1.4, 1.0, phi);
    const double wide = gPoissonDistribution(1.0, 2.0, 1.0, phi);
    EXPECT_GE(wide, narrow - 1e-12);
    EXPECT_GE(narrow, poissonSeries(1.3, phi) - 1e-6);
}
