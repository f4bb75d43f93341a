#include "generators.hpp"

#include "glevy/analysis.hpp"
#include "glevy/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace glevy;

namespace {

UncertaintySet scaledDiracs(std::initializer_list<double> lambdas) {
    std::vector<LevyTriple> t;
    for (double l : lambdas) t.push_back(LevyTriple::jumpsOnly(DiscreteLevyMeasure::dirac(1.0, l)));
    return UncertaintySet(t);
}

MeasureFamily mixtures(std::initializer_list<double> alphas) {
    MeasureFamily V;
    for (double a : alphas) V.push_back(DiscreteLevyMeasure::fromPairs({{1.0, a}, {2.0, 1.0 - a}}));
    return V;
}

Grid1D checkGrid() {
    Grid1D g;
    g.xMin = -15.0;
    g.xMax = 15.0;
    g.nx = 301;
    g.dt = 0.01;
    return g;
}

}  // namespace

TEST(MeanOfJumpPart, Examples) {
    EXPECT_DOUBLE_EQ(meanOfJumpPart(scaledDiracs({1.0}), 1.0)[0], 1.0);
    EXPECT_DOUBLE_EQ(meanOfJumpPart(UncertaintySet::fromMeasures(mixtures({0.25, 0.5, 0.75})), 1.0)[0], 1.75);
    EXPECT_DOUBLE_EQ(meanOfJumpPart(scaledDiracs({1.0, 1.5, 2.0}), 0.5)[0], 1.0);
    EXPECT_THROW(meanOfJumpPart(scaledDiracs({1.0}), -1.0), InvalidInput);
}

TEST(MeanOfJumpPart, VectorNeedsCommonMaximizer) {
    const auto a = DiscreteLevyMeasure(std::vector<Atom>{Atom{{1.0, 0.0}, 1.0}}, 2);
    const auto b = DiscreteLevyMeasure(std::vector<Atom>{Atom{{0.0, 1.0}, 1.0}}, 2);
    const auto c = DiscreteLevyMeasure(std::vector<Atom>{Atom{{1.0, 1.0}, 1.0}}, 2);
    EXPECT_THROW(meanOfJumpPart(UncertaintySet::fromMeasures({a, b}), 1.0), Unsupported);
    EXPECT_EQ(meanOfJumpPart(UncertaintySet::fromMeasures({a, b, c}), 2.0), (Point{2.0, 2.0}));
}

TEST(Compensate, PathWithoutJumpsDrifts) {
    const CadlagPath y = compensate(CadlagPath::zero(1.0), scaledDiracs({1.0, 1.5, 2.0}));
    EXPECT_DOUBLE_EQ(y.value(1.0)[0], -2.0);
    EXPECT_DOUBLE_EQ(y.value(0.25)[0], -0.5);
}

TEST(Compensate, KeepsJumpsAndDropsContinuousPart) {
    gen::Rng rng(101);
    const UncertaintySet U = scaledDiracs({1.0, 2.0});
    for (int trial = 0; trial < 100; ++trial) {
        const CadlagPath x = gen::mixedPath(rng);
        const CadlagPath y = compensate(x, U);
        EXPECT_EQ(y.jumps(), x.jumps());
        for (int k = 0; k <= 10; ++k) {
            const double t = 0.1 * k;
            EXPECT_NEAR(y.value(t)[0], x.jumpSum(t)[0] - 2.0 * t, 1e-12);
        }
    }
}

TEST(Compensate, SpecKinds) {
    const ProcessSpec y = compensate(ProcessSpec::rawJumpPart(scaledDiracs({1.0, 2.0})));
    EXPECT_EQ(y.kind, ProcessKind::compensatedJumpPart);
    const UncertaintySet set = y.uncertaintySet();
    for (const auto& t : set.triples()) EXPECT_DOUBLE_EQ(t.drift[0], -2.0);
    EXPECT_THROW(compensate(y), InvalidInput);
}

TEST(SymmetricCompensatedSet, DriftsAreMinusMeans) {
    const UncertaintySet Z = symmetricCompensatedSet({DiscreteLevyMeasure::dirac(1.0, 2.0),
                                                      DiscreteLevyMeasure::fromPairs({{1.0, 1.0}, {2.0, 1.0}})});
    ASSERT_EQ(Z.size(), 2u);
    EXPECT_DOUBLE_EQ(Z.triples()[0].drift[0], -2.0);
    EXPECT_DOUBLE_EQ(Z.triples()[1].drift[0], -3.0);
    EXPECT_DOUBLE_EQ(Z.triples()[1].covRoot(0, 0), 0.0);
}

TEST(Pushforward, Examples) {
    const MeasureFamily V{DiscreteLevyMeasure::fromPairs({{1.0, 1.0}, {-1.0, 1.0}, {2.0, 0.5}})};
    const MeasureFamily sq = pushforwardScalar(V, [](const Point& z) { return z[0] * z[0]; }, Region::punctured(1));
    EXPECT_TRUE(sq[0].approxEqual(DiscreteLevyMeasure::fromPairs({{1.0, 2.0}, {4.0, 0.5}})));

    const MeasureFamily cut = pushforwardScalar(V, [](const Point& z) { return z[0]; }, Region::open(0.0, 1.5));
    EXPECT_TRUE(cut[0].approxEqual(DiscreteLevyMeasure::dirac(1.0)));

    const MeasureFamily dropped =
        pushforwardScalar(V, [](const Point& z) { return z[0] > 0.0 ? 0.0 : 3.0; }, Region::punctured(1));
    EXPECT_TRUE(dropped[0].approxEqual(DiscreteLevyMeasure::dirac(3.0)));
}

TEST(Pushforward, PreservesIntegrals) {
    gen::Rng rng(103);
    for (int trial = 0; trial < 200; ++trial) {
        const MeasureFamily V = gen::family(rng);
        const auto phi = [](const Point& z) { return std::floor(2.0 * z[0]) + 0.5; };
        const auto f = gen::payoff(rng);
        const Region A = Region::open(-1.0, 2.0);
        const MeasureFamily image = pushforwardScalar(V, phi, A);
        ASSERT_EQ(image.size(), V.size());
        for (std::size_t i = 0; i < V.size(); ++i) {
            double direct = 0.0;
            for (const auto& a : V[i].atoms()) {
                if (A.contains(a.location)) direct += f(Point{phi(a.location)}) * a.weight;
            }
            double pushed = 0.0;
            for (const auto& a : image[i].atoms()) pushed += f(a.location) * a.weight;
            EXPECT_NEAR(pushed, direct, 1e-12);
        }
    }
}

TEST(RestrictedProduct, RoutesAtomsByRegion) {
    const UncertaintySet U({LevyTriple(DiscreteLevyMeasure::fromPairs({{1.0, 1.0}, {3.0, 2.0}, {-5.0, 0.5}}),
                                       {0.25}, Matrix::scalar(0.5))});
    const UncertaintySet P = restrictedProductSet(U, {Region::closed(2.0, 4.0), Region::closed(-6.0, -4.0)});
    ASSERT_EQ(P.dim(), 3u);
    const auto& t = P.triples()[0];
    const auto expected = DiscreteLevyMeasure(
        std::vector<Atom>{Atom{{1.0, 0.0, 0.0}, 1.0}, Atom{{0.0, 3.0, 0.0}, 2.0}, Atom{{0.0, 0.0, -5.0}, 0.5}}, 3);
    EXPECT_TRUE(t.measure.approxEqual(expected));
    EXPECT_EQ(t.drift, (Point{0.25, 0.0, 0.0}));
    EXPECT_DOUBLE_EQ(t.covRoot(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(t.covRoot(1, 1), 0.0);
}

TEST(RestrictedProduct, RejectsBadRegions) {
    const UncertaintySet U = scaledDiracs({1.0});
    EXPECT_THROW(restrictedProductSet(U, {Region::open(0.0, 1.0)}), InvalidInput);
    EXPECT_THROW(restrictedProductSet(U, {Region::closed(1.0, 2.0), Region::closed(2.0, 3.0)}), InvalidInput);
    EXPECT_EQ(restrictedProductSet(U, {}).dim(), 1u);
}

TEST(Decompose, PartsAddUpExactly) {
    gen::Rng rng(107);
    for (int trial = 0; trial < 200; ++trial) {
        const CadlagPath x = gen::mixedPath(rng);
        const Decomposition parts = decompose(x);
        EXPECT_TRUE(parts.continuous.jumps().empty());
        EXPECT_TRUE(parts.jumps.isPiecewiseConstant());
        for (double t : x.eventTimes()) {
            EXPECT_NEAR(parts.continuous.value(t)[0] + parts.jumps.value(t)[0], x.value(t)[0], 1e-12);
        }
        for (int k = 0; k < 20; ++k) {
            const double t = gen::uniform(rng, 0.0, 1.0);
            EXPECT_NEAR(parts.continuous.value(t)[0] + parts.jumps.value(t)[0], x.value(t)[0], 1e-12);
        }
    }
}

TEST(ProcessKind, NamesRoundTrip) {
    for (auto k : {ProcessKind::rawJumpPart, ProcessKind::compensatedJumpPart, ProcessKind::symmetricCompensated,
                   ProcessKind::poissonIntegral, ProcessKind::continuousPart}) {
        EXPECT_EQ(processKindFromString(toString(k)), k);
    }
    EXPECT_THROW(processKindFromString("brownian"), InvalidInput);
}

TEST(MartingaleCheck, CompensatedIsMartingaleButNotSymmetric) {
    const MartingaleReport r =
        martingaleCheck(ProcessSpec::compensatedJumpPart(scaledDiracs({1.0, 1.5, 2.0})), 0.2, 0.7, checkGrid());
    EXPECT_TRUE(r.isMartingale);
    EXPECT_NEAR(r.maxDeviation, 0.0, 1e-9);
    EXPECT_NEAR(r.symmetricDeviation, 0.5, 1e-9);
    EXPECT_FALSE(r.isSymmetric);
}

TEST(MartingaleCheck, SymmetricSetIsSymmetric) {
    const MartingaleReport r =
        martingaleCheck(ProcessSpec::symmetricCompensated(scaledDiracs({1.0, 1.5, 2.0})), 0.0, 1.0, checkGrid());
    EXPECT_TRUE(r.isMartingale);
    EXPECT_TRUE(r.isSymmetric);
    EXPECT_NEAR(r.symmetricDeviation, 0.0, 1e-9);
}

TEST(MartingaleCheck, RawJumpPartDrifts) {
    const MartingaleReport r = martingaleCheck(ProcessSpec::rawJumpPart(scaledDiracs({1.0, 2.0})), 0.0, 0.5, checkGrid());
    EXPECT_FALSE(r.isMartingale);
    EXPECT_NEAR(r.maxDeviation, 1.0, 1e-9);
    EXPECT_THROW(martingaleCheck(ProcessSpec::rawJumpPart(scaledDiracs({1.0})), 0.5, 0.5, checkGrid()),
                 InvalidInterval);
}

TEST(MartingaleCheck, ClassicalCompensatedPoisson) {
    const MartingaleReport r =
        martingaleCheck(ProcessSpec::compensatedJumpPart(scaledDiracs({1.5})), 0.0, 1.0, checkGrid());
    EXPECT_TRUE(r.isSymmetric);
}
