#include "glevy/simulate.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace glevy {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t streamSeed(std::uint64_t seed, std::uint64_t pathIndex, std::uint64_t stream) {
    return splitmix64(splitmix64(splitmix64(seed) ^ pathIndex) ^ stream);
}

bool onGrid(double t, double dt) {
    const double k = t / dt;
    return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, std::abs(k));
}

std::size_t gridIndex(double t, double dt) { return static_cast<std::size_t>(std::llround(t / dt)); }

}  // namespace

ControlPolicy::ControlPolicy(std::vector<double> breakpoints, std::vector<ControlValue> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
        throw InvalidPolicy("a policy needs n values and n + 1 breakpoints");
    }
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1])) throw InvalidPolicy("policy breakpoints must increase");
    }
    const std::size_t d = values_.front().drift.size();
    for (const auto& v : values_) {
        if (v.drift.size() != d || v.covRoot.rows() != d || v.covRoot.cols() != d) {
            throw InvalidPolicy("policy values of mixed dimension");
        }
    }
}

ControlPolicy ControlPolicy::constant(ControlValue value, double horizon) {
    return ControlPolicy({0.0, horizon}, {std::move(value)});
}

std::size_t ControlPolicy::indexAt(double t) const {
    if (t > breakpoints_.back()) throw InvalidPolicy("time beyond the last policy breakpoint");
    auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), t);
    return static_cast<std::size_t>(it - (breakpoints_.begin() + 1));
}

bool ControlPolicy::covers(double t0, double t1) const {
    return breakpoints_.front() <= t0 && breakpoints_.back() >= t1;
}

ScenarioSpec makeScenarioSpec(const MonteCarloSetup& setup, const UncertaintySet& U) {
    if (U.empty()) throw InvalidInput("uncertainty set is empty");
    if (!(setup.horizon > 0.0)) throw InvalidInput("Monte Carlo horizon must be positive");
    ScenarioSpec spec;
    spec.horizon = setup.horizon;
    spec.dim = U.dim();
    spec.base = setup.base;
    spec.brownian = std::any_of(U.triples().begin(), U.triples().end(),
                                [](const LevyTriple& t) { return !t.covRoot.isZero(); });
    if (spec.brownian) {
        if (!(setup.dt > 0.0) || setup.dt > setup.horizon) throw InvalidInput("Euler step must lie in (0, T]");
        const double ratio = setup.horizon / setup.dt;
        const double rounded = std::round(ratio);
        spec.nSteps = std::abs(ratio - rounded) <= 1e-9 * ratio ? static_cast<std::size_t>(rounded)
                                                               : static_cast<std::size_t>(std::ceil(ratio));
        spec.dt = setup.horizon / static_cast<double>(spec.nSteps);
    } else {
        spec.nSteps = 0;
        spec.dt = setup.dt;
    }
    if (std::holds_alternative<TailDensity>(setup.base)) {
        spec.jumpRate = vCapacity(U.measures(), Region::punctured(spec.dim)).value;
    } else {
        const auto& mu = std::get<DiscreteLevyMeasure>(setup.base);
        if (!mu.empty() && mu.dim() != spec.dim) throw InvalidInput("base measure dimension mismatch");
        spec.jumpRate = mu.totalMass();
    }
    return spec;
}

BaseScenario generateScenario(const ScenarioSpec& spec, std::uint64_t seed, std::uint64_t pathIndex) {
    BaseScenario sc;
    sc.seed = seed;
    sc.pathIndex = pathIndex;
    sc.horizon = spec.horizon;
    sc.dt = spec.dt;
    sc.dim = spec.dim;
    if (spec.brownian) {
        sc.nSteps = spec.nSteps;
        std::mt19937_64 rng(streamSeed(seed, pathIndex, 2));
        std::normal_distribution<double> normal(0.0, std::sqrt(spec.dt));
        sc.brownian.resize(spec.nSteps * spec.dim);
        for (double& w : sc.brownian) w = normal(rng);
    }
    if (spec.jumpRate > 0.0) {
        std::mt19937_64 rng(streamSeed(seed, pathIndex, 1));
        std::exponential_distribution<double> wait(spec.jumpRate);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const auto* density = std::get_if<TailDensity>(&spec.base);
        std::discrete_distribution<std::size_t> pick;
        if (!density) {
            std::vector<double> w;
            for (const auto& a : std::get<DiscreteLevyMeasure>(spec.base).atoms()) w.push_back(a.weight);
            pick = std::discrete_distribution<std::size_t>(w.begin(), w.end());
        }
        double t = wait(rng);
        while (t <= spec.horizon) {
            BaseJump j;
            j.time = t;
            if (density) {
                // P(mark > m) = tail(m) / rate on the visible marks.
                double u = 1.0 - unif(rng);  // (0, 1]
                j.mark = density->inverseTail(u * spec.jumpRate);
            } else {
                j.atom = pick(rng);
            }
            if (sc.jumps.empty() || t > sc.jumps.back().time) sc.jumps.push_back(j);
            t += wait(rng);
        }
    }
    return sc;
}

ControlValue controlValueFor(const LevyTriple& triple, const BaseMeasure& base) {
    if (!std::holds_alternative<TailDensity>(base)) {
        throw Unsupported("automatic controls need a density base measure; supply an atom relabeling");
    }
    return ControlValue{transportMap(base, triple.measure), triple.drift, triple.covRoot};
}

DiscreteLevyMeasure pushforward(const JumpMap& map, const BaseMeasure& base) {
    if (const auto* g = std::get_if<TransportMap>(&map)) {
        const auto* density = std::get_if<TailDensity>(&base);
        if (!density || density->scale != g->base().scale || density->alpha != g->base().alpha) {
            throw InvalidPolicy("transport map was built over a different base measure");
        }
        return g->image();
    }
    const auto& relabel = std::get<AtomRelabeling>(map);
    const auto* mu = std::get_if<DiscreteLevyMeasure>(&base);
    if (!mu) throw InvalidPolicy("atom relabeling needs a discrete base measure");
    if (relabel.targets.size() != mu->size()) throw InvalidPolicy("relabeling must give one target per base atom");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < mu->size(); ++i) {
        const Point& z = relabel.targets[i];
        if (z.size() != mu->dim()) throw InvalidPolicy("relabeling target of the wrong dimension");
        if (isZero(z)) continue;
        auto it = std::find_if(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.location == z; });
        if (it == atoms.end()) {
            atoms.push_back(Atom{z, mu->atoms()[i].weight});
        } else {
            it->weight += mu->atoms()[i].weight;
        }
    }
    return DiscreteLevyMeasure(std::move(atoms), mu->dim());
}

void checkAdmissible(const ControlPolicy& policy, const UncertaintySet& U, const BaseMeasure& base) {
    constexpr double tol = 1e-12;
    for (const auto& value : policy.values()) {
        const DiscreteLevyMeasure image = pushforward(value.jumpMap, base);
        bool found = false;
        for (const auto& triple : U.triples()) {
            if (triple.dim() != value.drift.size()) continue;
            if (!image.approxEqual(triple.measure, tol)) continue;
            if (maxAbsDifference(triple.drift, value.drift) > tol) continue;
            bool sameQ = true;
            for (std::size_t i = 0; i < triple.covRoot.data().size(); ++i) {
                if (std::abs(triple.covRoot.data()[i] - value.covRoot.data()[i]) > tol) sameQ = false;
            }
            if (!sameQ) continue;
            found = true;
            break;
        }
        if (!found) throw InvalidPolicy("control value does not correspond to any triple of the uncertainty set");
    }
}

std::vector<ControlPolicy> constantControls(const UncertaintySet& U, const BaseMeasure& base, double horizon) {
    std::vector<ControlPolicy> out;
    out.reserve(U.size());
    for (const auto& t : U.triples()) out.push_back(ControlPolicy::constant(controlValueFor(t, base), horizon));
    return out;
}

std::vector<ControlPolicy> piecewiseConstantControls(const UncertaintySet& U, const BaseMeasure& base,
                                                     double horizon, std::size_t nIntervals,
                                                     std::size_t maxPolicies) {
    if (U.empty()) throw InvalidInput("uncertainty set is empty");
    if (nIntervals == 0) throw InvalidInput("need at least one control interval");
    double count = std::pow(static_cast<double>(U.size()), static_cast<double>(nIntervals));
    if (count > static_cast<double>(maxPolicies)) throw InvalidInput("too many piecewise-constant policies");
    std::vector<ControlValue> values;
    for (const auto& t : U.triples()) values.push_back(controlValueFor(t, base));
    std::vector<double> breaks(nIntervals + 1);
    for (std::size_t i = 0; i <= nIntervals; ++i) {
        breaks[i] = i == nIntervals ? horizon : horizon * static_cast<double>(i) / static_cast<double>(nIntervals);
    }
    std::vector<ControlPolicy> out;
    std::vector<std::size_t> digits(nIntervals, 0);
    while (true) {
        std::vector<ControlValue> seq;
        for (std::size_t d : digits) seq.push_back(values[d]);
        out.emplace_back(breaks, std::move(seq));
        std::size_t pos = nIntervals;
        while (pos > 0 && ++digits[pos - 1] == values.size()) {
            digits[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;
    }
    return out;
}

namespace {

Point jumpImage(const ControlValue& value, const BaseJump& j) {
    if (const auto* g = std::get_if<TransportMap>(&value.jumpMap)) return (*g)(j.mark);
    const auto& relabel = std::get<AtomRelabeling>(value.jumpMap);
    if (j.atom >= relabel.targets.size()) throw InvalidPolicy("relabeling does not cover the base atoms");
    return relabel.targets[j.atom];
}

}  // namespace

CadlagPath simulatePath(const BaseScenario& scenario, const ControlPolicy& theta, double t0, double T) {
    if (!(t0 >= 0.0 && t0 < T && T <= scenario.horizon)) throw InvalidInterval("need 0 <= t0 < T <= horizon");
    if (!theta.covers(t0, T)) throw InvalidPolicy("control policy leaves a gap in (t0, T]");
    const std::size_t d = scenario.dim;
    if (theta.values().front().drift.size() != d) throw InvalidPolicy("policy dimension differs from the scenario");

    std::vector<Jump> jumps;
    for (const auto& bj : scenario.jumps) {
        if (bj.time <= t0) continue;
        if (bj.time > T) break;
        Point z = jumpImage(theta.values()[theta.indexAt(bj.time)], bj);
        if (!isZero(z)) jumps.push_back(Jump{bj.time, std::move(z)});
    }

    const auto& bps = theta.breakpoints();
    // Intervals (b_i, b_{i+1}] meeting (t0, T].
    const std::size_t first = static_cast<std::size_t>(std::upper_bound(bps.begin() + 1, bps.end(), t0) - (bps.begin() + 1));
    const std::size_t last = theta.indexAt(T);
    bool anyQ = false;
    bool anyDrift = false;
    for (std::size_t i = first; i <= last; ++i) {
        anyQ = anyQ || !theta.values()[i].covRoot.isZero();
        anyDrift = anyDrift || !isZero(theta.values()[i].drift);
    }

    std::vector<double> times;
    std::vector<Point> values;
    if (anyQ) {
        if (scenario.brownian.empty()) throw InvalidPolicy("scenario carries no Brownian increments");
        const double dt = scenario.dt;
        if (!onGrid(t0, dt) || !onGrid(T, dt)) throw InvalidPolicy("t0 and T must lie on the Brownian grid");
        for (std::size_t i = first + 1; i <= last; ++i) {
            if (!onGrid(bps[i], dt)) throw InvalidPolicy("policy breakpoints must lie on the Brownian grid");
        }
        const std::size_t k0 = gridIndex(t0, dt);
        const std::size_t kT = gridIndex(T, dt);
        if (k0 > 0) {
            times.push_back(0.0);
            values.push_back(zeroPoint(d));
        }
        Point cur = zeroPoint(d);
        Point dw(d);
        for (std::size_t k = k0; k <= kT; ++k) {
            times.push_back(k == kT ? T : (k == k0 ? t0 : static_cast<double>(k) * dt));
            values.push_back(cur);
            if (k == kT) break;
            const ControlValue& v = theta.values()[theta.indexAt((static_cast<double>(k) + 0.5) * dt)];
            for (std::size_t i = 0; i < d; ++i) dw[i] = scenario.brownian[k * d + i];
            Point diff = v.covRoot.apply(dw);
            for (std::size_t i = 0; i < d; ++i) cur[i] += v.drift[i] * dt + diff[i];
        }
    } else if (anyDrift) {
        times.push_back(0.0);
        if (t0 > 0.0) times.push_back(t0);
        for (std::size_t i = first + 1; i <= last; ++i) times.push_back(bps[i]);
        times.push_back(T);
        Point cur = zeroPoint(d);
        values.push_back(cur);
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (times[i] > t0) {
                const ControlValue& v = theta.values()[theta.indexAt(times[i])];
                cur += (times[i] - times[i - 1]) * v.drift;
            }
            values.push_back(cur);
        }
    } else {
        times = {0.0, T};
        values = {zeroPoint(d), zeroPoint(d)};
    }
    return CadlagPath(T, std::move(times), std::move(values), std::move(jumps));
}

namespace {

struct Accumulator {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Accumulator& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

}  // namespace

McEstimate estimateUpperExpectation(const PathFunctional& xi, const UncertaintySet& U,
                                    const std::vector<ControlPolicy>& candidates, std::size_t nPaths,
                                    std::uint64_t seed, const MonteCarloSetup& setup) {
    if (candidates.empty()) throw InvalidInput("no control candidates");
    if (nPaths < 2) throw InvalidInput("need at least two paths for a variance estimate");
    if (setup.chunkSize == 0) throw InvalidInput("chunk size must be positive");
    for (const auto& c : candidates) {
        if (!c.covers(0.0, setup.horizon)) throw InvalidPolicy("control candidate does not cover [0, T]");
        checkAdmissible(c, U, setup.base);
    }
    const ScenarioSpec spec = makeScenarioSpec(setup, U);
    const std::size_t nc = candidates.size();
    const std::size_t nChunks = (nPaths + setup.chunkSize - 1) / setup.chunkSize;
    std::vector<std::vector<Accumulator>> chunks(nChunks, std::vector<Accumulator>(nc));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto worker = [&]() {
        try {
            for (std::size_t c = next++; c < nChunks; c = next++) {
                const std::size_t begin = c * setup.chunkSize;
                const std::size_t end = std::min(nPaths, begin + setup.chunkSize);
                for (std::size_t p = begin; p < end; ++p) {
                    const BaseScenario sc = generateScenario(spec, seed, p);
                    for (std::size_t j = 0; j < nc; ++j) {
                        const double x = xi(simulatePath(sc, candidates[j], 0.0, setup.horizon));
                        if (!std::isfinite(x)) throw EvaluationError("path functional returned a non-finite value");
                        chunks[c][j].add(x);
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failureMutex);
            if (!failure) failure = std::current_exception();
            next = nChunks;
        }
    };
    unsigned nThreads = setup.threads ? setup.threads : std::max(1u, std::thread::hardware_concurrency());
    nThreads = static_cast<unsigned>(std::min<std::size_t>(nThreads, nChunks));
    if (nThreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nThreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    McEstimate est;
    est.nPaths = nPaths;
    est.means.resize(nc);
    est.stdErrors.resize(nc);
    for (std::size_t j = 0; j < nc; ++j) {
        Accumulator total;
        for (const auto& chunk : chunks) total.merge(chunk[j]);
        est.means[j] = total.mean;
        const double var = total.m2 / static_cast<double>(total.n - 1);
        est.stdErrors[j] = std::sqrt(std::max(0.0, var) / static_cast<double>(total.n));
    }
    est.argmax = 0;
    for (std::size_t j = 1; j < nc; ++j) {
        if (est.means[j] > est.means[est.argmax]) est.argmax = j;
    }
    est.value = est.means[est.argmax];
    est.stdError = est.stdErrors[est.argmax];
    return est;
}

McEstimate estimateCapacity(const PathEvent& event, const UncertaintySet& U,
                            const std::vector<ControlPolicy>& candidates, std::size_t nPaths,
                            std::uint64_t seed, const MonteCarloSetup& setup) {
    return estimateUpperExpectation([&](const CadlagPath& p) { return event(p) ? 1.0 : 0.0; }, U, candidates,
                                    nPaths, seed, setup);
}

namespace {

// P(Gamma(k, 1) <= x).
double erlangCdfUnit(std::size_t k, double x) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double kd = static_cast<double>(k);
    if (x < kd) {
        // Upper tail of the Poisson(x) distribution: sum_{n >= k} e^-x x^n / n!.
        double term = std::exp(-x + kd * std::log(x) - std::lgamma(kd + 1.0));
        double sum = 0.0;
        for (std::size_t n = k; n < k + 10000 && term > 1e-18 * sum; ++n) {
            sum += term;
            term *= x / static_cast<double>(n + 1);
        }
        return std::min(1.0, sum);
    }
    double term = std::exp(-x);
    double sum = 0.0;
    for (std::size_t n = 0; n < k; ++n) {
        sum += term;
        term *= x / static_cast<double>(n + 1);
    }
    return std::max(0.0, 1.0 - sum);
}

}  // namespace

double erlangIntervalMass(std::size_t k, double rate, double lo, double hi) {
    if (k == 0) throw InvalidInput("Erlang shape must be at least 1");
    if (!(rate > 0.0)) throw InvalidInput("Erlang rate must be positive");
    if (!(lo <= hi)) throw InvalidInput("Erlang interval has lo > hi");
    lo = std::max(lo, 0.0);
    hi = std::max(hi, 0.0);
    return std::max(0.0, erlangCdfUnit(k, rate * hi) - erlangCdfUnit(k, rate * lo));
}

ErlangBound erlangAnalyticBound(const MeasureFamily& V, const Region& A, const Region& B, std::size_t k,
                                double lo, double hi) {
    if (V.empty()) throw InvalidInput("measure family is empty");
    ErlangBound out{-1.0, 0};
    for (std::size_t i = 0; i < V.size(); ++i) {
        const double vA = V[i].mass(A);
        if (!(vA > 0.0)) throw PreconditionViolation("some measure of the family does not charge A");
        const double vBA = V[i].massWhere([&](const Point& z) { return A.contains(z) && B.contains(z); });
        const double value = vBA / vA * erlangIntervalMass(k, vA, lo, hi);
        if (value > out.value) out = {value, i};
    }
    return out;
}

ErlangCheck erlangBoundCheck(const UncertaintySet& U, const Region& A, const Region& B, std::size_t k,
                             double lo, double hi, std::size_t nPaths, std::uint64_t seed,
                             const MonteCarloSetup& setup) {
    if (k == 0) throw InvalidInput("jump index k starts at 1");
    ErlangCheck out;
    out.lo = std::max(lo, 0.0);
    out.hi = std::min(hi, setup.horizon);
    if (!(out.lo <= out.hi)) throw InvalidInput("time window does not meet [0, T]");
    const ErlangBound bound = erlangAnalyticBound(U.measures(), A, B, k, out.lo, out.hi);
    out.analyticBound = bound.value;
    out.boundArgmax = bound.argmax;
    auto event = [&](const CadlagPath& path) {
        std::size_t count = 0;
        for (const auto& j : path.jumps()) {
            if (!A.contains(j.size)) continue;
            if (++count == k) return j.time >= out.lo && j.time <= out.hi && B.contains(j.size);
        }
        return false;
    };
    out.mc = estimateCapacity(event, U, constantControls(U, setup.base, setup.horizon), nPaths, seed, setup);
    out.pass = out.mc.value >= out.analyticBound - 3.0 * out.mc.stdError;
    return out;
}

}  // namespace glevy
