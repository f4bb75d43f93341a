#include "glevy/config.hpp"

#include "glevy/errors.hpp"
#include "glevy/path_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace glevy::config {

namespace {

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing key '") + key + "'");
    return j.at(key);
}

const Json& requireArray(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_array()) throw InvalidInput(std::string("key '") + key + "' must be an array");
    return v;
}

double number(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_number()) throw InvalidInput(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

double numberOr(const Json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

std::size_t countOr(const Json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InvalidInput(std::string("key '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

std::vector<double> range(const Json& j) {
    if (j.contains("values")) {
        auto values = j.at("values").get<std::vector<double>>();
        if (values.empty()) throw InvalidInput("empty parameter range");
        return values;
    }
    const double lo = number(j, "lo");
    const double hi = number(j, "hi");
    const std::size_t count = countOr(j, "count", 2);
    if (count == 0 || hi < lo) throw InvalidInput("parameter range needs lo <= hi and count >= 1");
    if (count == 1) return {lo};
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    out.back() = hi;
    return out;
}

Point pointFrom(const Json& j) {
    if (j.is_number()) return Point{j.get<double>()};
    return j.get<Point>();
}

Matrix covRootFrom(const Json& j, std::size_t d) {
    if (j.is_number()) {
        Matrix q = Matrix::zeros(d);
        for (std::size_t i = 0; i < d; ++i) q(i, i) = j.get<double>();
        return q;
    }
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.size() != d) throw InvalidInput("covariance root has the wrong size");
    Matrix q = Matrix::zeros(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) throw InvalidInput("covariance root has the wrong size");
        for (std::size_t k = 0; k < d; ++k) q(i, k) = rows[i][k];
    }
    return q;
}

LevyTriple tripleFrom(DiscreteLevyMeasure v, const Json& j) {
    const std::size_t d = v.dim();
    Point p = j.contains("drift") ? pointFrom(j.at("drift")) : zeroPoint(d);
    Matrix q = j.contains("Q") ? covRootFrom(j.at("Q"), d) : Matrix::zeros(d);
    return LevyTriple(std::move(v), std::move(p), std::move(q));
}

UncertaintySet family(const Json& f) {
    const std::string rule = require(f, "rule").get<std::string>();
    std::vector<LevyTriple> triples;
    if (rule == "scaledDirac") {
        const double x = numberOr(f, "location", 1.0);
        for (double lambda : range(require(f, "lambda"))) {
            triples.push_back(tripleFrom(DiscreteLevyMeasure::dirac(x, lambda), f));
        }
    } else if (rule == "diracLocation") {
        const double w = numberOr(f, "weight", 1.0);
        for (double x : range(require(f, "location"))) {
            triples.push_back(tripleFrom(DiscreteLevyMeasure::dirac(x, w), f));
        }
    } else if (rule == "twoPointMixture") {
        const double x = number(f, "x");
        const double y = number(f, "y");
        const double total = numberOr(f, "total", 1.0);
        for (double a : range(require(f, "alpha"))) {
            if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("mixture weight outside [0, 1]");
            std::vector<std::pair<double, double>> atoms;
            if (a > 0.0) atoms.emplace_back(x, total * a);
            if (a < 1.0) atoms.emplace_back(y, total * (1.0 - a));
            triples.push_back(tripleFrom(DiscreteLevyMeasure::fromPairs(atoms), f));
        }
    } else {
        throw InvalidInput("unknown family rule '" + rule + "'");
    }
    return UncertaintySet(std::move(triples));
}

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

Json load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidInput("cannot read config '" + file.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
}

std::string hash(const Json& doc) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : doc.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Region region(const Json& j) {
    const std::string type = require(j, "type").get<std::string>();
    if (type == "interval") {
        return Region::interval(number(j, "lo"), number(j, "hi"), j.value("closedLo", false),
                                j.value("closedHi", true));
    }
    if (type == "open") return Region::open(number(j, "lo"), number(j, "hi"));
    if (type == "closed") return Region::closed(number(j, "lo"), number(j, "hi"));
    if (type == "halfOpen") return Region::halfOpen(number(j, "lo"), number(j, "hi"));
    if (type == "annulus") {
        return Region::annulus(number(j, "inner"), numberOr(j, "outer", std::numeric_limits<double>::infinity()),
                               j.value("closedInner", true), j.value("closedOuter", true), countOr(j, "dim", 1));
    }
    if (type == "point") return Region::point(number(j, "x"));
    if (type == "points") {
        std::vector<Point> pts;
        for (const auto& p : requireArray(j, "points")) pts.push_back(pointFrom(p));
        return Region::points(std::move(pts));
    }
    if (type == "punctured") return Region::punctured(countOr(j, "dim", 1));
    if (type == "empty") return Region::empty();
    if (type == "union") {
        Region out;
        for (const auto& part : requireArray(j, "of")) out = out | region(part);
        return out;
    }
    throw InvalidInput("unknown region type '" + type + "'");
}

DiscreteLevyMeasure measure(const Json& j, std::optional<std::size_t> dim) {
    if (!j.is_array()) throw InvalidInput("a measure is a list of atoms");
    std::vector<Atom> atoms;
    for (const auto& a : j) {
        if (a.is_array()) {
            if (a.size() != 2) throw InvalidInput("scalar atoms are [z, w] pairs");
            atoms.push_back(Atom{Point{a[0].get<double>()}, a[1].get<double>()});
        } else {
            atoms.push_back(Atom{pointFrom(require(a, "z")), number(a, "w")});
        }
    }
    if (!dim && !atoms.empty()) dim = atoms.front().location.size();
    return DiscreteLevyMeasure(std::move(atoms), dim);
}

UncertaintySet uncertainty(const Json& j) {
    if (j.contains("family")) return family(j.at("family"));
    std::vector<LevyTriple> triples;
    for (const auto& t : requireArray(j, "triples")) {
        std::optional<std::size_t> dim;
        if (t.contains("drift")) dim = pointFrom(t.at("drift")).size();
        triples.push_back(tripleFrom(measure(t.contains("atoms") ? t.at("atoms") : Json::array(), dim), t));
    }
    return UncertaintySet(std::move(triples));
}

Grid1D grid(const Json& j, const Grid1D& defaults) {
    Grid1D g = defaults;
    g.xMin = numberOr(j, "xMin", g.xMin);
    g.xMax = numberOr(j, "xMax", g.xMax);
    g.nx = countOr(j, "nx", g.nx);
    g.dt = numberOr(j, "dt", g.dt);
    g.T = numberOr(j, "T", g.T);
    g.validate();
    return g;
}

McConfig mc(const Json& j) {
    McConfig c;
    c.nPaths = countOr(j, "nPaths", c.nPaths);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer()) throw InvalidInput("seed must be an integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.controlIntervals = countOr(j, "controlIntervals", c.controlIntervals);
    c.maxPolicies = countOr(j, "maxPolicies", c.maxPolicies);
    c.setup.dt = numberOr(j, "dt", c.setup.dt);
    c.setup.threads = static_cast<unsigned>(countOr(j, "threads", c.setup.threads));
    c.setup.chunkSize = countOr(j, "chunkSize", c.setup.chunkSize);
    if (c.controlIntervals == 0) throw InvalidInput("controlIntervals must be positive");
    if (c.setup.chunkSize == 0) throw InvalidInput("chunkSize must be positive");
    if (!(c.setup.dt > 0.0)) throw InvalidInput("mc dt must be positive");
    return c;
}

ScalarFunction payoff(const Json& j) {
    const std::string type = require(j, "type").get<std::string>();
    const double inf = std::numeric_limits<double>::infinity();
    if (type == "linear") {
        const double a = numberOr(j, "slope", 1.0);
        const double b = numberOr(j, "intercept", 0.0);
        return [a, b](const Point& x) { return a * x[0] + b; };
    }
    if (type == "clampedLinear") {
        const double a = numberOr(j, "slope", 1.0);
        const double lo = numberOr(j, "lo", -inf);
        const double hi = numberOr(j, "hi", inf);
        if (lo > hi) throw InvalidInput("clampedLinear needs lo <= hi");
        return [a, lo, hi](const Point& x) { return clamp(a * x[0], lo, hi); };
    }
    if (type == "antitone") {
        const double lo = numberOr(j, "lo", -inf);
        const double hi = numberOr(j, "hi", inf);
        if (lo > hi) throw InvalidInput("antitone needs lo <= hi");
        return [lo, hi](const Point& x) { return clamp(-x[0], lo, hi); };
    }
    if (type == "smoothIndicator") {
        const double lo = number(j, "lo");
        const double hi = number(j, "hi");
        const double w = numberOr(j, "width", 0.1);
        if (!(w > 0.0) || lo > hi) throw InvalidInput("smoothIndicator needs lo <= hi and width > 0");
        return [lo, hi, w](const Point& x) {
            const double up = clamp((x[0] - lo) / w + 0.5, 0.0, 1.0);
            const double down = clamp((hi - x[0]) / w + 0.5, 0.0, 1.0);
            return std::min(up, down);
        };
    }
    if (type == "constant") {
        const double c = number(j, "value");
        return [c](const Point&) { return c; };
    }
    if (type == "table") {
        const auto xs = require(j, "x").get<std::vector<double>>();
        const auto ys = require(j, "y").get<std::vector<double>>();
        if (xs.empty() || xs.size() != ys.size()) throw InvalidInput("table needs matching nonempty x and y");
        if (!std::is_sorted(xs.begin(), xs.end()) ||
            std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
            throw InvalidInput("table x must be strictly increasing");
        }
        return [xs, ys](const Point& p) {
            const double x = p[0];
            if (x <= xs.front()) return ys.front();
            if (x >= xs.back()) return ys.back();
            const auto k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
            const double th = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            return ys[k - 1] + th * (ys[k] - ys[k - 1]);
        };
    }
    if (type == "indicator") {
        const Region A = region(require(j, "region"));
        return [A](const Point& x) { return A.contains(x) ? 1.0 : 0.0; };
    }
    throw InvalidInput("unknown payoff type '" + type + "'");
}

TestFunction testFunction(const Json& j) {
    TestFunction f;
    f.eval = payoff(j);
    if (j.contains("discontinuities")) f.discontinuities = region(j.at("discontinuities"));
    if (j.contains("support")) f.support = region(j.at("support"));
    return f;
}

PathEvent event(const Json& j) {
    const std::string type = require(j, "type").get<std::string>();
    const Region A = region(require(j, "region"));
    if (type == "jumpIn") {
        return [A](const CadlagPath& path) {
            return std::any_of(path.jumps().begin(), path.jumps().end(),
                               [&](const Jump& jump) { return A.contains(jump.size); });
        };
    }
    if (type == "countAtLeast") {
        const std::size_t k = countOr(j, "k", 1);
        return [A, k](const CadlagPath& path) {
            const auto n = std::count_if(path.jumps().begin(), path.jumps().end(),
                                         [&](const Jump& jump) { return A.contains(jump.size); });
            return static_cast<std::size_t>(n) >= k;
        };
    }
    if (type == "kthJumpIn") {
        const Region B = region(require(j, "target"));
        const std::size_t k = countOr(j, "k", 1);
        const double lo = number(j, "lo");
        const double hi = numberOr(j, "hi", std::numeric_limits<double>::infinity());
        if (k == 0) throw InvalidInput("k must be positive");
        return [A, B, k, lo, hi](const CadlagPath& path) {
            std::size_t seen = 0;
            for (const auto& jump : path.jumps()) {
                if (!A.contains(jump.size)) continue;
                if (++seen == k) return jump.time >= lo && jump.time <= hi && B.contains(jump.size);
            }
            return false;
        };
    }
    throw InvalidInput("unknown event type '" + type + "'");
}

}  // namespace glevy::config
