#include "glevy/path_ops.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace glevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void checkTime(const CadlagPath& path, double t) {
    if (!(t >= 0.0 && t <= path.horizon())) throw InvalidInterval("time outside [0, T]");
}

}  // namespace

std::size_t prmCount(const CadlagPath& path, double s, double t, const Region& A) {
    if (!(s >= 0.0 && s < t && t <= path.horizon())) {
        throw InvalidInterval("counting interval (s, t] needs 0 <= s < t <= T");
    }
    std::size_t n = 0;
    for (const auto& j : path.jumps()) {
        if (j.time <= s) continue;
        if (j.time > t) break;
        if (A.contains(j.size)) ++n;
    }
    return n;
}

Point poissonIntegral(const CadlagPath& path, const VectorFunction& phi, const Region& A, double t) {
    checkTime(path, t);
    Point acc;
    for (const auto& j : path.jumps()) {
        if (j.time > t) break;
        if (!A.contains(j.size)) continue;
        Point y = phi(j.size);
        for (double c : y) {
            if (!std::isfinite(c)) throw EvaluationError("integrand is not finite at a jump");
        }
        if (acc.empty()) {
            acc = std::move(y);
        } else {
            acc += y;
        }
    }
    if (acc.empty()) acc = zeroPoint(path.dim());
    return acc;
}

double poissonIntegralScalar(const CadlagPath& path, const ScalarFunction& phi, const Region& A, double t) {
    checkTime(path, t);
    double acc = 0.0;
    for (const auto& j : path.jumps()) {
        if (j.time > t) break;
        if (!A.contains(j.size)) continue;
        double y = phi(j.size);
        if (!std::isfinite(y)) throw EvaluationError("integrand is not finite at a jump");
        acc += y;
    }
    return acc;
}

double StoppingTime::time() const {
    if (!time_) throw InvalidInput("stopping time is infinite");
    return *time_;
}

double StoppingTime::orInfinity() const { return time_ ? *time_ : kInf; }

JumpTimes jumpTimes(const CadlagPath& path, const Region& A, std::size_t k) {
    if (k == 0) throw InvalidInput("jump index k starts at 1");
    if (!A.isOpen()) throw InvalidInput("jump times are defined for open regions");
    if (!A.boundedAwayFromOrigin(path.dim())) throw InvalidInput("0 lies in the closure of the region");
    JumpTimes out{StoppingTime::never(), StoppingTime::never()};
    std::size_t nOpen = 0;
    std::size_t nClosed = 0;
    for (const auto& j : path.jumps()) {
        if (out.tau.isNever() && A.interiorContains(j.size) && ++nOpen == k) {
            out.tau = StoppingTime::at(j.time);
        }
        if (out.tauBar.isNever() && A.closureContains(j.size) && ++nClosed == k) {
            out.tauBar = StoppingTime::at(j.time);
        }
    }
    return out;
}

namespace {

// Event skeleton: node times e_0 = 0 < ... < e_m = T with x(e_l) and x(e_l-).
struct Skeleton {
    std::vector<double> e;
    std::vector<Point> x;
    std::vector<Point> left;
};

Skeleton skeletonOf(const CadlagPath& path) {
    Skeleton s;
    s.e = path.eventTimes();
    s.x.reserve(s.e.size());
    s.left.reserve(s.e.size());
    for (double t : s.e) {
        s.x.push_back(path.value(t));
        s.left.push_back(path.leftLimit(t));
    }
    return s;
}

double dist(const Point& a, const Point& b) {
    if (a.size() == 1) return std::abs(a[0] - b[0]);
    return norm(a - b);
}

// D[i][k - i] = diameter of the vertex set of pieces i..k, where piece l is the
// segment [e_l, e_{l+1}) with vertices x(e_l) and x(e_{l+1}-).
std::vector<std::vector<double>> pieceDiameters(const Skeleton& s) {
    const std::size_t m = s.e.size() - 1;
    std::vector<std::vector<double>> D(m);
    const bool scalar = s.x.front().size() == 1;
    for (std::size_t i = 0; i < m; ++i) {
        D[i].resize(m - i);
        if (scalar) {
            double lo = kInf;
            double hi = -kInf;
            for (std::size_t k = i; k < m; ++k) {
                for (double v : {s.x[k][0], s.left[k + 1][0]}) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                D[i][k - i] = hi - lo;
            }
        } else {
            std::vector<const Point*> verts;
            double diam = 0.0;
            for (std::size_t k = i; k < m; ++k) {
                for (const Point* v : {&s.x[k], &s.left[k + 1]}) {
                    for (const Point* w : verts) diam = std::max(diam, dist(*v, *w));
                    verts.push_back(v);
                }
                D[i][k - i] = diam;
            }
        }
    }
    return D;
}

// Partition points are classified by where they sit: exactly on node j
// ("on", class 2j) or strictly inside the gap (e_j, e_{j+1}) ("gap", class
// 2j+1). For a path that is constant between events the oscillation of an
// interval depends only on the classes of its ends, and the leftmost
// reachable position of a class is all that matters for the mesh constraint.
class PartitionSearch {
public:
    PartitionSearch(const Skeleton& s, const std::vector<std::vector<double>>& D, double delta)
        : s_(s), D_(D), delta_(delta), m_(s.e.size() - 1) {}

    bool feasible(double theta) const {
        const std::size_t nClasses = 2 * m_ + 1;
        std::vector<double> best(nClasses, kInf);
        best[0] = 0.0;
        for (std::size_t c = 0; c < nClasses; ++c) {
            if (std::isinf(best[c])) continue;
            const std::size_t i = c / 2;  // first piece covered by an interval starting here
            const double reach = best[c] + delta_;
            for (std::size_t c2 = c + 1; c2 < nClasses; ++c2) {
                const std::size_t k = c2 / 2;
                const bool onNode = c2 % 2 == 0;
                if (onNode && k == i) continue;  // empty interval
                const std::size_t lastPiece = onNode ? k - 1 : k;
                if (D_[i][lastPiece - i] > theta) break;  // diameters grow with c2
                double pos;
                if (onNode) {
                    if (!(s_.e[k] > reach)) continue;
                    pos = s_.e[k];
                } else {
                    if (!(s_.e[k + 1] > reach)) continue;
                    pos = std::max(reach, s_.e[k]);
                }
                if (c2 == nClasses - 1) return true;
                best[c2] = std::min(best[c2], pos);
            }
        }
        return false;
    }

private:
    const Skeleton& s_;
    const std::vector<std::vector<double>>& D_;
    double delta_;
    std::size_t m_;
};

double wPrimeOf(const Skeleton& s, double delta) {
    const auto D = pieceDiameters(s);
    std::vector<double> candidates;
    for (const auto& row : D) candidates.insert(candidates.end(), row.begin(), row.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    PartitionSearch search(s, D, delta);
    // The trivial partition {0, T} is admissible, so the largest candidate is feasible.
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (search.feasible(candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return candidates[lo];
}

// Piecewise-constant case: piece l holds x(e_l) on [e_l, e_{l+1}) for l < m and
// piece m is the single point T. A triple of pieces p < q < r is reachable
// with t_2 - t_1 <= delta iff e_r - e_{p+1} < delta.
double wDoublePrimeFlat(const Skeleton& s, double delta) {
    const std::size_t m = s.e.size() - 1;
    double best = 0.0;
    for (std::size_t p = 0; p + 2 <= m; ++p) {
        for (std::size_t r = p + 2; r <= m; ++r) {
            if (!(s.e[r] - s.e[p + 1] < delta)) break;
            for (std::size_t q = p + 1; q < r; ++q) {
                best = std::max(best, std::min(dist(s.x[q], s.x[p]), dist(s.x[r], s.x[q])));
            }
        }
    }
    return best;
}

// General case: t_1, t, t_2 restricted to node times, a lower bound.
double wDoublePrimeNodes(const Skeleton& s, double delta) {
    const std::size_t n = s.e.size();
    double best = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t r = p + 2; r < n && s.e[r] - s.e[p] <= delta; ++r) {
            for (std::size_t q = p + 1; q < r; ++q) {
                best = std::max(best, std::min(dist(s.x[q], s.x[p]), dist(s.x[r], s.x[q])));
            }
        }
    }
    return best;
}

}  // namespace

Modulus cadlagModulus(const CadlagPath& path, double delta) {
    if (!(delta > 0.0 && delta < path.horizon())) throw InvalidInput("modulus needs 0 < delta < T");
    const Skeleton s = skeletonOf(path);
    Modulus out;
    out.exact = path.isPiecewiseConstant();
    out.wPrime = wPrimeOf(s, delta);
    out.wDoublePrime = out.exact ? wDoublePrimeFlat(s, delta) : wDoublePrimeNodes(s, delta);
    return out;
}

CadlagPath discretizeTn(const CadlagPath& path, std::size_t n) {
    if (n == 0) throw InvalidInput("T^n needs n >= 1");
    const double T = path.horizon();
    std::vector<Jump> jumps;
    Point prev = path.value(0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = k == n ? T : static_cast<double>(k) * T / static_cast<double>(n);
        Point cur = path.value(t);
        Point step = cur - prev;
        if (!isZero(step)) jumps.push_back(Jump{t, step});
        prev = std::move(cur);
    }
    return CadlagPath::pureJump(T, std::move(jumps), path.dim());
}

namespace {

struct Lambda {
    std::vector<double> u;
    std::vector<double> v;

    double forward(double t) const { return interp(u, v, t); }
    double inverse(double s) const { return interp(v, u, s); }

    static double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.end()) return ys.back();
        std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        if (hi == 0) return ys.front();
        std::size_t lo = hi - 1;
        if (x == xs[lo]) return ys[lo];
        if (xs[lo] == ys[lo] && xs[hi] == ys[hi]) return x;  // identity piece
        return ys[lo] + (x - xs[lo]) * (ys[hi] - ys[lo]) / (xs[hi] - xs[lo]);
    }
};

Lambda makeLambda(double T, const TimeChange& knots) {
    Lambda l;
    l.u.push_back(0.0);
    l.v.push_back(0.0);
    for (auto [a, b] : knots) {
        if (!(a > l.u.back() && b > l.v.back() && a < T && b < T)) {
            throw InvalidInput("time change knots must increase strictly inside (0, T)");
        }
        l.u.push_back(a);
        l.v.push_back(b);
    }
    l.u.push_back(T);
    l.v.push_back(T);
    return l;
}

}  // namespace

double timeChangeDistance(const CadlagPath& a, const CadlagPath& b, const TimeChange& knots) {
    if (a.horizon() != b.horizon() || a.dim() != b.dim()) {
        throw InvalidInput("paths must share horizon and dimension");
    }
    const double T = a.horizon();
    const Lambda lam = makeLambda(T, knots);

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < lam.u.size(); ++i) pts.emplace_back(lam.u[i], lam.v[i]);
    auto isKnotU = [&](double t) { return std::binary_search(lam.u.begin(), lam.u.end(), t); };
    auto isKnotV = [&](double s) { return std::binary_search(lam.v.begin(), lam.v.end(), s); };
    for (double t : a.eventTimes()) {
        if (!isKnotU(t)) pts.emplace_back(t, lam.forward(t));
    }
    for (double s : b.eventTimes()) {
        if (!isKnotV(s)) pts.emplace_back(lam.inverse(s), s);
    }
    std::sort(pts.begin(), pts.end());

    double sup = 0.0;
    for (std::size_t i = 0; i < lam.u.size(); ++i) sup = std::max(sup, std::abs(lam.v[i] - lam.u[i]));
    for (auto [t, s] : pts) {
        sup = std::max(sup, dist(a.value(t), b.value(s)));
        if (t > 0.0) sup = std::max(sup, dist(a.leftLimit(t), b.leftLimit(s)));
    }
    return sup;
}

namespace {

// Greedy alignment of the jumps of `a` onto jumps of `b`, largest jumps first,
// keeping the matched times in the same order. Returns the matches in the
// order they were made.
TimeChange greedyMatches(const CadlagPath& a, const CadlagPath& b) {
    const double T = a.horizon();
    std::vector<const Jump*> ja;
    std::vector<const Jump*> jb;
    for (const auto& j : a.jumps()) ja.push_back(&j);
    for (const auto& j : b.jumps()) jb.push_back(&j);
    std::stable_sort(ja.begin(), ja.end(),
                     [](const Jump* x, const Jump* y) { return norm(x->size) > norm(y->size); });
    std::vector<bool> used(jb.size(), false);
    TimeChange matches;
    for (const Jump* x : ja) {
        if (x->time >= T) continue;  // lambda(T) = T is fixed
        double bestCost = kInf;
        std::size_t bestIdx = jb.size();
        for (std::size_t i = 0; i < jb.size(); ++i) {
            if (used[i] || jb[i]->time >= T) continue;
            const double tb = jb[i]->time;
            bool consistent = true;
            for (auto [u, v] : matches) {
                if ((x->time < u) != (tb < v) || x->time == u || tb == v) {
                    consistent = false;
                    break;
                }
            }
            if (!consistent) continue;
            const double cost = std::abs(x->time - tb) + dist(x->size, jb[i]->size);
            if (cost < bestCost) {
                bestCost = cost;
                bestIdx = i;
            }
        }
        if (bestIdx == jb.size()) continue;
        used[bestIdx] = true;
        matches.emplace_back(x->time, jb[bestIdx]->time);
    }
    return matches;
}

double bestOneDirection(const CadlagPath& a, const CadlagPath& b) {
    double best = timeChangeDistance(a, b, {});
    const TimeChange matches = greedyMatches(a, b);
    for (std::size_t k = 1; k <= matches.size(); ++k) {
        TimeChange knots(matches.begin(), matches.begin() + static_cast<long>(k));
        std::sort(knots.begin(), knots.end());
        best = std::min(best, timeChangeDistance(a, b, knots));
    }
    return best;
}

}  // namespace

double skorohodDistanceUpper(const CadlagPath& a, const CadlagPath& b) {
    if (a.horizon() != b.horizon() || a.dim() != b.dim()) {
        throw InvalidInput("paths must share horizon and dimension");
    }
    return std::min(bestOneDirection(a, b), bestOneDirection(b, a));
}

CadlagPath counterexampleFamily(double t, double x, double horizon) {
    if (!(t > 0.0 && t < horizon)) throw InvalidInput("jump time must lie in (0, T)");
    if (!(x >= 1.0 && x <= 2.0)) throw InvalidInput("jump size must lie in [1, 2]");
    return CadlagPath::scalarJumps(horizon, {{t, x}});
}

}  // namespace glevy
