#include "glevy/region.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool lowerOk(double x, double lo, bool closed) { return closed ? x >= lo : x > lo; }
bool upperOk(double x, double hi, bool closed) { return closed ? x <= hi : x < hi; }

void requireDim(const Point& z, std::size_t dim) {
    if (z.size() != dim) throw InvalidInput("region/point dimension mismatch");
}

bool annulusEmpty(const Annulus& a) {
    return a.inner > a.outer || (a.inner == a.outer && !(a.closedInner && a.closedOuter));
}

// Closed radial range [min |z|, max |z|] over the closure of a box.
std::pair<double, double> radialRange(const Box& b) {
    double lo2 = 0.0;
    double hi2 = 0.0;
    for (const auto& s : b.sides) {
        double nearest = std::clamp(0.0, s.lo, s.hi);
        lo2 += nearest * nearest;
        double far = std::max(std::abs(s.lo), std::abs(s.hi));
        hi2 += far * far;
    }
    return {std::sqrt(lo2), std::sqrt(hi2)};
}

bool intervalsOverlap(const Interval& a, const Interval& b) {
    if (a.isEmpty() || b.isEmpty()) return false;
    double lo = std::max(a.lo, b.lo);
    double hi = std::min(a.hi, b.hi);
    if (lo < hi) return true;
    if (lo > hi) return false;
    return a.contains(lo) && b.contains(lo);
}

std::pair<double, double> radialRange(const Region::Component& c) {
    return std::visit(Overloaded{
                          [](const Box& b) { return radialRange(b); },
                          [](const Annulus& a) { return std::pair{a.inner, a.outer}; },
                          [](const Punctured&) { return std::pair{0.0, kInf}; },
                          [](const PointSet& p) {
                              double lo = kInf, hi = 0.0;
                              for (const auto& z : p.points) {
                                  lo = std::min(lo, norm(z));
                                  hi = std::max(hi, norm(z));
                              }
                              return std::pair{lo, hi};
                          },
                      },
                      c);
}

bool componentContains(const Region::Component& c, const Point& z) {
    return std::visit(Overloaded{
                          [&](const Box& b) {
                              requireDim(z, b.sides.size());
                              for (std::size_t i = 0; i < z.size(); ++i) {
                                  if (!b.sides[i].contains(z[i])) return false;
                              }
                              return true;
                          },
                          [&](const Annulus& a) {
                              requireDim(z, a.dim);
                              double r = norm(z);
                              return lowerOk(r, a.inner, a.closedInner) &&
                                     upperOk(r, a.outer, a.closedOuter);
                          },
                          [&](const Punctured& p) {
                              requireDim(z, p.dim);
                              return !isZero(z);
                          },
                          [&](const PointSet& p) {
                              return std::any_of(p.points.begin(), p.points.end(),
                                                 [&](const Point& q) { return q == z; });
                          },
                      },
                      c);
}

bool componentClosureContains(const Region::Component& c, const Point& z) {
    return std::visit(Overloaded{
                          [&](const Box& b) {
                              requireDim(z, b.sides.size());
                              for (std::size_t i = 0; i < z.size(); ++i) {
                                  if (!b.sides[i].closureContains(z[i])) return false;
                              }
                              return true;
                          },
                          [&](const Annulus& a) {
                              requireDim(z, a.dim);
                              if (annulusEmpty(a)) return false;
                              double r = norm(z);
                              return r >= a.inner && r <= a.outer;
                          },
                          [&](const Punctured& p) {
                              requireDim(z, p.dim);
                              return true;
                          },
                          [&](const PointSet& p) { return componentContains(p, z); },
                      },
                      c);
}

bool componentInteriorContains(const Region::Component& c, const Point& z) {
    return std::visit(Overloaded{
                          [&](const Box& b) {
                              requireDim(z, b.sides.size());
                              for (std::size_t i = 0; i < z.size(); ++i) {
                                  if (!b.sides[i].interiorContains(z[i])) return false;
                              }
                              return true;
                          },
                          [&](const Annulus& a) {
                              requireDim(z, a.dim);
                              double r = norm(z);
                              // The origin is not part of R^d_0, so {0 < |z| < R} is open there.
                              return r > a.inner && r < a.outer && r > 0.0;
                          },
                          [&](const Punctured& p) {
                              requireDim(z, p.dim);
                              return !isZero(z);
                          },
                          [](const PointSet&) { return false; },
                      },
                      c);
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

bool Interval::contains(double x) const { return lowerOk(x, lo, closedLo) && upperOk(x, hi, closedHi); }

bool Interval::closureContains(double x) const { return !isEmpty() && x >= lo && x <= hi; }

bool Interval::interiorContains(double x) const { return x > lo && x < hi; }

bool Interval::isEmpty() const { return lo > hi || (lo == hi && !(closedLo && closedHi)); }

Region::Region(std::vector<Component> parts) : parts_(std::move(parts)) {}

Region Region::punctured(std::size_t dim) { return Region({Punctured{dim}}); }

Region Region::interval(double lo, double hi, bool closedLo, bool closedHi) {
    if (std::isnan(lo) || std::isnan(hi)) throw InvalidInput("interval endpoint is NaN");
    Interval iv{lo, hi, closedLo && std::isfinite(lo), closedHi && std::isfinite(hi)};
    return Region({Box{{iv}}});
}

Region Region::box(std::vector<Interval> sides) {
    if (sides.empty()) throw InvalidInput("box needs at least one side");
    for (auto& s : sides) {
        if (!std::isfinite(s.lo)) s.closedLo = false;
        if (!std::isfinite(s.hi)) s.closedHi = false;
    }
    return Region({Box{std::move(sides)}});
}

Region Region::annulus(double inner, double outer, bool closedInner, bool closedOuter,
                       std::size_t dim) {
    if (inner < 0.0) throw InvalidInput("annulus inner radius must be nonnegative");
    return Region({Annulus{inner, outer, closedInner, closedOuter && std::isfinite(outer), dim}});
}

Region Region::points(std::vector<Point> pts) { return Region({PointSet{std::move(pts)}}); }

Region Region::operator|(const Region& other) const {
    std::vector<Component> parts = parts_;
    parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
    return Region(std::move(parts));
}

bool Region::contains(const Point& z) const {
    return std::any_of(parts_.begin(), parts_.end(),
                       [&](const Component& c) { return componentContains(c, z); });
}

bool Region::closureContains(const Point& z) const {
    return std::any_of(parts_.begin(), parts_.end(),
                       [&](const Component& c) { return componentClosureContains(c, z); });
}

bool Region::interiorContains(const Point& z) const {
    return std::any_of(parts_.begin(), parts_.end(),
                       [&](const Component& c) { return componentInteriorContains(c, z); });
}

bool Region::boundaryContains(const Point& z) const {
    return closureContains(z) && !interiorContains(z);
}

Region Region::closure() const {
    std::vector<Component> parts;
    for (const auto& c : parts_) {
        parts.push_back(std::visit(Overloaded{
                                       [](Box b) -> Component {
                                           for (auto& s : b.sides) {
                                               if (s.isEmpty()) return PointSet{};
                                               s.closedLo = std::isfinite(s.lo);
                                               s.closedHi = std::isfinite(s.hi);
                                           }
                                           return b;
                                       },
                                       [](Annulus a) -> Component {
                                           if (annulusEmpty(a)) return PointSet{};
                                           a.closedInner = true;
                                           a.closedOuter = std::isfinite(a.outer);
                                           return a;
                                       },
                                       [](Punctured p) -> Component {
                                           // The closure in R^d adds the origin: a closed box of everything.
                                           return Box{std::vector<Interval>(
                                               p.dim, Interval{-kInf, kInf, false, false})};
                                       },
                                       [](PointSet p) -> Component { return p; },
                                   },
                                   c));
    }
    return Region(std::move(parts));
}

bool Region::isOpen() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const Component& c) {
        return std::visit(Overloaded{
                              [](const Box& b) {
                                  return std::all_of(b.sides.begin(), b.sides.end(),
                                                     [](const Interval& s) {
                                                         return !s.closedLo && !s.closedHi;
                                                     });
                              },
                              [](const Annulus& a) {
                                  return (!a.closedInner || a.inner == 0.0) && !a.closedOuter;
                              },
                              [](const Punctured&) { return true; },
                              [](const PointSet& p) { return p.points.empty(); },
                          },
                          c);
    });
}

bool Region::isEmpty() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const Component& c) {
        return std::visit(Overloaded{
                              [](const Box& b) {
                                  return std::any_of(b.sides.begin(), b.sides.end(),
                                                     [](const Interval& s) { return s.isEmpty(); });
                              },
                              [](const Annulus& a) { return annulusEmpty(a); },
                              [](const Punctured&) { return false; },
                              [](const PointSet& p) { return p.points.empty(); },
                          },
                          c);
    });
}

bool Region::boundedAwayFromOrigin(std::size_t dim) const { return !closureContains(zeroPoint(dim)); }

bool Region::mayOverlap(const Region& other) const {
    for (const auto& a : parts_) {
        for (const auto& b : other.parts_) {
            if (const auto* pa = std::get_if<PointSet>(&a)) {
                for (const auto& z : pa->points) {
                    if (componentContains(b, z)) return true;
                }
                continue;
            }
            if (const auto* pb = std::get_if<PointSet>(&b)) {
                for (const auto& z : pb->points) {
                    if (componentContains(a, z)) return true;
                }
                continue;
            }
            const auto* ba = std::get_if<Box>(&a);
            const auto* bb = std::get_if<Box>(&b);
            if (ba && bb) {
                if (ba->sides.size() != bb->sides.size()) throw InvalidInput("region dimension mismatch");
                bool all = true;
                for (std::size_t i = 0; i < ba->sides.size(); ++i) {
                    all = all && intervalsOverlap(ba->sides[i], bb->sides[i]);
                }
                if (all) return true;
                continue;
            }
            auto [alo, ahi] = radialRange(a);
            auto [blo, bhi] = radialRange(b);
            if (std::max(alo, blo) <= std::min(ahi, bhi)) return true;
        }
    }
    return false;
}

std::optional<std::size_t> Region::dimension() const {
    for (const auto& c : parts_) {
        auto d = std::visit(Overloaded{
                                [](const Box& b) -> std::optional<std::size_t> { return b.sides.size(); },
                                [](const Annulus& a) -> std::optional<std::size_t> { return a.dim; },
                                [](const Punctured& p) -> std::optional<std::size_t> { return p.dim; },
                                [](const PointSet& p) -> std::optional<std::size_t> {
                                    if (p.points.empty()) return std::nullopt;
                                    return p.points.front().size();
                                },
                            },
                            c);
        if (d) return d;
    }
    return std::nullopt;
}

std::string Region::describe() const {
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    bool first = true;
    for (const auto& c : parts_) {
        if (!first) os << " u ";
        first = false;
        std::visit(Overloaded{
                       [&](const Box& b) {
                           for (std::size_t i = 0; i < b.sides.size(); ++i) {
                               const auto& s = b.sides[i];
                               if (i) os << "x";
                               os << (s.closedLo ? '[' : '(') << fmt(s.lo) << "," << fmt(s.hi)
                                  << (s.closedHi ? ']' : ')');
                           }
                       },
                       [&](const Annulus& a) {
                           os << "{" << fmt(a.inner) << (a.closedInner ? "<=" : "<") << "|z|"
                              << (a.closedOuter ? "<=" : "<") << fmt(a.outer) << "}";
                       },
                       [&](const Punctured& p) { os << "R^" << p.dim << "_0"; },
                       [&](const PointSet& p) {
                           os << "{";
                           for (std::size_t i = 0; i < p.points.size(); ++i) {
                               if (i) os << ";";
                               for (std::size_t j = 0; j < p.points[i].size(); ++j) {
                                   if (j) os << ",";
                                   os << fmt(p.points[i][j]);
                               }
                           }
                           os << "}";
                       },
                   },
                   c);
    }
    return os.str();
}

}  // namespace glevy
