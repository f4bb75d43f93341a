#pragma once

#include "glevy/linalg.hpp"

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace glevy {

/// One coordinate range with explicit open/closed ends. Infinite ends are always open.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool closedLo = false;
    bool closedHi = true;

    bool contains(double x) const;
    bool closureContains(double x) const;
    bool interiorContains(double x) const;
    bool isEmpty() const;
};

/// Product of intervals.
struct Box {
    std::vector<Interval> sides;
};

/// { z : r <|<= |z| <|<= R }.
struct Annulus {
    double inner = 0.0;
    double outer = std::numeric_limits<double>::infinity();
    bool closedInner = true;
    bool closedOuter = true;
    std::size_t dim = 1;
};

/// R^d without the origin.
struct Punctured {
    std::size_t dim = 1;
};

/// Finite set of explicit points (exact equality).
struct PointSet {
    std::vector<Point> points;
};

/// Finite union of boxes, annuli, explicit atom sets and R^d_0.
///
/// Membership comes in three flavours: the set itself, its closure and its
/// interior. The interior of a union is taken as the union of the component
/// interiors, which is exact whenever the component closures are disjoint and
/// otherwise slightly too small (so boundary membership errs on the side of
/// reporting a point as a boundary point).
class Region {
public:
    using Component = std::variant<Box, Annulus, Punctured, PointSet>;

    Region() = default;
    explicit Region(std::vector<Component> parts);

    static Region empty() { return Region(); }
    static Region punctured(std::size_t dim = 1);
    static Region interval(double lo, double hi, bool closedLo, bool closedHi);
    static Region open(double lo, double hi) { return interval(lo, hi, false, false); }
    static Region closed(double lo, double hi) { return interval(lo, hi, true, true); }
    /// (lo, hi]
    static Region halfOpen(double lo, double hi) { return interval(lo, hi, false, true); }
    static Region box(std::vector<Interval> sides);
    static Region annulus(double inner, double outer, bool closedInner = true,
                          bool closedOuter = true, std::size_t dim = 1);
    static Region points(std::vector<Point> pts);
    static Region point(double x) { return points({Point{x}}); }

    Region operator|(const Region& other) const;

    bool contains(const Point& z) const;
    bool closureContains(const Point& z) const;
    bool interiorContains(const Point& z) const;
    bool boundaryContains(const Point& z) const;

    /// Closure as a region (all ends closed).
    Region closure() const;
    /// True when every component is open.
    bool isOpen() const;
    bool isEmpty() const;
    /// 0 is not in the closure.
    bool boundedAwayFromOrigin(std::size_t dim) const;
    /// Conservative overlap test: exact for boxes and point sets, radial for annuli.
    bool mayOverlap(const Region& other) const;
    /// Dimension implied by the components, if any component fixes it.
    std::optional<std::size_t> dimension() const;

    const std::vector<Component>& components() const { return parts_; }

    std::string describe() const;

private:
    std::vector<Component> parts_;
};

}  // namespace glevy
