#pragma once

#include "glevy/levy_measure.hpp"
#include "glevy/linalg.hpp"

#include <limits>
#include <variant>
#include <vector>

namespace glevy {

/// Infinite reference measure on (0, inf) with density c * z^-(1+alpha) and
/// closed-form tail mu(eta, inf) = (c / alpha) * eta^-alpha.
///
/// The default (c = 1, alpha = 1) is the density z^-2 with tail 1/eta.
struct TailDensity {
    double scale = 1.0;
    double alpha = 1.0;

    static TailDensity inverseSquare() { return {}; }
    static TailDensity powerLaw(double scale, double alpha);

    /// mu(eta, inf); +inf at eta = 0.
    double tail(double eta) const;
    /// The eta with tail(eta) = m; +inf at m = 0.
    double inverseTail(double mass) const;
    /// mu(a, b] for 0 <= a <= b <= inf.
    double mass(double a, double b) const;
};

/// Reference measures a transport map can be built from. Discrete bases have a
/// step tail function, which cannot be inverted, and are rejected.
using BaseMeasure = std::variant<TailDensity, DiscreteLevyMeasure>;

/// Monotone rearrangement g pushing an infinite density on (0, inf) onto a
/// finite discrete Levy measure on R_0.
///
/// Atoms are ordered by decreasing |z| (ties by z). Atom n receives the shell
/// (eta_n, eta_{n-1}] where eta_0 = inf and tail(eta_n) is the cumulative mass
/// of the first n atoms, so mu(g^-1{z_n}) = w_n by construction. Marks at or
/// below the last eta map to 0 (no jump).
class TransportMap {
public:
    struct Piece {
        double lower;  ///< open end
        double upper;  ///< closed end, +inf for the first piece
        Point target;
        double weight;
    };

    TransportMap() = default;

    const TailDensity& base() const { return base_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    std::size_t dim() const { return dim_; }
    bool isZero() const { return pieces_.empty(); }
    /// Smallest mark that maps to a nonzero jump is strictly above this value.
    double cutoff() const;

    /// g(mark) for a mark in (0, inf); the zero vector when no piece contains it.
    Point operator()(double mark) const;
    /// Index of the piece containing the mark, or -1.
    long pieceIndex(double mark) const;
    /// mu(g^-1{target}); 0 when `target` is not an atom of the image.
    double preimageMass(const Point& target) const;
    /// An eta > 0 with g^-1(complement of ball(0, eps)) inside (eta, inf); the
    /// returned eta is the largest one that works.
    double separationRadius(double eps) const;

    /// The pushforward mu o g^-1 restricted to R_0.
    DiscreteLevyMeasure image() const;

private:
    friend TransportMap transportMap(const BaseMeasure&, const DiscreteLevyMeasure&);

    TailDensity base_;
    std::vector<Piece> pieces_;
    std::size_t dim_ = 1;
};

/// Builds g_v. Throws Unsupported for d > 1 targets and InvalidInput for a
/// discrete base measure.
TransportMap transportMap(const BaseMeasure& base, const DiscreteLevyMeasure& v);

}  // namespace glevy
