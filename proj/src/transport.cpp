#include "glevy/transport.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <cmath>

namespace glevy {

TailDensity TailDensity::powerLaw(double scale, double alpha) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("density scale must be positive");
    // alpha < 1 additionally gives int min(|z|,1) dmu < inf.
    if (!(alpha > 0.0) || !(alpha <= 2.0)) throw InvalidInput("tail exponent must lie in (0, 2]");
    return {scale, alpha};
}

double TailDensity::tail(double eta) const {
    if (eta <= 0.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(eta)) return 0.0;
    if (alpha == 1.0) return scale / eta;
    return scale / alpha * std::pow(eta, -alpha);
}

double TailDensity::inverseTail(double mass) const {
    if (mass <= 0.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(mass)) return 0.0;
    if (alpha == 1.0) return scale / mass;
    return std::pow(alpha * mass / scale, -1.0 / alpha);
}

double TailDensity::mass(double a, double b) const {
    if (a > b) throw InvalidInput("mass of a reversed interval");
    return tail(a) - tail(b);
}

double TransportMap::cutoff() const {
    return pieces_.empty() ? std::numeric_limits<double>::infinity() : pieces_.back().lower;
}

long TransportMap::pieceIndex(double mark) const {
    // Pieces are ordered by decreasing marks: piece n covers (lower_n, upper_n].
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), mark,
                               [](const Piece& p, double m) { return p.lower >= m; });
    if (it == pieces_.end()) return -1;
    if (mark > it->upper) return -1;
    return static_cast<long>(it - pieces_.begin());
}

Point TransportMap::operator()(double mark) const {
    long i = pieceIndex(mark);
    if (i < 0) return zeroPoint(dim_);
    return pieces_[static_cast<std::size_t>(i)].target;
}

double TransportMap::preimageMass(const Point& target) const {
    double m = 0.0;
    for (const auto& p : pieces_) {
        if (p.target == target) m += base_.mass(p.lower, p.upper);
    }
    return m;
}

double TransportMap::separationRadius(double eps) const {
    if (!(eps > 0.0)) throw InvalidInput("separation radius needs eps > 0");
    double eta = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
        if (norm(p.target) >= eps) eta = std::min(eta, p.lower);
    }
    // No atom outside the ball: the preimage is empty and any eta works.
    if (std::isinf(eta)) return pieces_.empty() ? 1.0 : cutoff();
    return eta;
}

DiscreteLevyMeasure TransportMap::image() const {
    std::vector<Atom> atoms;
    atoms.reserve(pieces_.size());
    for (const auto& p : pieces_) atoms.push_back(Atom{p.target, base_.mass(p.lower, p.upper)});
    return DiscreteLevyMeasure(std::move(atoms), dim_);
}

TransportMap transportMap(const BaseMeasure& base, const DiscreteLevyMeasure& v) {
    if (std::holds_alternative<DiscreteLevyMeasure>(base)) {
        throw InvalidInput("transport needs a base measure with an invertible tail function");
    }
    if (v.dim() != 1) throw Unsupported("transport maps are implemented for d = 1 only");

    TransportMap g;
    g.base_ = std::get<TailDensity>(base);
    g.dim_ = 1;

    std::vector<Atom> atoms = v.atoms();
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
        double ra = std::abs(a.location[0]);
        double rb = std::abs(b.location[0]);
        if (ra != rb) return ra > rb;
        return a.location[0] < b.location[0];
    });
    double cumulative = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) {
        cumulative += a.weight;
        double lower = g.base_.inverseTail(cumulative);
        g.pieces_.push_back({lower, upper, a.location, a.weight});
        upper = lower;
    }
    return g;
}

}  // namespace glevy
