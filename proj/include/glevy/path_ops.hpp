#pragma once

#include "glevy/cadlag_path.hpp"
#include "glevy/region.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace glevy {

/// L(]s,t], A): number of jumps with time in (s, t] and size in A.
/// Throws InvalidInterval unless 0 <= s < t <= T.
std::size_t prmCount(const CadlagPath& path, double s, double t, const Region& A);

/// sum_{0<u<=t} phi(Delta x_u) 1_A(Delta x_u). Throws EvaluationError if phi is
/// not finite at a jump that lands in A.
Point poissonIntegral(const CadlagPath& path, const VectorFunction& phi, const Region& A, double t);
double poissonIntegralScalar(const CadlagPath& path, const ScalarFunction& phi, const Region& A, double t);

/// A jump time that may be infinite (inf of the empty set).
class StoppingTime {
public:
    static StoppingTime never() { return StoppingTime(); }
    static StoppingTime at(double t) { return StoppingTime(t); }

    bool isNever() const { return !time_.has_value(); }
    /// The finite time; throws InvalidInput on `never`.
    double time() const;
    /// The time with +inf for `never`.
    double orInfinity() const;

    friend bool operator==(const StoppingTime& a, const StoppingTime& b) { return a.time_ == b.time_; }
    friend std::partial_ordering operator<=>(const StoppingTime& a, const StoppingTime& b) {
        return a.orInfinity() <=> b.orInfinity();
    }

private:
    StoppingTime() = default;
    explicit StoppingTime(double t) : time_(t) {}
    std::optional<double> time_;
};

struct JumpTimes {
    StoppingTime tau;     ///< k-th jump with size in A
    StoppingTime tauBar;  ///< k-th jump with size in the closure of A
};

/// k-th jump times into an open region A and into its closure. Throws
/// InvalidInput if A is not open, k == 0, or 0 lies in the closure of A.
JumpTimes jumpTimes(const CadlagPath& path, const Region& A, std::size_t k);

struct Modulus {
    double wPrime = 0.0;
    double wDoublePrime = 0.0;
    /// Both values are exact for paths that are constant between events. With a
    /// nonzero continuous part, wPrime is an upper and wDoublePrime a lower bound.
    bool exact = true;
};

/// Cadlag moduli w'(delta) and w''(delta). Throws InvalidInput unless 0 < delta < T.
///
/// w' = inf over partitions 0 = t_0 < ... < t_r = T with t_i - t_{i-1} > delta of
///      max_i sup_{s,t in [t_{i-1}, t_i)} |x(s) - x(t)|
/// w'' = sup over t_1 <= t <= t_2 with t_2 - t_1 <= delta of
///      min(|x(t) - x(t_1)|, |x(t_2) - x(t)|)
Modulus cadlagModulus(const CadlagPath& path, double delta);

/// T^n: piecewise-constant path equal to x(kT/n) on [kT/n, (k+1)T/n) and x(T) at T.
CadlagPath discretizeTn(const CadlagPath& path, std::size_t n);

/// Knots (u, lambda(u)) of a piecewise-linear increasing time change; (0,0)
/// and (T,T) are implicit.
using TimeChange = std::vector<std::pair<double, double>>;

/// max(||lambda - Id||, sup_t |a(t) - b(lambda(t))|), computed exactly over the
/// merged breakpoints of a, b o lambda and lambda.
double timeChangeDistance(const CadlagPath& a, const CadlagPath& b, const TimeChange& knots);

/// Upper bound on the Skorohod distance: the best of the identity and greedy
/// large-jump alignments, tried in both directions.
double skorohodDistanceUpper(const CadlagPath& a, const CadlagPath& b);

/// Path 0 on [0, t) and x on [t, T], i.e. a single jump of size x at t.
/// Requires 0 < t < T and x in [1, 2].
CadlagPath counterexampleFamily(double t, double x, double horizon);

}  // namespace glevy
