#pragma once

#include "glevy/cadlag_path.hpp"
#include "glevy/pide.hpp"
#include "glevy/region.hpp"
#include "glevy/uncertainty.hpp"

#include <optional>
#include <string>
#include <vector>

namespace glevy {

enum class ProcessKind {
    rawJumpPart,           ///< X^d
    compensatedJumpPart,   ///< Y_t = X^d_t - t sup_v int z dv
    symmetricCompensated,  ///< Z under {(v, -int z dv, 0)}
    poissonIntegral,       ///< sum_{u <= t} phi(Delta X_u) 1_A(Delta X_u)
    continuousPart,        ///< X^c
};

std::string toString(ProcessKind kind);
/// Inverse of toString; throws InvalidInput on an unknown name.
ProcessKind processKindFromString(const std::string& name);

/// A process derived from the canonical G-Levy process with uncertainty set U.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::rawJumpPart;
    UncertaintySet U;
    /// Integrand and region, only for poissonIntegral.
    std::optional<ScalarFunction> phi;
    std::optional<Region> region;

    static ProcessSpec rawJumpPart(UncertaintySet U);
    static ProcessSpec compensatedJumpPart(UncertaintySet U);
    static ProcessSpec symmetricCompensated(UncertaintySet U);
    static ProcessSpec poissonIntegral(UncertaintySet U, ScalarFunction phi, Region A);
    static ProcessSpec continuousPart(UncertaintySet U);

    /// The set of triples under which this process is itself a G-Levy process.
    UncertaintySet uncertaintySet() const;
};

/// E[X^d_t] = t sup_v int z v(dz). For d > 1 the sup must be attained by one v in
/// every coordinate, otherwise Unsupported is thrown.
Point meanOfJumpPart(const UncertaintySet& U, double t);

/// Y_t = X^d_t - t m on the jumps of `path` (its continuous part is dropped),
/// with m = meanOfJumpPart(U, 1).
CadlagPath compensate(const CadlagPath& path, const UncertaintySet& U);
/// rawJumpPart -> compensatedJumpPart; any other kind is rejected.
ProcessSpec compensate(const ProcessSpec& spec);

/// {(v, -int z dv, 0) : v in V}.
UncertaintySet symmetricCompensatedSet(const MeasureFamily& V);

/// {v o phi^{-1}(. n A) : v in V}: images of atoms in A, zero images dropped,
/// images within 1e-12 of each other merged by adding weights.
MeasureFamily pushforwardSet(const MeasureFamily& V, const VectorFunction& phi, const Region& A);
MeasureFamily pushforwardScalar(const MeasureFamily& V, const ScalarFunction& phi, const Region& A);

/// Routes every atom of every triple into coordinate block 1 + i when it lies in
/// A_i and into block 0 otherwise; drift and covariance root go to block 0. The
/// regions must be pairwise disjoint and bounded away from 0.
UncertaintySet restrictedProductSet(const UncertaintySet& U, const std::vector<Region>& regions);

struct Decomposition {
    CadlagPath continuous;
    CadlagPath jumps;
};

/// X = X^c + X^d.
Decomposition decompose(const CadlagPath& path);

struct MartingaleReport {
    ProcessKind kind = ProcessKind::rawJumpPart;
    double s = 0.0;
    double t = 0.0;
    /// |E[M_t - M_s]|
    double maxDeviation = 0.0;
    /// |E[-(M_t - M_s)]|
    double symmetricDeviation = 0.0;
    double schemeError = 0.0;
    double tolerance = 0.0;
    bool isMartingale = false;
    bool isSymmetric = false;
};

/// Checks the G-martingale property of a process with stationary independent
/// increments: both one-sided expectations of M_t - M_s come from the integro-PDE
/// with phi(x) = +x and -x on `grid` (its T is replaced by t - s). The scheme
/// error is estimated from one refinement and tol = max(2 schemeError, 1e-3).
MartingaleReport martingaleCheck(const ProcessSpec& spec, double s, double t, const Grid1D& grid);

}  // namespace glevy
