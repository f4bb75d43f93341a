#pragma once

#include "glevy/levy_measure.hpp"
#include "glevy/region.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace glevy {

/// A Borel function on R^d_0 with caller-declared discontinuity set and support.
struct TestFunction {
    ScalarFunction eval;
    /// Where f may be discontinuous; unset means "not declared".
    std::optional<Region> discontinuities;
    std::optional<Region> support;
};

/// (sup_v sum_{z in A} |f(z)|^p w)^{1/p}. Throws InvalidInput for p < 1.
double vNorm(const TestFunction& f, const Region& A, const MeasureFamily& V, double p);

struct TightnessEntry {
    double eps = 0.0;
    /// False when the empty annulus already leaves less than eps outside.
    bool hasAnnulus = true;
    double inner = 0.0;
    double outer = 0.0;
    /// sup_v int_{outside the annulus} |f|^p dv
    double tail = 0.0;
};

/// For each eps, a closed annulus [r, R] (radii of atoms) with
/// sup_v int_{outside} |f|^p dv < eps. The annuli come from one peeling chain
/// (drop the cheaper of the innermost and outermost radius level first), so they
/// are nested: a smaller eps never gets a smaller annulus.
std::vector<TightnessEntry> tightnessProfile(const TestFunction& f, const MeasureFamily& V, double p,
                                             const std::vector<double>& eps);

struct UiEntry {
    double n = 0.0;
    /// sup_v int |f|^p 1{|f|^p >= n} dv
    double tail = 0.0;
};

std::vector<UiEntry> uniformIntegrabilityProfile(const TestFunction& f, const MeasureFamily& V, double p,
                                                 const std::vector<double>& ns);

/// eps,hasAnnulus,inner,outer,tail
void writeTightnessCsv(std::ostream& out, const std::vector<TightnessEntry>& profile);
/// n,tail
void writeIntegrabilityCsv(std::ostream& out, const std::vector<UiEntry>& profile);

struct MembershipOptions {
    std::vector<double> epsLadder{1e-1, 1e-2, 1e-3};
    std::vector<double> nLadder{1e1, 1e2, 1e3};
    double threshold = 1e-6;
};

struct MembershipVerdict {
    bool member = false;
    double norm = 0.0;
    bool normFinite = false;
    bool tight = false;
    bool uniformlyIntegrable = false;
    std::vector<TightnessEntry> tightness;
    std::vector<UiEntry> integrability;
};

/// Membership of f in the space of functions with finite V-norm that are V-tight
/// and V-uniformly integrable on A, decided on the given ladders.
MembershipVerdict membershipLpb(const TestFunction& f, const Region& A, const MeasureFamily& V, double p,
                                const MembershipOptions& options = {});

/// {(1/k) delta_k : k = 1..K}: every member has int |z| dv = 1 but the mass
/// escapes to infinity, so z -> z is not uniformly integrable over the family.
MeasureFamily escapingMassFamily(std::size_t K);

enum class QcStatus { quasiContinuous, notQuasiContinuous, inconclusive };

struct QcVerdict {
    QcStatus status = QcStatus::inconclusive;
    /// c^V(closure of D)
    double capacity = 0.0;
    std::optional<Point> witness;
    std::optional<std::size_t> witnessMeasure;
};

/// V-quasi-continuity from the declared discontinuity set D: q.c. when
/// c^V(closure D) = 0, otherwise not q.c. with a charged atom of closure(D) as
/// witness; inconclusive when D is not declared.
QcVerdict qcCriterion(const TestFunction& f, const MeasureFamily& V);

}  // namespace glevy
