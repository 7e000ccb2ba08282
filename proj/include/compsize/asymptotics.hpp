#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compsize/degree_model.hpp"
#include "compsize/numeric.hpp"

namespace compsize {

// Large-n regime of the component size law, determined by the degree tail.
// The letter is the stable row id used in reports; what it means:
//   A  light tail (no power-law annotation), all moments finite
//   B  tail exponent beta > 4: excess law has finite variance
//   C  beta == 4: variance marginally divergent (log corrections)
//   D  3 < beta < 4: excess variance infinite, mean finite
//   E  beta == 3: excess mean marginally divergent
//   F  2 < beta < 3: excess mean infinite
enum class CaseId { A, B, C, D, E, F };

// Sign of theta = mu2 - 2*mu1. Zero means |theta| <= 1e-9 * mu1. When mu2
// diverges (beta <= 3) the branch is always positive.
enum class ThetaBranch { negative, zero, positive };

const char* to_string(CaseId c) noexcept;
const char* to_string(ThetaBranch b) noexcept;

// One row of the asymptote catalogue, fully evaluated for a concrete
// distribution: the regime, the branch, and the numeric constants of the
// matching decay law. eval(n) is the predicted w(n) for large n.
struct AsymptoteModel {
    CaseId case_id = CaseId::A;
    ThetaBranch branch = ThetaBranch::zero;
    // Named constants of the decay law ("C1", "C2", ... as applicable).
    std::map<std::string, double> constants;
    double alpha = 0.0;  // excess tail index (beta - 2); 0 when light-tailed
    double s = 0.0;      // excess tail scale, u1(k) ~ s * k^(-alpha-1)
    MomentSummary moments;

    double log_eval(double n) const;
    double eval(double n) const { return std::exp(log_eval(n)); }
};

// Classify from the moment summary plus the tail annotation (present iff the
// distribution carries a power-law tail; its scale is in degree convention,
// u(k) ~ s k^-beta, and is divided by mu1 internally to get the excess
// scale). Only the constants of the selected row and branch are computed.
// Throws unclassifiable when beta <= 2 (the finite-component picture breaks
// down; see edge_density_class for what to report instead) and
// missing_parameter when a needed tail scale is absent or non-positive.
AsymptoteModel classify(const MomentSummary& m, const std::optional<TailSpec>& tail);

// Same, reading moments and tail off the distribution.
AsymptoteModel classify(const DegreeDistribution& u);

// Just the constants of the classified asymptote.
std::map<std::string, double> asymptote_constants(const MomentSummary& m,
                                                  const std::optional<TailSpec>& tail);
std::map<std::string, double> asymptote_constants(const DegreeDistribution& u);

// Asymptote for a light-tailed distribution given its moments alone:
//   theta != 0:  C1 * exp(-C2 n) * n^(-3/2)
//   theta == 0:  C1 * n^(-3/2)
// with C1 = mu1^2 / sqrt(2 pi (mu1 mu3 - mu2^2)) and
// C2 = (mu2 - 2 mu1)^2 / (2 (mu1 mu3 - mu2^2)).
AsymptoteModel light_tail_asymptote(const MomentSummary& m);

// Centering and width of the n-step sum of the excess law when its tail has
// index alpha (one-sided stable scaling):
//   mu(n):    n (mu2 - mu1) / mu1        (alpha > 1)
//             s * n * ln n               (alpha == 1)
//             0                          (alpha < 1)
//   gamma(n): sqrt(s n ln n)                                  (alpha == 2)
//             sqrt(pi s) (2 Gamma(alpha) sin(alpha pi/2))^(-1/alpha) n^(1/alpha)
//                                                             (0<alpha<2, !=1)
//             pi n s / 2                                      (alpha == 1)
struct StableParams {
    double mu = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;
};
StableParams stable_params(double alpha, double s, const MomentSummary& m, double n);

// Leading behaviour of the standardized extremally skewed stable density in
// the limit that each branch of the catalogue probes. x is measured in units
// of gamma(n) around mu(n).
enum class StableRegime {
    at_zero,       // density at the origin, alpha in (1, 2]
    to_plus_inf,   // right tail, alpha in (1, 2)
    to_minus_inf,  // short (left) tail, alpha in (1, 2); pass x < 0
    zero_plus,     // short tail at 0+, alpha in (0, 1)
    alpha_one,     // alpha == 1 profile
};
double stable_leading(double x, double alpha, StableRegime regime);

// Pre-asymptotic power law that dominates w(n) over a wide middle range when
// the excess mean is infinite or marginally so (alpha <= 1, supercritical,
// small excess tail scale s):
//   alpha == 1:   mu1 s / (s ln n - 1)^2 * n^-2
//   alpha <  1:   mu1 s alpha * n^(-alpha-1)
// Throws out_of_domain for alpha > 1 and invalid_parameter for s <= 0.
// The log form stays finite where the linear value underflows (tiny s).
double intermediate_asymptote(double alpha, double s, double mu1, double n);
double intermediate_log_asymptote(double alpha, double s, double mu1, double n);
// Where the transient hands over to the final sub-exponential decay. For
// alpha == 1 this is exactly e^(1/s) (the centering of the stable window
// changes sign there). For alpha < 1 the two curves are compared on a log
// grid and the crossing refined by bisection; when their amplitudes never
// intersect the handover is set by the decay scale of the final form (the
// reciprocal of its exponential rate).
double intermediate_switch_point(double alpha, double s, double mu1);

// Decay exponent eta in w(n) ~ n^(-eta) for a degree tail k^(-beta):
//   theta < 0: eta = beta - 1        (beta > 3)
//   theta = 0: eta = 3/2             (beta >= 4)
//              eta = (beta-1)/(beta-2)  (3 <= beta < 4)
// nullopt on the positive branch: a giant component forces faster than
// power-law decay. Throws out_of_domain when the requested branch does not
// exist for that beta (negative needs beta > 3, zero needs beta >= 3).
std::optional<double> eta_exponent(double beta, ThetaBranch branch);

// Sum of the asymptote over n > from (the predicted mass of components the
// finite computation never reached). Exponential branches sum directly when
// the rate is >= 1e-3 and switch to an erfc closed form plus Euler-Maclaurin
// boundary terms below that; pure powers use the power-sum formula; branches
// with no closed form sum termwise and throw not_converged if 1e7 terms do
// not reach a 1e-12 relative tail.
double asymptote_tail_mass(const AsymptoteModel& m, double from);

// Slope of log w against log n over integer window [lo, hi], for checking
// decay exponents. Entries with log_w == -inf are skipped. log_w is indexed
// by n (entry 0 unused).
LinearFit fit_window_slope(const std::vector<double>& log_w, std::size_t lo, std::size_t hi);

} // namespace compsize
