#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "compsize/errors.hpp"

namespace compsize {

// Asymptotic tail annotation for a degree distribution: u(k) ~ s * k^(-beta)
// as k -> infinity. Attached by the built-in power-law family (and by file
// input); a finite materialized table cannot represent the tail itself, so
// classification consults this record instead of truncated moment sums.
struct TailSpec {
    double s = 0.0;     // coefficient of k^(-beta) in the degree law
    double beta = 0.0;  // decay exponent, > 0

    double alpha() const { return beta - 2.0; }
};

struct MomentSummary {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0;
    double theta = 0.0;  // mu2 - 2*mu1; > 0 means a giant component exists
    // Finiteness of the ideal (untruncated) moments, decided by the tail
    // exponent, never by the truncated sums: mu3 diverges iff beta <= 4,
    // mu2 iff beta <= 3, mu1 iff beta <= 2.
    bool mu1_finite = true;
    bool mu2_finite = true;
    bool mu3_finite = true;
};

// Degree probabilities u(0..k_max). Immutable after construction. For
// infinite-support families the table is materialized up to a truncation
// degree and the mass beyond it is recorded, not folded into the table, so
// sum(pmf) + truncated_tail_mass == 1 within 1e-12.
class DegreeDistribution {
public:
    static DegreeDistribution from_pmf(std::vector<double> values,
                                       std::optional<TailSpec> tail = std::nullopt,
                                       bool auto_normalize = true,
                                       std::string label = {});

    const std::vector<double>& pmf() const { return pmf_; }
    double operator()(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }
    std::size_t k_max() const { return pmf_.empty() ? 0 : pmf_.size() - 1; }
    const std::optional<TailSpec>& tail() const { return tail_; }
    const std::string& label() const { return label_; }
    // Factor the input was divided by during construction (1 if already unit mass).
    double normalization() const { return normalization_; }
    double truncated_tail_mass() const { return truncated_tail_mass_; }

    MomentSummary moments() const;

private:
    DegreeDistribution() = default;
    friend DegreeDistribution make_materialized(std::vector<double>, std::optional<TailSpec>,
                                                double, std::string);

    std::vector<double> pmf_;
    std::optional<TailSpec> tail_;
    std::string label_;
    double normalization_ = 1.0;
    double truncated_tail_mass_ = 0.0;
};

// Distribution of the remaining degree at the end of a uniformly random
// edge stub: u1(k) = (k+1) u(k+1) / mu1. Sums to exactly 1 when the parent
// table carries no truncated tail mass.
class ExcessDistribution {
public:
    explicit ExcessDistribution(const DegreeDistribution& d);

    const std::vector<double>& pmf() const { return pmf_; }
    double operator()(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }
    double mean() const { return mean_; }          // (mu2 - mu1)/mu1
    double variance() const { return variance_; }  // (mu3*mu1 - mu2^2)/mu1^2
    bool mean_finite() const { return mean_finite_; }
    bool variance_finite() const { return variance_finite_; }
    // Tail of the excess law: u1(k) ~ tail_scale * k^(-alpha-1), alpha = beta-2.
    std::optional<double> tail_scale() const { return tail_scale_; }
    std::optional<double> tail_alpha() const { return tail_alpha_; }

private:
    std::vector<double> pmf_;
    double mean_ = 0.0;
    double variance_ = 0.0;
    bool mean_finite_ = true;
    bool variance_finite_ = true;
    std::optional<double> tail_scale_;
    std::optional<double> tail_alpha_;
};

// Built-in families. Infinite-support ones are materialized up to k_trunc.
DegreeDistribution exponential_family(double lambda, std::size_t k_trunc = 200);
DegreeDistribution geometric_family(double p, std::size_t k_trunc = 600);  // support k >= 1
DegreeDistribution binomial_family(std::size_t k_max, double c);
// u(1) = C, u(k) = s*(beta-2)*k^(-beta) for 2 <= k <= k_trunc, C absorbing the
// remaining mass (including the analytic tail beyond k_trunc when beta > 2,
// which is recorded as truncated tail mass). Carries TailSpec{s*(beta-2), beta}.
DegreeDistribution powerlaw_family(double beta, double s, std::size_t k_trunc = 100000);

// Same family, but parameterized by the excess-law tail scale s1 where
// u1(k) ~ s1 * k^(-alpha-1). Conversion: s1 = s*(beta-2)/mu1, solved for the
// pmf parameter s by bisection since mu1 itself depends on s.
DegreeDistribution powerlaw_family_excess_scale(double beta, double s1,
                                                std::size_t k_trunc = 100000);

// Hard cutoff: drop all mass above k_cut and renormalize; the removed mass is
// reported and any tail annotation is dropped (the result is light-tailed).
// A distribution already supported below k_cut is returned unchanged.
DegreeDistribution apply_cutoff(const DegreeDistribution& d, std::size_t k_cut,
                                double* removed_mass = nullptr);

// Monotone calibration: find param in [lo, hi] with theta(build(param)) ==
// target to near machine precision. Requires theta to be monotone in the
// parameter and to bracket the target.
double calibrate_theta(const std::function<DegreeDistribution(double)>& build,
                       double lo, double hi, double target = 0.0);

// Expected edge-count scaling for an N-node network whose degree law decays
// like k^(-beta), and the density class it implies. Distributions with
// beta <= 2 do not admit the finite-component analysis; this report is what
// the classifier hands back instead.
enum class DensityClass { sparse, semi_dense, dense };

struct EdgeDensityReport {
    DensityClass density = DensityClass::sparse;
    double expected_edges = 0.0;
    std::string note;
};

EdgeDensityReport edge_density_class(double beta, double nodes);

const char* to_string(DensityClass c) noexcept;

} // namespace compsize
