#pragma once

#include <cstddef>
#include <vector>

#include "compsize/asymptotics.hpp"
#include "compsize/degree_model.hpp"

namespace compsize {

// w(n) for n = 1..horizon: the probability that a uniformly random node
// belongs to a finite connected component of exactly n nodes. Entry 0 is
// unused. finite_mass is the sum of w over the computed range;
// tail_correction estimates the mass sitting past the horizon (from the
// fitted asymptote; 0 when no usable asymptote exists), and
// giant_fraction_estimate = 1 - finite_mass - tail_correction clamped to
// [0, 1]. Without a giant component the full sum over all n is 1.
struct ComponentSizeResult {
    std::vector<double> w;
    std::vector<double> log_w;
    double theta = 0.0;
    double finite_mass = 0.0;
    double tail_correction = 0.0;
    double giant_fraction_estimate = 0.0;
    MomentSummary moments;
};

// The size law itself: w(1) = u(0) and, for n >= 2,
//   w(n) = mu1 / (n-1) * u1^{*n}(n-2),
// the n-fold convolution of the excess law read on its moving diagonal.
// log_w stays meaningful far beyond the point where w underflows.
ComponentSizeResult component_sizes(const DegreeDistribution& u, std::size_t horizon);

// Identical quantity by the other route,
//   w(n) = [k u(k)]^{*n}(2n-2) / ((n-1) mu1^{n-1}),
// convolving the size-biased degree law instead. About 4x the work of
// component_sizes; kept as an independent cross-check of the main path.
ComponentSizeResult component_sizes_size_biased(const DegreeDistribution& u,
                                                std::size_t horizon);

// Closed forms for the built-in families, evaluated in log space.
// Exponential family u(k) = (1 - e^-lambda) e^(-lambda k), k >= 0:
//   w(n) = (1-e^-lambda)^(2n-1) e^(-lambda(n-1)) Gamma(3n-2)/(Gamma(n) Gamma(2n))
std::vector<double> closed_form_exponential(double lambda, std::size_t horizon);

// Geometric family u(k) = p (1-p)^(k-1), k >= 1 (so w(1) = 0):
//   w(n) = (1-p)^(n-2) p^(2n-1) Gamma(3n-2)/(Gamma(n) Gamma(2n)),  n >= 2
std::vector<double> closed_form_geometric(double p, std::size_t horizon);

// Binomial family u(k) = C(k_max, k) c^k (1-c)^(k_max-k). Two variants:
// `derived` is the form this project validates against the convolution route,
//   w(n) = (c k_max/(n-1)) C(n(k_max-1), n-2) c^(n-2) (1-c)^(n k_max - 2n + 2),
// built from the fact that the excess law is Binomial(k_max-1, c) so its
// n-fold power is Binomial(n(k_max-1), c). `as_printed` is a circulating
// variant, (1/(n-1)) C(n k_max - n, n-2) (1-c)^(n k_max - 2n - 2) c^(n-2),
// kept selectable because it is demonstrably wrong (already at n = 2,
// k_max = 2 it gives (1-c)^-2 where the true value is 2c(1-c)^2).
enum class BinomialForm { derived, as_printed };
std::vector<double> closed_form_binomial(std::size_t k_max, double c, std::size_t horizon,
                                         BinomialForm form = BinomialForm::derived);

// Mass of components beyond the computed horizon, predicted by the fitted
// asymptote. Forwards to asymptote_tail_mass.
double estimate_tail(const AsymptoteModel& m, double from);

// Fraction of nodes in the giant component:
//   1 - sum_{n<=horizon} w(n) - tail, clamped to [0, 1],
// where the tail is integrated from the supplied asymptote. Unlike the
// best-effort giant_fraction_estimate stored on ComponentSizeResult, this
// propagates not_converged when the tail sum fails to settle.
double giant_fraction(const ComponentSizeResult& r, const AsymptoteModel& asym);
double giant_fraction(const DegreeDistribution& u, std::size_t horizon,
                      const AsymptoteModel& asym);

} // namespace compsize
