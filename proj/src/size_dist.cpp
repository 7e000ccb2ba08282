#include "compsize/size_dist.hpp"

#include <algorithm>
#include <cmath>

#include "compsize/conv_engine.hpp"
#include "compsize/errors.hpp"

namespace compsize {

namespace {

void attach_tail_estimate(ComponentSizeResult& r, const DegreeDistribution& u,
                          std::size_t horizon) {
    double mass = 0.0;
    for (std::size_t n = 1; n < r.w.size(); ++n) mass += r.w[n];
    r.finite_mass = mass;
    r.tail_correction = 0.0;
    try {
        r.tail_correction = asymptote_tail_mass(classify(u), double(horizon));
    } catch (const Error&) {
        // No usable decay law (degenerate moments, unclassifiable tail, or a
        // sum that would not settle): leave the correction at zero.
    }
    r.giant_fraction_estimate =
        std::clamp(1.0 - r.finite_mass - r.tail_correction, 0.0, 1.0);
}

// Both evaluation routes share everything but the diagonal they read.
ComponentSizeResult sizes_from_diagonal(const DegreeDistribution& u, std::size_t horizon,
                                        bool size_biased) {
    if (horizon < 1) raise(errc::invalid_parameter, "horizon must be >= 1");
    ComponentSizeResult r;
    r.moments = u.moments();
    r.theta = r.moments.theta;
    r.w.assign(horizon + 1, 0.0);
    r.log_w.assign(horizon + 1, neg_inf);
    r.w[1] = u(0);
    r.log_w[1] = std::log(r.w[1]);
    const double mu1 = r.moments.mu1;
    if (mu1 == 0.0) {
        // Every node has degree zero: the network is isolated vertices.
        r.finite_mass = r.w[1];
        r.giant_fraction_estimate = std::clamp(1.0 - r.finite_mass, 0.0, 1.0);
        return r;
    }
    if (horizon >= 2) {
        DiagonalResult diag;
        if (size_biased) {
            std::vector<double> biased(u.pmf().size());
            for (std::size_t k = 0; k < biased.size(); ++k)
                biased[k] = double(k) * u.pmf()[k] / mu1;
            diag = diagonal_powers(biased, horizon, -2, 2);
        } else {
            diag = diagonal_powers(ExcessDistribution(u).pmf(), horizon, -2, 1);
        }
        const double log_mu1 = std::log(mu1);
        for (std::size_t n = 2; n <= horizon; ++n) {
            const double lw = log_mu1 - std::log(double(n - 1)) + diag.log_d[n];
            r.log_w[n] = lw;
            r.w[n] = std::exp(lw);
        }
    }
    attach_tail_estimate(r, u, horizon);
    return r;
}

double lchoose(double a, double b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

} // namespace

ComponentSizeResult component_sizes(const DegreeDistribution& u, std::size_t horizon) {
    return sizes_from_diagonal(u, horizon, false);
}

ComponentSizeResult component_sizes_size_biased(const DegreeDistribution& u,
                                                std::size_t horizon) {
    // w(n) = [k u(k)]^{*n}(2n-2) / ((n-1) mu1^{n-1}); with the kernel
    // normalized to k u(k)/mu1 the mu1 powers collapse to the same mu1/(n-1)
    // prefactor as the primary route.
    return sizes_from_diagonal(u, horizon, true);
}

std::vector<double> closed_form_exponential(double lambda, std::size_t horizon) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        raise(errc::invalid_parameter, "exponential closed form needs lambda > 0");
    std::vector<double> w(horizon + 1, 0.0);
    const double log_c = std::log1p(-std::exp(-lambda));
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double dn = double(n);
        w[n] = std::exp((2.0 * dn - 1.0) * log_c - lambda * (dn - 1.0) +
                        std::lgamma(3.0 * dn - 2.0) - std::lgamma(dn) -
                        std::lgamma(2.0 * dn));
    }
    return w;
}

std::vector<double> closed_form_geometric(double p, std::size_t horizon) {
    if (!(p > 0.0) || !(p < 1.0))
        raise(errc::invalid_parameter, "geometric closed form needs 0 < p < 1");
    std::vector<double> w(horizon + 1, 0.0);
    // w(1) = u(0) = 0: the support starts at degree 1.
    for (std::size_t n = 2; n <= horizon; ++n) {
        const double dn = double(n);
        w[n] = std::exp((dn - 2.0) * std::log1p(-p) + (2.0 * dn - 1.0) * std::log(p) +
                        std::lgamma(3.0 * dn - 2.0) - std::lgamma(dn) -
                        std::lgamma(2.0 * dn));
    }
    return w;
}

std::vector<double> closed_form_binomial(std::size_t k_max, double c, std::size_t horizon,
                                         BinomialForm form) {
    if (k_max < 1) raise(errc::invalid_parameter, "binomial closed form needs k_max >= 1");
    if (!(c > 0.0) || !(c < 1.0))
        raise(errc::invalid_parameter, "binomial closed form needs 0 < c < 1");
    std::vector<double> w(horizon + 1, 0.0);
    const double km = double(k_max);
    if (horizon >= 1) w[1] = std::exp(km * std::log1p(-c));
    for (std::size_t n = 2; n <= horizon; ++n) {
        const double dn = double(n);
        const double picks = dn - 2.0;
        const double pool = dn * (km - 1.0);
        if (pool < picks) continue;  // k_max = 1: nothing beyond dimers
        if (form == BinomialForm::derived) {
            w[n] = std::exp(std::log(c * km) - std::log(dn - 1.0) + lchoose(pool, picks) +
                            picks * std::log(c) +
                            (dn * km - 2.0 * dn + 2.0) * std::log1p(-c));
        } else {
            w[n] = std::exp(-std::log(dn - 1.0) + lchoose(pool, picks) +
                            picks * std::log(c) +
                            (dn * km - 2.0 * dn - 2.0) * std::log1p(-c));
        }
    }
    return w;
}

double estimate_tail(const AsymptoteModel& m, double from) {
    return asymptote_tail_mass(m, from);
}

double giant_fraction(const ComponentSizeResult& r, const AsymptoteModel& asym) {
    const double horizon = double(r.w.size() - 1);
    const double tail = asymptote_tail_mass(asym, horizon);
    return std::clamp(1.0 - r.finite_mass - tail, 0.0, 1.0);
}

double giant_fraction(const DegreeDistribution& u, std::size_t horizon,
                      const AsymptoteModel& asym) {
    return giant_fraction(component_sizes(u, horizon), asym);
}

} // namespace compsize
