#include "compsize/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "compsize/numeric.hpp"

namespace compsize {

namespace {

void check_finite_nonneg(const std::vector<double>& v) {
    for (double p : v) {
        if (!std::isfinite(p)) raise(errc::invalid_parameter, "non-finite probability");
        if (p < 0.0) raise(errc::negative_mass, "negative probability");
    }
}

void trim_trailing_zeros(std::vector<double>& v) {
    while (v.size() > 1 && v.back() == 0.0) v.pop_back();
}

std::string format_param(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

DegreeDistribution make_materialized(std::vector<double> pmf, std::optional<TailSpec> tail,
                                     double truncated_tail_mass, std::string label) {
    DegreeDistribution d;
    trim_trailing_zeros(pmf);
    d.pmf_ = std::move(pmf);
    d.tail_ = std::move(tail);
    d.truncated_tail_mass_ = truncated_tail_mass;
    d.label_ = std::move(label);
    return d;
}

DegreeDistribution DegreeDistribution::from_pmf(std::vector<double> values,
                                                std::optional<TailSpec> tail,
                                                bool auto_normalize, std::string label) {
    if (values.empty()) raise(errc::empty_distribution, "no probabilities given");
    check_finite_nonneg(values);
    double sum = 0.0;
    for (double p : values) sum += p;
    if (sum <= 0.0) raise(errc::empty_distribution, "all probabilities are zero");
    double normalization = 1.0;
    if (auto_normalize) {
        for (double& p : values) p /= sum;
        normalization = sum;
    } else if (std::fabs(sum - 1.0) > 1e-12) {
        raise(errc::not_normalized,
              "mass is " + format_param(sum) + " but normalization was disabled");
    }
    if (tail) {
        if (!(tail->s > 0.0) || !std::isfinite(tail->s) || !(tail->beta > 0.0) ||
            !std::isfinite(tail->beta))
            raise(errc::invalid_parameter, "tail annotation needs s > 0 and beta > 0");
    }
    DegreeDistribution d = make_materialized(std::move(values), std::move(tail), 0.0,
                                             std::move(label));
    d.normalization_ = normalization;
    return d;
}

MomentSummary DegreeDistribution::moments() const {
    // Sums run over the stored table only; the finiteness flags speak for the
    // ideal tail the table stands in for.
    MomentSummary m;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
        const double kp = double(k) * pmf_[k];
        m.mu1 += kp;
        m.mu2 += kp * double(k);
        m.mu3 += kp * double(k) * double(k);
    }
    m.theta = m.mu2 - 2.0 * m.mu1;
    if (tail_) {
        m.mu3_finite = tail_->beta > 4.0;
        m.mu2_finite = tail_->beta > 3.0;
        m.mu1_finite = tail_->beta > 2.0;
    }
    return m;
}

ExcessDistribution::ExcessDistribution(const DegreeDistribution& d) {
    const MomentSummary m = d.moments();
    if (m.mu1 <= 0.0) raise(errc::zero_mean_degree, "excess law undefined when mu1 == 0");
    const std::vector<double>& u = d.pmf();
    if (u.size() > 1) {
        pmf_.resize(u.size() - 1);
        for (std::size_t k = 0; k + 1 < u.size(); ++k)
            pmf_[k] = double(k + 1) * u[k + 1] / m.mu1;
    } else {
        pmf_.assign(1, 0.0);
    }
    mean_ = (m.mu2 - m.mu1) / m.mu1;
    variance_ = (m.mu3 * m.mu1 - m.mu2 * m.mu2) / (m.mu1 * m.mu1);
    mean_finite_ = m.mu2_finite;
    variance_finite_ = m.mu3_finite;
    if (d.tail()) {
        tail_scale_ = d.tail()->s / m.mu1;
        tail_alpha_ = d.tail()->alpha();
    }
}

DegreeDistribution exponential_family(double lambda, std::size_t k_trunc) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        raise(errc::invalid_parameter, "exponential family needs lambda > 0");
    if (k_trunc < 1) raise(errc::invalid_parameter, "k_trunc must be >= 1");
    const double q = std::exp(-lambda);
    std::vector<double> pmf(k_trunc + 1);
    double v = 1.0 - q;
    for (std::size_t k = 0; k <= k_trunc; ++k) {
        pmf[k] = v;
        v *= q;
    }
    // Geometric remainder beyond the table: q^(k_trunc+1).
    const double tail_mass = std::exp(-lambda * double(k_trunc + 1));
    return make_materialized(std::move(pmf), std::nullopt, tail_mass,
                             "exponential(lambda=" + format_param(lambda) + ")");
}

DegreeDistribution geometric_family(double p, std::size_t k_trunc) {
    if (!(p > 0.0) || !(p < 1.0)) raise(errc::invalid_parameter, "geometric family needs 0 < p < 1");
    if (k_trunc < 1) raise(errc::invalid_parameter, "k_trunc must be >= 1");
    std::vector<double> pmf(k_trunc + 1, 0.0);
    double v = p;
    for (std::size_t k = 1; k <= k_trunc; ++k) {
        pmf[k] = v;
        v *= 1.0 - p;
    }
    const double tail_mass = std::pow(1.0 - p, double(k_trunc));
    return make_materialized(std::move(pmf), std::nullopt, tail_mass,
                             "geometric(p=" + format_param(p) + ")");
}

DegreeDistribution binomial_family(std::size_t k_max, double c) {
    if (k_max < 1) raise(errc::invalid_parameter, "binomial family needs k_max >= 1");
    if (!(c > 0.0) || !(c < 1.0)) raise(errc::invalid_parameter, "binomial family needs 0 < c < 1");
    std::vector<double> pmf(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double lg = std::lgamma(double(k_max + 1)) - std::lgamma(double(k + 1)) -
                          std::lgamma(double(k_max - k + 1));
        pmf[k] = std::exp(lg + double(k) * std::log(c) + double(k_max - k) * std::log1p(-c));
    }
    return make_materialized(std::move(pmf), std::nullopt, 0.0,
                             "binomial(k_max=" + format_param(double(k_max)) +
                                 ",c=" + format_param(c) + ")");
}

DegreeDistribution powerlaw_family(double beta, double s, std::size_t k_trunc) {
    if (!(beta > 2.0) || !std::isfinite(beta))
        raise(errc::invalid_parameter, "power-law family needs beta > 2");
    if (!(s > 0.0) || !std::isfinite(s)) raise(errc::invalid_parameter, "power-law family needs s > 0");
    if (k_trunc < 2) raise(errc::invalid_parameter, "k_trunc must be >= 2");
    const double coeff = s * (beta - 2.0);
    std::vector<double> pmf(k_trunc + 1, 0.0);
    double body = 0.0;
    for (std::size_t k = 2; k <= k_trunc; ++k) {
        pmf[k] = coeff * std::pow(double(k), -beta);
        body += pmf[k];
    }
    const double tail_mass = coeff * power_tail_sum(beta, double(k_trunc + 1));
    const double u1 = 1.0 - body - tail_mass;
    if (u1 < 0.0)
        raise(errc::normalization_impossible,
              "s = " + format_param(s) + " leaves u(1) = " + format_param(u1) +
                  "; largest admissible s is " + format_param(s / (body + tail_mass)));
    pmf[1] = u1;
    return make_materialized(std::move(pmf), TailSpec{coeff, beta}, tail_mass,
                             "powerlaw(beta=" + format_param(beta) + ",s=" + format_param(s) +
                                 ")");
}

DegreeDistribution powerlaw_family_excess_scale(double beta, double s1, std::size_t k_trunc) {
    if (!(beta > 2.0) || !std::isfinite(beta))
        raise(errc::invalid_parameter, "power-law family needs beta > 2");
    if (!(s1 > 0.0) || !std::isfinite(s1)) raise(errc::invalid_parameter, "needs s1 > 0");
    // Find the largest admissible pmf scale, then bisect on the monotone map
    // s -> s*(beta-2)/mu1(s).
    double sum_pow = power_tail_sum(beta, 2.0);  // sum_{k>=2} k^-beta
    const double s_max = 1.0 / ((beta - 2.0) * sum_pow);
    auto excess_scale = [&](double s) {
        const DegreeDistribution d = powerlaw_family(beta, s, k_trunc);
        return d.tail()->s / d.moments().mu1;
    };
    const double top = excess_scale(s_max * (1.0 - 1e-12));
    if (s1 >= top)
        raise(errc::normalization_impossible,
              "excess tail scale " + format_param(s1) + " unreachable; maximum is " +
                  format_param(top));
    const double s = bisect_root([&](double x) { return excess_scale(x) - s1; },
                                 s_max * 1e-15, s_max * (1.0 - 1e-12));
    DegreeDistribution d = powerlaw_family(beta, s, k_trunc);
    return d;
}

DegreeDistribution apply_cutoff(const DegreeDistribution& d, std::size_t k_cut,
                                double* removed_mass) {
    if (k_cut < 1) raise(errc::invalid_parameter, "cutoff degree must be >= 1");
    if (d.k_max() <= k_cut && d.truncated_tail_mass() == 0.0) {
        if (removed_mass) *removed_mass = 0.0;
        return d;
    }
    const std::vector<double>& u = d.pmf();
    std::vector<double> kept(u.begin(), u.begin() + std::min(u.size(), k_cut + 1));
    double kept_sum = 0.0;
    for (double p : kept) kept_sum += p;
    if (kept_sum <= 0.0) raise(errc::all_mass_removed, "cutoff removed the whole distribution");
    double removed = d.truncated_tail_mass();
    for (std::size_t k = k_cut + 1; k < u.size(); ++k) removed += u[k];
    if (removed_mass) *removed_mass = removed;
    for (double& p : kept) p /= kept_sum;
    return make_materialized(std::move(kept), std::nullopt, 0.0, d.label());
}

double calibrate_theta(const std::function<DegreeDistribution(double)>& build, double lo,
                       double hi, double target) {
    return bisect_root(
        [&](double x) { return build(x).moments().theta - target; }, lo, hi);
}

EdgeDensityReport edge_density_class(double beta, double nodes) {
    if (!(nodes > 1.0)) raise(errc::invalid_parameter, "need nodes > 1");
    EdgeDensityReport r;
    if (beta == 2.0) {
        r.expected_edges = nodes * std::log(nodes);
        r.note = "edge count scales like N log N";
    } else {
        // |1 - N^(2-beta)| keeps the count positive on both sides of beta = 2;
        // below 2 it grows like N^(3-beta).
        r.expected_edges = nodes * std::fabs(1.0 - std::pow(nodes, 2.0 - beta));
        if (beta > 2.0)
            r.note = "edge count scales like N";
        else
            r.note = "edge count scales like N^(3-beta)";
    }
    if (beta > 2.0)
        r.density = DensityClass::sparse;
    else if (beta > 1.0)
        r.density = DensityClass::semi_dense;
    else
        r.density = DensityClass::dense;
    return r;
}

const char* to_string(DensityClass c) noexcept {
    switch (c) {
        case DensityClass::sparse: return "sparse";
        case DensityClass::semi_dense: return "semi_dense";
        case DensityClass::dense: return "dense";
    }
    return "?";
}

} // namespace compsize
