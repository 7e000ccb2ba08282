#include "compsize/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "compsize/errors.hpp"

namespace compsize {

namespace {

constexpr double kPi = std::numbers::pi;

// mu1*mu3 - mu2^2 = mu1^2 * Var(u1). Zero exactly when every node has the
// same degree.
double moment_spread(const MomentSummary& m) {
    const double v = m.mu1 * m.mu3 - m.mu2 * m.mu2;
    if (!(v > 0.0))
        raise(errc::degenerate_variance,
              "mu1*mu3 - mu2^2 = " + std::to_string(v) + "; deterministic degrees");
    return v;
}

ThetaBranch branch_from_theta(const MomentSummary& m) {
    if (!m.mu2_finite) return ThetaBranch::positive;
    if (std::fabs(m.theta) <= 1e-9 * m.mu1) return ThetaBranch::zero;
    return m.theta < 0.0 ? ThetaBranch::negative : ThetaBranch::positive;
}

double require_scale(double s) {
    if (!(s > 0.0) || !std::isfinite(s))
        raise(errc::missing_parameter, "this regime needs a positive tail scale s");
    return s;
}

// Shared building block of the heavy-tail constants.
double tail_kernel(double alpha, double s) {
    return std::tgamma(alpha) * std::sin(kPi * alpha / 2.0) / s;
}

} // namespace

const char* to_string(CaseId c) noexcept {
    switch (c) {
        case CaseId::A: return "A";
        case CaseId::B: return "B";
        case CaseId::C: return "C";
        case CaseId::D: return "D";
        case CaseId::E: return "E";
        case CaseId::F: return "F";
    }
    return "?";
}

const char* to_string(ThetaBranch b) noexcept {
    switch (b) {
        case ThetaBranch::negative: return "negative";
        case ThetaBranch::zero: return "zero";
        case ThetaBranch::positive: return "positive";
    }
    return "?";
}

double AsymptoteModel::log_eval(double n) const {
    const double ln_n = std::log(n);
    auto c = [this](const char* key) { return constants.at(key); };
    switch (case_id) {
        case CaseId::A:
            if (branch == ThetaBranch::zero) return std::log(c("C1")) - 1.5 * ln_n;
            return std::log(c("C1")) - c("C2") * n - 1.5 * ln_n;
        case CaseId::B:
            if (branch == ThetaBranch::negative)
                return std::log(c("C3")) - (alpha + 1.0) * ln_n;
            if (branch == ThetaBranch::zero) return std::log(c("C1")) - 1.5 * ln_n;
            return std::log(c("C1")) - c("C2") * n - 1.5 * ln_n;
        case CaseId::C:
            if (branch == ThetaBranch::negative)
                return std::log(c("C3")) - (alpha + 1.0) * ln_n;
            if (branch == ThetaBranch::zero)
                return std::log(c("C1p")) - 1.5 * ln_n - 0.5 * std::log(ln_n);
            return std::log(c("C1p")) - 1.5 * ln_n - 0.5 * std::log(ln_n) -
                   c("C2p") * n / ln_n;
        case CaseId::D:
            if (branch == ThetaBranch::negative)
                return std::log(c("C3")) - (alpha + 1.0) * ln_n;
            if (branch == ThetaBranch::zero)
                return std::log(c("C4")) - (1.0 + 1.0 / alpha) * ln_n;
            return std::log(c("C5")) - c("C6") * n - 1.5 * ln_n;
        case CaseId::E:
            return std::log(c("C7")) - c("C8") - c("C9") * std::pow(n, 2.0 / kPi) +
                   (1.0 / kPi - 2.0) * ln_n;
        case CaseId::F:
            return std::log(c("C10")) - c("C11") * n - 1.5 * ln_n;
    }
    raise(errc::invalid_parameter, "unhandled asymptote row");
}

AsymptoteModel classify(const MomentSummary& m, const std::optional<TailSpec>& tail) {
    AsymptoteModel model;
    model.moments = m;

    if (!tail) {
        model.case_id = CaseId::A;
        model.branch = branch_from_theta(m);
        const double v = moment_spread(m);
        model.constants["C1"] = m.mu1 * m.mu1 / std::sqrt(2.0 * kPi * v);
        if (model.branch != ThetaBranch::zero)
            model.constants["C2"] = m.theta * m.theta / (2.0 * v);
        return model;
    }

    const double beta = tail->beta;
    if (beta <= 1.0)
        raise(errc::unclassifiable,
              "mean degree diverges for beta <= 1: the network is almost surely one "
              "connected piece, finite components vanish");
    if (beta <= 2.0)
        raise(errc::unclassifiable,
              "excess mean diverges for beta <= 2: finite components exist but their "
              "sizes follow no power law");

    if (!(m.mu1 > 0.0)) raise(errc::invalid_parameter, "need mu1 > 0");
    const double alpha = beta - 2.0;
    model.alpha = alpha;
    // Constants are written for the excess law u1(k) ~ s k^(-alpha-1); the
    // stored annotation scales the degree law, hence the mu1 division.
    const double s = require_scale(tail->s) / m.mu1;
    model.s = s;
    model.branch = beta <= 3.0 ? ThetaBranch::positive : branch_from_theta(m);

    if (beta > 4.0)
        model.case_id = CaseId::B;
    else if (beta == 4.0)
        model.case_id = CaseId::C;
    else if (beta > 3.0)
        model.case_id = CaseId::D;
    else if (beta == 3.0)
        model.case_id = CaseId::E;
    else
        model.case_id = CaseId::F;

    auto& cst = model.constants;
    switch (model.case_id) {
        case CaseId::A:
            break;
        case CaseId::B:
            if (model.branch == ThetaBranch::negative) {
                cst["C3"] = s * alpha * std::pow(m.mu1, alpha + 2.0) /
                            std::pow(-m.theta, alpha + 1.0);
            } else {
                const double v = moment_spread(m);
                cst["C1"] = m.mu1 * m.mu1 / std::sqrt(2.0 * kPi * v);
                if (model.branch == ThetaBranch::positive)
                    cst["C2"] = m.theta * m.theta / (2.0 * v);
            }
            break;
        case CaseId::C:
            if (model.branch == ThetaBranch::negative) {
                cst["C3"] = s * alpha * std::pow(m.mu1, alpha + 2.0) /
                            std::pow(-m.theta, alpha + 1.0);
            } else {
                cst["C1p"] = m.mu1 / std::sqrt(2.0 * kPi * s);
                if (model.branch == ThetaBranch::positive)
                    cst["C2p"] = m.theta * m.theta / (2.0 * s * m.mu1 * m.mu1);
            }
            break;
        case CaseId::D:
            if (model.branch == ThetaBranch::negative) {
                cst["C3"] = s * alpha * std::pow(m.mu1, alpha + 2.0) /
                            std::pow(-m.theta, alpha + 1.0);
            } else if (model.branch == ThetaBranch::zero) {
                cst["C4"] = m.mu1 * std::tgamma(1.0 + 1.0 / alpha) * std::sin(kPi / alpha) *
                            std::pow(2.0 * tail_kernel(alpha, s) / std::pow(kPi, alpha + 1.0),
                                     1.0 / alpha);
            } else {
                const double excess = m.mu2 / m.mu1 - 2.0;
                cst["C5"] = m.mu1 / std::sqrt(alpha - 1.0) *
                            std::pow(std::pow(2.0 * excess, 2.0 - alpha) *
                                         tail_kernel(alpha, s) /
                                         (alpha * std::pow(kPi, alpha)),
                                     1.0 / (2.0 * alpha - 2.0));
                // Positive by necessity: this is a decay rate. The same
                // expression with prefactor (1 - alpha) would be negative on
                // 1 < alpha < 2.
                cst["C6"] = (alpha - 1.0) *
                            std::pow(2.0 * std::pow(excess, alpha) * tail_kernel(alpha, s) /
                                         (std::pow(alpha, alpha) * kPi),
                                     1.0 / (alpha - 1.0));
            }
            break;
        case CaseId::E:
            cst["C7"] = std::sqrt(2.0) * m.mu1 / (std::pow(kPi, 1.5) * s);
            cst["C8"] = 1.0 / (kPi * s) + 0.5;
            cst["C9"] = std::exp(-1.0 - 2.0 / (kPi * s));
            break;
        case CaseId::F:
            cst["C10"] = m.mu1 / std::sqrt(2.0 - 2.0 * alpha) *
                         std::pow(std::sqrt(2.0) * tail_kernel(alpha, s) /
                                      (alpha * std::pow(kPi, alpha)),
                                  1.0 / (2.0 * alpha - 2.0));
            cst["C11"] = (1.0 - alpha) *
                         std::pow(std::sqrt(2.0) * tail_kernel(alpha, s) /
                                      (kPi * std::pow(alpha, alpha)),
                                  1.0 / (alpha - 1.0));
            break;
    }
    return model;
}

AsymptoteModel classify(const DegreeDistribution& u) {
    return classify(u.moments(), u.tail());
}

std::map<std::string, double> asymptote_constants(const MomentSummary& m,
                                                  const std::optional<TailSpec>& tail) {
    return classify(m, tail).constants;
}

std::map<std::string, double> asymptote_constants(const DegreeDistribution& u) {
    return classify(u).constants;
}

AsymptoteModel light_tail_asymptote(const MomentSummary& m) {
    return classify(m, std::nullopt);
}

StableParams stable_params(double alpha, double s, const MomentSummary& m, double n) {
    if (!(alpha > 0.0) || !(alpha <= 2.0) || !std::isfinite(alpha))
        raise(errc::invalid_alpha, "stable scaling is defined for 0 < alpha <= 2");
    if (!(n >= 2.0)) raise(errc::invalid_parameter, "need n >= 2");
    if (!(s > 0.0) || !std::isfinite(s))
        raise(errc::invalid_parameter, "tail scale s must be positive");
    StableParams p;
    p.alpha = alpha;
    if (alpha > 1.0) {
        if (!(m.mu1 > 0.0)) raise(errc::invalid_parameter, "need mu1 > 0 for the centering");
        p.mu = n * (m.mu2 - m.mu1) / m.mu1;
    } else if (alpha == 1.0) {
        p.mu = s * n * std::log(n);
    } else {
        p.mu = 0.0;
    }
    if (alpha == 2.0)
        p.gamma = std::sqrt(s * n * std::log(n));
    else if (alpha == 1.0)
        p.gamma = kPi * n * s / 2.0;
    else
        p.gamma = std::sqrt(kPi * s) *
                  std::pow(2.0 * std::tgamma(alpha) * std::sin(alpha * kPi / 2.0),
                           -1.0 / alpha) *
                  std::pow(n, 1.0 / alpha);
    return p;
}

double stable_leading(double x, double alpha, StableRegime regime) {
    switch (regime) {
        case StableRegime::at_zero:
            if (!(alpha > 1.0 && alpha <= 2.0))
                raise(errc::invalid_alpha, "peak value defined for 1 < alpha <= 2");
            return std::tgamma(1.0 + 1.0 / alpha) * std::sin(kPi / alpha) / kPi;
        case StableRegime::to_plus_inf:
            if (!(alpha > 1.0 && alpha < 2.0))
                raise(errc::invalid_alpha, "algebraic tail defined for 1 < alpha < 2");
            if (!(x > 0.0)) raise(errc::out_of_domain, "algebraic tail sits at x > 0");
            return std::tgamma(alpha + 1.0) * std::pow(x, -alpha - 1.0) /
                   (std::tgamma(2.0 - alpha) * std::tgamma(alpha - 1.0));
        case StableRegime::to_minus_inf: {
            if (!(alpha > 1.0 && alpha < 2.0))
                raise(errc::invalid_alpha, "short tail defined for 1 < alpha < 2");
            if (!(x < 0.0)) raise(errc::out_of_domain, "short tail sits at x < 0");
            const double y = -x / alpha;
            return std::exp(-(alpha - 1.0) * std::pow(y, alpha / (alpha - 1.0))) *
                   std::pow(y, 0.5 * (1.0 / (alpha - 1.0) - 1.0)) /
                   std::sqrt(2.0 * kPi * alpha * (alpha - 1.0));
        }
        case StableRegime::zero_plus: {
            if (!(alpha > 0.0 && alpha < 1.0))
                raise(errc::invalid_alpha, "origin expansion defined for 0 < alpha < 1");
            if (!(x > 0.0)) raise(errc::out_of_domain, "the density lives on x > 0");
            const double y = alpha / x;
            return std::exp(-(1.0 - alpha) * std::pow(y, alpha / (1.0 - alpha))) *
                   std::pow(y, 0.5 * (1.0 + 1.0 / (1.0 - alpha))) /
                   std::sqrt(2.0 * kPi * alpha * (1.0 - alpha));
        }
        case StableRegime::alpha_one:
            if (alpha != 1.0) raise(errc::invalid_alpha, "profile defined at alpha == 1");
            return std::exp(0.5 * (x - 1.0) - std::exp(x - 1.0)) / std::sqrt(2.0 * kPi);
    }
    raise(errc::invalid_parameter, "unknown expansion regime");
}

double intermediate_log_asymptote(double alpha, double s, double mu1, double n) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        raise(errc::invalid_alpha, "transient regime needs alpha in (0, 1]");
    if (alpha > 1.0)
        raise(errc::out_of_domain, "no transient power law once the excess mean is finite");
    if (!(s > 0.0) || !std::isfinite(s))
        raise(errc::invalid_parameter, "tail scale s must be positive");
    if (alpha == 1.0) {
        const double d = s * std::log(n) - 1.0;
        return std::log(mu1 * s) - 2.0 * std::log(std::fabs(d)) - 2.0 * std::log(n);
    }
    return std::log(mu1 * s * alpha) - (alpha + 1.0) * std::log(n);
}

double intermediate_asymptote(double alpha, double s, double mu1, double n) {
    return std::exp(intermediate_log_asymptote(alpha, s, mu1, n));
}

double intermediate_switch_point(double alpha, double s, double mu1) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        raise(errc::invalid_alpha, "transient regime needs alpha in (0, 1]");
    if (alpha > 1.0)
        raise(errc::out_of_domain, "no transient power law once the excess mean is finite");
    if (!(s > 0.0) || !std::isfinite(s))
        raise(errc::invalid_parameter, "tail scale s must be positive");
    if (!(mu1 > 0.0)) raise(errc::invalid_parameter, "need mu1 > 0");
    // At alpha == 1 the centering of the stable window changes sign at
    // exp(1/s); past that point the final profile applies.
    if (alpha == 1.0) return std::exp(1.0 / s);

    const double kern = std::sqrt(2.0) * tail_kernel(alpha, s);
    const double c10 = mu1 / std::sqrt(2.0 - 2.0 * alpha) *
                       std::pow(kern / (alpha * std::pow(kPi, alpha)),
                                1.0 / (2.0 * alpha - 2.0));
    const double c11 = (1.0 - alpha) * std::pow(kern / (kPi * std::pow(alpha, alpha)),
                                                1.0 / (alpha - 1.0));
    const double log_amp = std::log(mu1 * s * alpha);
    // log(transient) - log(final); a zero is the handover size.
    auto gap = [&](double ln_n) {
        return log_amp - (alpha + 1.0) * ln_n -
               (std::log(c10) - c11 * std::exp(ln_n) - 1.5 * ln_n);
    };
    const double lo = std::log(2.0), hi = std::log(1e15);
    const int steps = 2000;
    double prev_x = lo, prev_g = gap(lo);
    for (int i = 1; i <= steps; ++i) {
        const double x = lo + (hi - lo) * double(i) / steps;
        const double g = gap(x);
        if ((prev_g <= 0.0) != (g <= 0.0))
            return std::exp(bisect_root(gap, prev_x, x));
        prev_x = x;
        prev_g = g;
    }
    // The two curves never meet: the transient stays on one side until the
    // exponential factor of the final form takes over, at its decay scale.
    return 1.0 / c11;
}

std::optional<double> eta_exponent(double beta, ThetaBranch branch) {
    if (branch == ThetaBranch::positive) return std::nullopt;
    if (branch == ThetaBranch::negative) {
        if (!(beta > 3.0))
            raise(errc::out_of_domain, "subcritical power law needs beta > 3");
        return beta - 1.0;
    }
    if (!(beta >= 3.0)) raise(errc::out_of_domain, "critical power law needs beta >= 3");
    if (beta >= 4.0) return 1.5;
    return (beta - 1.0) / (beta - 2.0);
}

namespace {

// Sum of amp * n^(-q) * exp(-c n) over n >= a, for slow rates c, via the
// continuous integral (q = 3/2 has a closed form in erfc) plus the first
// Euler-Maclaurin boundary terms.
double slow_exp_tail(double amp, double c, double a) {
    const double integral = 2.0 / std::sqrt(a) * std::exp(-c * a) -
                            2.0 * std::sqrt(kPi * c) * std::erfc(std::sqrt(c * a));
    const double f = std::pow(a, -1.5) * std::exp(-c * a);
    const double fp = std::exp(-c * a) * (-1.5 * std::pow(a, -2.5) - c * std::pow(a, -1.5));
    return amp * (integral + 0.5 * f - fp / 12.0);
}

double summed_tail(const AsymptoteModel& m, double a) {
    double total = 0.0;
    for (double n = a; n < a + 1e7; n += 1.0) {
        const double term = m.eval(n);
        total += term;
        if (term < 1e-15 * total || (term == 0.0 && total >= 0.0)) return total;
    }
    raise(errc::not_converged, "asymptote tail sum did not settle within 1e7 terms");
}

} // namespace

double asymptote_tail_mass(const AsymptoteModel& m, double from) {
    const double a = std::floor(from) + 1.0;
    auto c = [&m](const char* key) { return m.constants.at(key); };
    switch (m.case_id) {
        case CaseId::A:
        case CaseId::B: {
            if (m.case_id == CaseId::B && m.branch == ThetaBranch::negative)
                return c("C3") * power_tail_sum(m.alpha + 1.0, a);
            if (m.branch == ThetaBranch::zero) return c("C1") * power_tail_sum(1.5, a);
            const double rate = c("C2");
            if (rate >= 1e-3) return summed_tail(m, a);
            return slow_exp_tail(c("C1"), rate, a);
        }
        case CaseId::C: {
            if (m.branch == ThetaBranch::negative)
                return c("C3") * power_tail_sum(m.alpha + 1.0, a);
            if (m.branch == ThetaBranch::positive) return summed_tail(m, a);
            // C1p * sum n^(-3/2) (ln n)^(-1/2): integral in erfc after
            // x = exp(2 t^2), plus boundary terms.
            const double integral = std::sqrt(2.0 * kPi) * std::erfc(std::sqrt(std::log(a) / 2.0));
            const double f = std::pow(a, -1.5) / std::sqrt(std::log(a));
            const double fp = std::pow(a, -2.5) / std::sqrt(std::log(a)) *
                              (-1.5 - 0.5 / std::log(a));
            return c("C1p") * (integral + 0.5 * f - fp / 12.0);
        }
        case CaseId::D: {
            if (m.branch == ThetaBranch::negative)
                return c("C3") * power_tail_sum(m.alpha + 1.0, a);
            if (m.branch == ThetaBranch::zero)
                return c("C4") * power_tail_sum(1.0 + 1.0 / m.alpha, a);
            const double rate = c("C6");
            if (rate >= 1e-3) return summed_tail(m, a);
            return slow_exp_tail(c("C5"), rate, a);
        }
        case CaseId::E:
            return summed_tail(m, a);
        case CaseId::F: {
            const double rate = c("C11");
            if (rate >= 1e-3) return summed_tail(m, a);
            return slow_exp_tail(c("C10"), rate, a);
        }
    }
    raise(errc::invalid_parameter, "unhandled asymptote row");
}

LinearFit fit_window_slope(const std::vector<double>& log_w, std::size_t lo, std::size_t hi) {
    std::vector<double> xs, ys;
    const std::size_t top = std::min(hi, log_w.empty() ? 0 : log_w.size() - 1);
    for (std::size_t n = std::max<std::size_t>(lo, 1); n <= top; ++n) {
        if (!std::isfinite(log_w[n])) continue;
        xs.push_back(std::log(double(n)));
        ys.push_back(log_w[n]);
    }
    return fit_line(xs, ys);
}

} // namespace compsize
