#include "compsize/numeric.hpp"

#include <cmath>

#include "compsize/errors.hpp"

namespace compsize {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        raise(errc::invalid_parameter, "fit_line needs two equal-length samples of >= 2 points");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) raise(errc::invalid_parameter, "fit_line: all x identical");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = n;
    if (n > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            ssr += r * r;
        }
        fit.slope_se = std::sqrt(ssr / double(n - 2) / sxx);
    }
    return fit;
}

double bisect_root(const std::function<double(double)>& fn, double lo, double hi,
                   int max_iter) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        raise(errc::invalid_parameter, "bisect_root: no sign change on the bracket");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // interval is one ulp wide
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double power_tail_sum(double q, double from) {
    if (!(q > 1.0)) raise(errc::invalid_parameter, "power_tail_sum: divergent for q <= 1");
    double a = std::ceil(from);
    if (a < 1.0) a = 1.0;
    // Sum the first terms directly so the expansion starts at a >= 10.
    double head = 0.0;
    while (a < 10.0) {
        head += std::pow(a, -q);
        a += 1.0;
    }
    // Euler-Maclaurin at a: integral + f(a)/2 - B2/2! f'(a) - B4/4! f'''(a) - ...
    const double f = std::pow(a, -q);
    const double d1 = q * f / a;
    const double d3 = d1 * (q + 1.0) * (q + 2.0) / (a * a);
    const double d5 = d3 * (q + 3.0) * (q + 4.0) / (a * a);
    return head + f * a / (q - 1.0) + 0.5 * f + d1 / 12.0 - d3 / 720.0 + d5 / 30240.0;
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
    // Rejection above the largest multiple of bound keeps the draw unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x >= threshold) return x % bound;
    }
}

} // namespace compsize
