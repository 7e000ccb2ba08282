#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace compsize {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; handles -inf operands.
inline double log_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

// |a-b| relative to the larger magnitude; 0 when both are 0.
inline double relative_diff(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    if (scale == 0.0) return 0.0;
    return std::fabs(a - b) / scale;
}

// Least-squares line y = slope*x + intercept with the usual residual-based
// standard error on the slope.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    std::size_t points = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Bisection on a monotone function; returns the argument where fn crosses
// zero. Requires fn(lo) and fn(hi) to bracket a root.
double bisect_root(const std::function<double(double)>& fn, double lo, double hi,
                   int max_iter = 200);

// Sum_{n >= from} n^{-q} for q > 1, via Euler-Maclaurin. Accurate to a few
// ulp for from >= 10.
double power_tail_sum(double q, double from);

// Deterministic 64-bit generator (splitmix64). Used instead of the standard
// distributions so that streams are identical across platforms and build
// configurations.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound). bound > 0.
    std::uint64_t next_below(std::uint64_t bound);
};

// Stream seed for replica r derived from a master seed; documented scheme:
// advance a splitmix64 state by r+1 increments of the golden-ratio gamma.
inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t r) {
    Rng g(master + (r + 1) * 0x9E3779B97F4A7C15ull);
    return g.next_u64();
}

} // namespace compsize
