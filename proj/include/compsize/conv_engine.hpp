#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "compsize/degree_model.hpp"
#include "compsize/numeric.hpp"

namespace compsize {

// Nonnegative sequence held as values[] * exp(log_scale). The values are
// renormalized (sum == 1) after every operation so that repeated convolution
// never underflows; log_scale accumulates the true magnitude.
struct ScaledSequence {
    std::vector<double> values;
    double log_scale = 0.0;

    double value(std::size_t k) const {
        return k < values.size() ? values[k] * std::exp(log_scale) : 0.0;
    }
    double log_value(std::size_t k) const {
        if (k >= values.size() || values[k] == 0.0) return neg_inf;
        return std::log(values[k]) + log_scale;
    }

    // Divide values by their sum and fold it into log_scale. A zero sequence
    // is left untouched.
    void renormalize();
};

// Plain truncated convolution: out[k] = sum_{i+j=k} f[i] g[j] for k <= trunc.
// Direct summation of nonnegative terms; entries up to trunc are exact
// regardless of how much of f or g lies beyond trunc.
std::vector<double> convolve(const std::vector<double>& f, const std::vector<double>& g,
                             std::size_t trunc);

// n-fold convolution power via repeated squaring, truncated at index trunc.
// f^{*0} is the unit sequence (1 at index 0).
ScaledSequence conv_power(const std::vector<double>& f, std::size_t n, std::size_t trunc);

// Reference evaluation of f^{*n}(k) by explicit enumeration of all ordered
// compositions of k into n nonnegative parts. Exponentially slow by design;
// throws too_large when more than max_terms compositions would be visited.
double conv_power_brute(const std::vector<double>& f, std::size_t n, std::size_t k,
                        std::size_t max_terms = 10000000);

// Moving diagonal of the convolution powers of a probability kernel:
//   d(n) = kernel^{*n}(stride*n + offset)   for n = 2..horizon.
// stride=1, offset=-2 is the d(n) = u1^{*n}(n-2) diagonal at the heart of
// the component size law; stride=2 serves the route that convolves the
// size-biased degree law and reads index 2n-2.
//
// Computation is iterative (p_n = p_{n-1} * kernel, truncated at the last
// index ever read, renormalized each step with the scale kept in log form)
// and runs on an exponentially tilted copy of the kernel,
//   kt(k) = kernel(k) e^{tk} / phi(t),
// with t chosen so the tilted mean is close to stride + offset/horizon. The
// identity kernel^{*n}(m) = kt^{*n}(m) phi^n e^{-tm} holds for every t, so
// the tilt changes conditioning only: the diagonal stays in the bulk of the
// renormalized window at every step, which keeps deep sub- and supercritical
// values representable in log form far past the point where untilted window
// entries would flush to zero. All sums remain sums of nonnegative terms.
struct DiagonalResult {
    // Index n holds the value for n; entries 0 and 1 are unused (zero / -inf).
    std::vector<double> d;
    std::vector<double> log_d;
};

DiagonalResult diagonal_powers(const std::vector<double>& kernel, std::size_t horizon,
                               long long offset = -2, std::size_t stride = 1);

// The d(n) = u1^{*n}(n-2) diagonal of an excess law.
DiagonalResult diagonal_powers(const ExcessDistribution& u1, std::size_t horizon);

} // namespace compsize
