#include "compsize/conv_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "compsize/errors.hpp"

namespace compsize {

void ScaledSequence::renormalize() {
    double sum = 0.0;
    for (double v : values) sum += v;
    if (sum <= 0.0) return;
    const double inv = 1.0 / sum;
    for (double& v : values) v *= inv;
    log_scale += std::log(sum);
}

std::vector<double> convolve(const std::vector<double>& f, const std::vector<double>& g,
                             std::size_t trunc) {
    if (f.empty() || g.empty()) return {};
    const std::size_t n_out = std::min(trunc, f.size() + g.size() - 2) + 1;
    std::vector<double> out(n_out, 0.0);
    for (std::size_t i = 0; i < f.size() && i < n_out; ++i) {
        const double fi = f[i];
        if (fi == 0.0) continue;
        const std::size_t jmax = std::min(g.size(), n_out - i);
        for (std::size_t j = 0; j < jmax; ++j) out[i + j] += fi * g[j];
    }
    return out;
}

ScaledSequence conv_power(const std::vector<double>& f, std::size_t n, std::size_t trunc) {
    ScaledSequence acc;
    acc.values = {1.0};
    if (n == 0) return acc;
    ScaledSequence base;
    base.values = f;
    base.renormalize();
    for (;;) {
        if (n & 1) {
            acc.values = convolve(acc.values, base.values, trunc);
            acc.log_scale += base.log_scale;
            acc.renormalize();
        }
        n >>= 1;
        if (n == 0) break;
        base.values = convolve(base.values, base.values, trunc);
        base.log_scale *= 2.0;
        base.renormalize();
    }
    return acc;
}

double conv_power_brute(const std::vector<double>& f, std::size_t n, std::size_t k,
                        std::size_t max_terms) {
    if (n == 0) return k == 0 ? 1.0 : 0.0;
    if (f.empty()) return 0.0;
    // C(k+n-1, n-1) ordered compositions will be visited.
    double count = 1.0;
    for (std::size_t i = 1; i < n; ++i) count *= double(k + i) / double(i);
    if (count > double(max_terms))
        raise(errc::too_large, "brute-force enumeration would visit ~" +
                                   std::to_string(std::llround(count)) + " compositions");
    double total = 0.0;
    // parts_left parts still to choose, `remaining` of the target index left,
    // prod = product of the factors fixed so far.
    auto walk = [&](auto&& self, std::size_t parts_left, std::size_t remaining,
                    double prod) -> void {
        if (parts_left == 1) {
            if (remaining < f.size()) total += prod * f[remaining];
            return;
        }
        const std::size_t vmax = std::min(remaining, f.size() - 1);
        for (std::size_t v = 0; v <= vmax; ++v)
            self(self, parts_left - 1, remaining - v, prod * f[v]);
    };
    walk(walk, n, k, 1.0);
    return total;
}

namespace {

// out[o] += sum_j u[j] p[o-j] for o < out_len, given p[0..np-1] (the buffer
// behind p must extend 7 zero-padded entries past np). Taps are processed in
// blocks of eight so the inner loop runs long contiguous fused
// multiply-adds; the short triangular head of each block is done separately.
void add_conv_blocked(double* __restrict out, std::size_t out_len,
                      const double* __restrict p, std::size_t np,
                      const double* __restrict u, std::size_t nu) {
    if (np == 0 || out_len == 0) return;
    std::size_t j = 0;
    for (; j + 8 <= nu && j + 8 <= out_len; j += 8) {
        const double u0 = u[j], u1 = u[j + 1], u2 = u[j + 2], u3 = u[j + 3];
        const double u4 = u[j + 4], u5 = u[j + 5], u6 = u[j + 6], u7 = u[j + 7];
        double* dst = out + j + 7;
        const double* s = p;
        const std::ptrdiff_t len =
            std::min<std::ptrdiff_t>(std::ptrdiff_t(np), std::ptrdiff_t(out_len - j - 7));
        for (std::ptrdiff_t k = 0; k < len; ++k)
            dst[k] += u0 * s[k + 7] + u1 * s[k + 6] + u2 * s[k + 5] + u3 * s[k + 4] +
                      u4 * s[k + 3] + u5 * s[k + 2] + u6 * s[k + 1] + u7 * s[k];
        for (std::size_t h = 0; h < 7; ++h) {
            double acc = 0.0;
            for (std::size_t t = 0; t <= h; ++t) acc += u[j + t] * p[h - t];
            out[j + h] += acc;
        }
    }
    for (; j < nu && j < out_len; ++j) {
        const double uj = u[j];
        if (uj == 0.0) continue;
        const std::size_t lim = std::min(np, out_len - j);
        for (std::size_t i = 0; i < lim; ++i) out[j + i] += uj * p[i];
    }
}

struct TiltedKernel {
    std::vector<double> q;  // normalized tilted kernel, sums to 1
    double t = 0.0;
    double log_phi = 0.0;  // log sum_k kernel[k] e^{t k}
};

double tilted_log_norm(const std::vector<std::size_t>& ks, const std::vector<double>& logs,
                       double t) {
    double m = neg_inf;
    for (std::size_t i = 0; i < ks.size(); ++i)
        m = std::max(m, logs[i] + t * double(ks[i]));
    double sum = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i)
        sum += std::exp(logs[i] + t * double(ks[i]) - m);
    return m + std::log(sum);
}

double tilted_mean(const std::vector<std::size_t>& ks, const std::vector<double>& logs,
                   double t) {
    const double den = tilted_log_norm(ks, logs, t);
    double num = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i)
        num += double(ks[i]) * std::exp(logs[i] + t * double(ks[i]) - den);
    return num;
}

// solve == false pins t = 0, fine for short horizons where the untilted
// window holds the diagonal comfortably.
TiltedKernel make_tilted(const std::vector<double>& kernel, double target_mean, bool solve) {
    std::vector<std::size_t> ks;
    std::vector<double> logs;
    for (std::size_t k = 0; k < kernel.size(); ++k)
        if (kernel[k] > 0.0) {
            ks.push_back(k);
            logs.push_back(std::log(kernel[k]));
        }
    const double k_min = double(ks.front());
    const double k_max = double(ks.back());
    const double span = k_max - k_min;
    double tgt = std::clamp(target_mean, k_min + 1e-9 * span, k_max - 1e-9 * span);
    double t = 0.0;
    const double cap = 5000.0;
    if (solve) {
        double lo = -1.0, hi = 1.0;
        while (tilted_mean(ks, logs, lo) > tgt && lo > -cap) lo *= 2.0;
        while (tilted_mean(ks, logs, hi) < tgt && hi < cap) hi *= 2.0;
        lo = std::max(lo, -cap);
        hi = std::min(hi, cap);
        if (tilted_mean(ks, logs, lo) > tgt)
            t = lo;
        else if (tilted_mean(ks, logs, hi) < tgt)
            t = hi;
        else
            t = bisect_root([&](double x) { return tilted_mean(ks, logs, x) - tgt; }, lo, hi,
                            100);
    }
    TiltedKernel out;
    out.t = t;
    out.log_phi = tilted_log_norm(ks, logs, t);
    out.q.assign(kernel.size(), 0.0);
    for (std::size_t i = 0; i < ks.size(); ++i)
        out.q[ks[i]] = std::exp(logs[i] + t * double(ks[i]) - out.log_phi);
    return out;
}

} // namespace

DiagonalResult diagonal_powers(const std::vector<double>& kernel, std::size_t horizon,
                               long long offset, std::size_t stride) {
    if (horizon < 2) raise(errc::invalid_parameter, "diagonal_powers needs horizon >= 2");
    if (stride < 1) raise(errc::invalid_parameter, "stride must be >= 1");
    if (2 * (long long)stride + offset < 0)
        raise(errc::invalid_parameter, "first diagonal index is negative");

    DiagonalResult res;
    res.d.assign(horizon + 1, 0.0);
    res.log_d.assign(horizon + 1, neg_inf);

    std::vector<double> ker = kernel;
    while (!ker.empty() && ker.back() == 0.0) ker.pop_back();
    std::size_t first = 0;
    while (first < ker.size() && ker[first] == 0.0) ++first;
    if (first == ker.size()) return res;  // zero kernel

    auto diag_index = [&](std::size_t n) -> std::size_t {
        return std::size_t((long long)(stride * n) + offset);
    };

    if (first + 1 == ker.size()) {
        // Single support point m0: kernel^{*n} = c^n at index n*m0.
        const double log_c = std::log(ker[first]);
        for (std::size_t n = 2; n <= horizon; ++n)
            if (diag_index(n) == n * first) {
                res.log_d[n] = double(n) * log_c;
                res.d[n] = std::exp(res.log_d[n]);
            }
        return res;
    }

    const std::size_t M = diag_index(horizon);  // last index ever read
    TiltedKernel tk = make_tilted(ker, double(M) / double(horizon), horizon >= 10);

    std::vector<double> cur(M + 8, 0.0), next(M + 8, 0.0);
    const std::size_t nu = std::min(tk.q.size(), M + 1);
    std::copy(tk.q.begin(), tk.q.begin() + nu, cur.begin());
    std::size_t cur_len = nu;
    double log_scale = 0.0;

    for (std::size_t n = 2; n <= horizon; ++n) {
        const std::size_t out_len = std::min(cur_len + tk.q.size() - 1, M + 1);
        std::memset(next.data(), 0, (out_len + 7) * sizeof(double));
        add_conv_blocked(next.data(), out_len, cur.data(), cur_len, tk.q.data(), tk.q.size());
        cur.swap(next);
        cur_len = out_len;
        double sum = 0.0;
        for (std::size_t i = 0; i < cur_len; ++i) sum += cur[i];
        if (sum > 0.0) {
            const double inv = 1.0 / sum;
            for (std::size_t i = 0; i < cur_len; ++i) cur[i] *= inv;
            log_scale += std::log(sum);
        }
        // Drop window entries more than ~575 nats below the window mass. The
        // tilt keeps every diagonal read in the bulk of the window, so these
        // cannot influence any reported value; leaving them in drags the far
        // flank through subnormal range and stalls the convolution loop.
        for (std::size_t i = 0; i < cur_len; ++i)
            if (cur[i] < 1e-250) cur[i] = 0.0;
        const std::size_t m = diag_index(n);
        if (m < cur_len && cur[m] > 0.0) {
            res.log_d[n] = std::log(cur[m]) + log_scale + double(n) * tk.log_phi -
                           tk.t * double(m);
            res.d[n] = std::exp(res.log_d[n]);
        }
    }
    return res;
}

DiagonalResult diagonal_powers(const ExcessDistribution& u1, std::size_t horizon) {
    return diagonal_powers(u1.pmf(), horizon, -2, 1);
}

} // namespace compsize
