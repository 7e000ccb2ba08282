#include <cmath>
#include <vector>

#include <doctest.h>

#include "compsize/conv_engine.hpp"
#include "compsize/degree_model.hpp"
#include "compsize/numeric.hpp"

using namespace compsize;

namespace {

std::vector<double> random_pmf(Rng& rng, std::size_t len) {
    std::vector<double> v(len);
    double sum = 0.0;
    for (auto& x : v) {
        x = rng.next_double();
        sum += x;
    }
    for (auto& x : v) x /= sum;
    return v;
}

}  // namespace

TEST_CASE("convolve of two coin flips") {
    const std::vector<double> f{0.5, 0.5};
    const auto h = convolve(f, f, 2);
    REQUIRE(h.size() == 3);
    CHECK(h[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(h[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h[2] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("convolve truncation keeps prefix exact") {
    Rng rng(3);
    const auto f = random_pmf(rng, 6);
    const auto g = random_pmf(rng, 5);
    const auto full = convolve(f, g, 9);
    const auto cut = convolve(f, g, 3);
    REQUIRE(cut.size() == 4);
    for (std::size_t k = 0; k <= 3; ++k) CHECK(cut[k] == full[k]);
}

TEST_CASE("conv_power base cases") {
    const std::vector<double> f{0.25, 0.75};
    const auto p0 = conv_power(f, 0, 4);
    CHECK(p0.value(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p0.value(1) == 0.0);

    const auto p1 = conv_power(f, 1, 4);
    CHECK(p1.value(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p1.value(1) == doctest::Approx(0.75).epsilon(1e-15));

    // delta at 0 is idempotent
    const auto d = conv_power({1.0}, 17, 4);
    CHECK(d.value(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("conv_power against brute-force enumeration") {
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const auto f = random_pmf(rng, 4);
        for (std::size_t n = 1; n <= 6; ++n) {
            const auto p = conv_power(f, n, 10);
            for (std::size_t k = 0; k <= 10; ++k) {
                const double ref = conv_power_brute(f, n, k);
                CHECK(relative_diff(p.value(k), ref) <= 1e-12);
            }
        }
    }
}

TEST_CASE("conv_power_brute guards its explosion") {
    const std::vector<double> f{0.1, 0.2, 0.3, 0.4};
    CHECK_THROWS_AS(conv_power_brute(f, 30, 60, 1000), Error);
}

TEST_CASE("ScaledSequence renormalize folds the sum into log_scale") {
    ScaledSequence s;
    s.values = {2.0, 2.0};
    s.renormalize();
    CHECK(s.values[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.log_scale == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(s.value(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.log_value(0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(s.log_value(7) == neg_inf);
}

TEST_CASE("diagonal_powers matches conv_power on the n-2 diagonal") {
    Rng rng(19);
    for (int rep = 0; rep < 5; ++rep) {
        const auto kernel = random_pmf(rng, 5);
        const auto diag = diagonal_powers(kernel, 14);
        for (std::size_t n = 2; n <= 14; ++n) {
            const auto p = conv_power(kernel, n, n - 2);
            CHECK(relative_diff(diag.d[n], p.value(n - 2)) <= 1e-12);
            if (p.value(n - 2) > 0.0)
                CHECK(diag.log_d[n] == doctest::Approx(p.log_value(n - 2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("stride-2 diagonal reads index 2n-2") {
    Rng rng(23);
    const auto kernel = random_pmf(rng, 4);
    const auto diag = diagonal_powers(kernel, 10, -2, 2);
    for (std::size_t n = 2; n <= 10; ++n) {
        const auto p = conv_power(kernel, n, 2 * n - 2);
        CHECK(relative_diff(diag.d[n], p.value(2 * n - 2)) <= 1e-12);
    }
}

TEST_CASE("excess-law overload equals the vector form") {
    const auto u = geometric_family(0.5);
    const ExcessDistribution u1(u);
    const auto a = diagonal_powers(u1, 40);
    const auto b = diagonal_powers(u1.pmf(), 40, -2, 1);
    for (std::size_t n = 2; n <= 40; ++n) {
        CHECK(a.d[n] == b.d[n]);
        CHECK(a.log_d[n] == b.log_d[n]);
    }
}

TEST_CASE("diagonal entries are probabilities") {
    Rng rng(31);
    const auto kernel = random_pmf(rng, 6);
    const auto diag = diagonal_powers(kernel, 200);
    for (std::size_t n = 2; n <= 200; ++n) {
        CHECK(diag.d[n] >= 0.0);
        CHECK(diag.log_d[n] <= 1e-12);
    }
}

TEST_CASE("deep diagonal stays finite in log form") {
    // strongly subcritical excess law: untilted window entries would flush
    // to zero long before n = 2000
    const auto u = geometric_family(0.9);
    const ExcessDistribution u1(u);
    const auto diag = diagonal_powers(u1, 2000);
    CHECK(std::isfinite(diag.log_d[2000]));
    CHECK(diag.log_d[2000] < -1000.0);

    // spot-check against the independent repeated-squaring route in log space
    const auto p = conv_power(u1.pmf(), 1200, 1198);
    CHECK(diag.log_d[1200] == doctest::Approx(p.log_value(1198)).epsilon(1e-9));
}

TEST_CASE("offset zero diagonal") {
    // kernel^{*n}(n) for a Bernoulli(q) kernel: every draw must be 1
    const std::vector<double> kernel{0.75, 0.25};
    const auto diag = diagonal_powers(kernel, 12, 0, 1);
    for (std::size_t n = 2; n <= 12; ++n)
        CHECK(diag.d[n] == doctest::Approx(std::pow(0.25, double(n))).epsilon(1e-12));
}
