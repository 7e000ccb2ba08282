#include <cmath>
#include <vector>

#include <doctest.h>

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

TEST_CASE("from_pmf normalizes and records the factor") {
    const auto u = DegreeDistribution::from_pmf({2.0, 2.0});
    CHECK(u.pmf() == std::vector<double>{0.5, 0.5});
    CHECK(u.normalization() == doctest::Approx(4.0));
    CHECK(u.k_max() == 1);
}

TEST_CASE("from_pmf input validation") {
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({}), Error);
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({0.5, -0.1}), Error);
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({0.0, 0.0}), Error);

    // strict mode rejects anything further than 1e-12 from unit mass
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({0.5, 0.49}, std::nullopt, false), Error);
    CHECK_NOTHROW(DegreeDistribution::from_pmf({0.5, 0.5 + 1e-13}, std::nullopt, false));

    CHECK_THROWS_AS(DegreeDistribution::from_pmf({1.0}, TailSpec{-1.0, 3.0}), Error);
    CHECK_THROWS_AS(DegreeDistribution::from_pmf({1.0}, TailSpec{1.0, 0.0}), Error);
}

TEST_CASE("lookup beyond the table is zero") {
    const auto u = DegreeDistribution::from_pmf({0.25, 0.75});
    CHECK(u(0) == 0.25);
    CHECK(u(1) == 0.75);
    CHECK(u(2) == 0.0);
    CHECK(u(10000) == 0.0);
}

TEST_CASE("moments of a two-atom distribution") {
    // mass 1/2 at degree 1 and 3
    const auto u = DegreeDistribution::from_pmf({0.0, 0.5, 0.0, 0.5});
    const auto m = u.moments();
    CHECK(m.mu1 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.mu2 == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(m.mu3 == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(m.theta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.mu1_finite);
    CHECK(m.mu2_finite);
    CHECK(m.mu3_finite);
}

TEST_CASE("excess distribution of the two-atom example") {
    const auto u = DegreeDistribution::from_pmf({0.0, 0.5, 0.0, 0.5});
    const ExcessDistribution u1(u);
    REQUIRE(u1.pmf().size() == 3);
    CHECK(u1(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u1(1) == 0.0);
    CHECK(u1(2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(u1.mean() == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(u1.variance() == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("excess pmf sums to one") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const auto u = DegreeDistribution::from_pmf(random_pmf(rng, 2 + rep % 7));
        const ExcessDistribution u1(u);
        double sum = 0.0;
        for (double v : u1.pmf()) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("theta computed two ways agrees") {
    // theta = mu2 - 2 mu1 = mu1 * (excess mean - 1)
    Rng rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const auto u = DegreeDistribution::from_pmf(random_pmf(rng, 3 + rep % 6));
        const auto m = u.moments();
        const ExcessDistribution u1(u);
        CHECK(m.theta == doctest::Approx(m.mu1 * (u1.mean() - 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("exponential family") {
    const double lam = 1.05;
    const auto u = exponential_family(lam);
    CHECK(u(0) == doctest::Approx(1.0 - std::exp(-lam)).epsilon(1e-15));
    CHECK(u(3) == doctest::Approx((1.0 - std::exp(-lam)) * std::exp(-3 * lam)).epsilon(1e-14));
    double sum = 0.0;
    for (double v : u.pmf()) sum += v;
    CHECK(sum + u.truncated_tail_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(u.tail().has_value());

    // frozen: theta(1.05) = 0.041250171053684755; crosses zero at lambda = ln 3
    CHECK(u.moments().theta == doctest::Approx(0.041250171053684755).epsilon(1e-12));
    CHECK(exponential_family(std::log(3.0) + 0.01).moments().theta < 0.0);
    CHECK(exponential_family(std::log(3.0) - 0.01).moments().theta > 0.0);

    CHECK_THROWS_AS(exponential_family(0.0), Error);
    CHECK_THROWS_AS(exponential_family(-1.0), Error);
}

TEST_CASE("geometric family") {
    const auto u = geometric_family(0.5);
    CHECK(u(0) == 0.0);
    CHECK(u(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u(4) == doctest::Approx(0.5 * 0.125).epsilon(1e-14));

    // theta = (2 - 3p) / p^2
    CHECK(u.moments().theta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(geometric_family(0.6).moments().theta == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
    CHECK(geometric_family(0.7).moments().theta ==
          doctest::Approx((2.0 - 2.1) / 0.49).epsilon(1e-10));

    CHECK_THROWS_AS(geometric_family(0.0), Error);
    CHECK_THROWS_AS(geometric_family(1.0), Error);
    CHECK_THROWS_AS(geometric_family(1.5), Error);
}

TEST_CASE("binomial family") {
    const auto u = binomial_family(2, 0.5);
    REQUIRE(u.pmf().size() == 3);
    CHECK(u(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u(2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u.moments().mu1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.truncated_tail_mass() == 0.0);

    CHECK_THROWS_AS(binomial_family(2, 0.0), Error);
    CHECK_THROWS_AS(binomial_family(2, 1.0), Error);
    CHECK_THROWS_AS(binomial_family(0, 0.5), Error);
}

TEST_CASE("power-law family shape and bookkeeping") {
    const double beta = 3.5, s = 2.0;
    const auto u = powerlaw_family(beta, s, 5000);
    REQUIRE(u.tail().has_value());
    CHECK(u.tail()->beta == beta);
    CHECK(u.tail()->s == doctest::Approx(s * (beta - 2.0)).epsilon(1e-15));
    CHECK(u.tail()->alpha() == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(u(2) == doctest::Approx(s * 1.5 * std::pow(2.0, -beta)).epsilon(1e-14));
    CHECK(u(0) == 0.0);

    double sum = 0.0;
    for (double v : u.pmf()) sum += v;
    CHECK(sum + u.truncated_tail_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u.truncated_tail_mass() > 0.0);

    // the ideal mu3 diverges for beta <= 4, mu2 for beta <= 3
    CHECK_FALSE(u.moments().mu3_finite);
    CHECK(u.moments().mu2_finite);
    CHECK_FALSE(powerlaw_family(2.6, 0.05, 2000).moments().mu2_finite);
    CHECK(powerlaw_family(2.6, 0.05, 2000).moments().mu1_finite);

    CHECK_THROWS_AS(powerlaw_family(2.0, 1.0), Error);
    CHECK_THROWS_AS(powerlaw_family(1.0, 1.0), Error);
    // s so large that u(1) would go negative
    CHECK_THROWS_AS(powerlaw_family(3.5, 1e9), Error);
}

TEST_CASE("power-law theta is monotone in s") {
    const double t1 = powerlaw_family(3.5, 0.5, 2000).moments().theta;
    const double t2 = powerlaw_family(3.5, 2.0, 2000).moments().theta;
    const double t3 = powerlaw_family(3.5, 4.0, 2000).moments().theta;
    CHECK(t1 < t2);
    CHECK(t2 < t3);
}

TEST_CASE("fig-4 style parameter check: beta=6, s=10.05 is valid and supercritical") {
    const auto u = powerlaw_family(6.0, 10.05, 100000);
    CHECK(u.moments().theta > 0.0);
    CHECK(u(2) == doctest::Approx(10.05 * 4.0 / 64.0).epsilon(1e-13));
}

TEST_CASE("excess-scale parameterization hits the requested scale") {
    const double beta = 2.6, s1 = 8.3e-5;
    const auto u = powerlaw_family_excess_scale(beta, s1, 20000);
    const ExcessDistribution ex(u);
    REQUIRE(ex.tail_scale().has_value());
    CHECK(*ex.tail_scale() == doctest::Approx(s1).epsilon(1e-9));
    CHECK(*ex.tail_alpha() == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("calibrate_theta finds the critical point") {
    // admissible s for beta=3.5 ends near 5.26, where u(1) hits zero
    const auto build = [](double s) { return powerlaw_family(3.5, s, 20000); };
    const double sc = calibrate_theta(build, 1e-3, 5.2);
    const auto m = build(sc).moments();
    CHECK(std::fabs(m.theta) <= 1e-9 * m.mu1);
    CHECK(build(sc * 0.25).moments().theta < 0.0);
    CHECK(build(std::min(sc * 4.0, 5.2)).moments().theta > 0.0);
}

TEST_CASE("apply_cutoff drops and renormalizes") {
    const auto u = DegreeDistribution::from_pmf({0.5, 0.3, 0.2});
    double removed = 0.0;
    const auto cut = apply_cutoff(u, 1, &removed);
    CHECK(removed == doctest::Approx(0.2).epsilon(1e-15));
    REQUIRE(cut.pmf().size() == 2);
    CHECK(cut(0) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(cut(1) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK_FALSE(cut.tail().has_value());

    // cutoff above the support is a no-op
    const auto same = apply_cutoff(u, 10, &removed);
    CHECK(removed == 0.0);
    CHECK(same.pmf() == u.pmf());

    CHECK_THROWS_AS(apply_cutoff(u, 0), Error);
    const auto top = DegreeDistribution::from_pmf({0.0, 0.0, 0.0, 1.0});
    CHECK_THROWS_AS(apply_cutoff(top, 2), Error);  // nothing left below the cut
}

TEST_CASE("cutoff pushes theta down monotonically") {
    const auto u = powerlaw_family(3.3, 3.0, 100000);
    const double full = u.moments().theta;
    const double mid = apply_cutoff(u, 1000).moments().theta;
    const double low = apply_cutoff(u, 100).moments().theta;
    CHECK(low < mid);
    CHECK(mid < full);
}

TEST_CASE("edge density classes") {
    const auto sparse = edge_density_class(2.6, 1e6);
    CHECK(sparse.density == DensityClass::sparse);
    CHECK(sparse.expected_edges ==
          doctest::Approx(1e6 * (1.0 - std::pow(1e6, -0.6))).epsilon(1e-12));

    const auto semi = edge_density_class(2.0, 1e6);
    CHECK(semi.density == DensityClass::semi_dense);
    CHECK(semi.expected_edges == doctest::Approx(1e6 * std::log(1e6)).epsilon(1e-12));

    CHECK(edge_density_class(1.5, 1e6).density == DensityClass::semi_dense);
    CHECK(edge_density_class(1.0, 1e6).density == DensityClass::dense);
    CHECK(edge_density_class(0.5, 1e6).density == DensityClass::dense);
    CHECK(edge_density_class(1.5, 1e6).expected_edges > 1e6);
}

TEST_CASE("family labels carry the parameters") {
    CHECK(exponential_family(1.05).label().find("exponential") != std::string::npos);
    CHECK(geometric_family(0.5).label().find("0.5") != std::string::npos);
    CHECK(powerlaw_family(3.5, 2.0).label().find("powerlaw") != std::string::npos);
}
