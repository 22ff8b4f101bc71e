#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sumbounds/latala.hpp"
#include "sumbounds/marginal.hpp"
#include "sumbounds/oracle.hpp"

using namespace sumbounds;

namespace {

SummandSequence rademachers(long n) {
    return SummandSequence::iid(Marginal::rademacher(1.0), n);
}

SummandSequence coins(long n) {
    return SummandSequence::iid(Marginal::atoms({{0.0, 0.5}, {1.0, 0.5}}), n);
}

} // namespace

TEST_CASE("convolution of two Rademacher summands") {
    const Marginal s2 = exact_sum_distribution(rademachers(2));
    REQUIRE(s2.atom_list().size() == 3);
    CHECK(s2.atom_list()[0].value == doctest::Approx(-2.0));
    CHECK(s2.atom_list()[0].probability == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(s2.atom_list()[1].value == doctest::Approx(0.0));
    CHECK(s2.atom_list()[1].probability == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(atom_p_norm(s2, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("sixteen Rademacher summands: binomial law, tails and norms") {
    const Marginal s16 = exact_sum_distribution(rademachers(16));
    REQUIRE(s16.atom_list().size() == 17);
    double p0 = 0.0;
    for (const Atom& a : s16.atom_list())
        if (std::abs(a.value) < 1e-9) p0 = a.probability;
    CHECK(p0 == doctest::Approx(12870.0 / 65536.0).epsilon(1e-12));

    CHECK(exact_estimate(rademachers(16), Statistic::tail_at(4.0)).value ==
          doctest::Approx(0.210113525390625).epsilon(1e-12));
    CHECK(exact_estimate(rademachers(16), Statistic::tail_at(6.0)).value ==
          doctest::Approx(0.076812744140625).epsilon(1e-12));
    CHECK(exact_estimate(rademachers(16), Statistic::p_norm(2.0)).value ==
          doctest::Approx(4.0).epsilon(1e-12));
    // E S^4 = 3n(n-1) + n = 736 at n = 16.
    CHECK(exact_estimate(rademachers(16), Statistic::p_norm(4.0)).value ==
          doctest::Approx(std::pow(736.0, 0.25)).epsilon(1e-12));

    const OracleEstimate ex = exact_estimate(rademachers(16), Statistic::tail_at(4.0));
    CHECK(ex.method == OracleEstimate::Method::Exact);
    CHECK(ex.error_radius == 0.0);
}

TEST_CASE("exact oracle rejects continuous summands and oversized supports") {
    CHECK_THROWS_AS(
        exact_sum_distribution(SummandSequence::single(Marginal::exponential(1.0))),
        std::invalid_argument);
    std::vector<SummandSequence::Entry> entries;
    for (int i = 0; i < 25; ++i)
        entries.push_back({Marginal::rademacher(std::exp(0.1 * i)), 1});
    CHECK_THROWS_AS(exact_sum_distribution(SummandSequence(std::move(entries))),
                    std::runtime_error);
}

TEST_CASE("max-tail statistic works in both oracles, continuous laws included") {
    const SummandSequence two = SummandSequence::iid(Marginal::uniform_symmetric(2.0), 2);
    CHECK(exact_estimate(two, Statistic::max_tail_at(1.0)).value ==
          doctest::Approx(0.75).epsilon(1e-14));
    const OracleEstimate mc = mc_estimate(two, Statistic::max_tail_at(1.0), 200000, 5, 2);
    CHECK(std::abs(mc.value - 0.75) <= mc.error_radius);
}

TEST_CASE("mc_estimate determinism and input validation") {
    const OracleEstimate a = mc_estimate(rademachers(4), Statistic::tail_at(1.5), 50000, 9, 4);
    const OracleEstimate b = mc_estimate(rademachers(4), Statistic::tail_at(1.5), 50000, 9, 4);
    CHECK(a.value == b.value); // bitwise
    CHECK(a.error_radius == b.error_radius);
    CHECK(a.samples == 50000);
    CHECK(a.seed == 9);

    // Different worker count changes the partition but estimates the same law.
    const OracleEstimate w1 = mc_estimate(rademachers(4), Statistic::tail_at(1.5), 50000, 9, 1);
    CHECK(std::abs(w1.value - a.value) < 0.02);

    CHECK_THROWS_AS(mc_estimate(rademachers(4), Statistic::tail_at(1.0), 999, 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_estimate(rademachers(4), Statistic::tail_at(1.0), 5000, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_estimate(rademachers(4), Statistic::tail_at(1.0), 5000, 1, 500),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate(rademachers(4), Statistic::tail_at(1.0), OracleMode::Marginal),
                    std::invalid_argument);
}

TEST_CASE("degenerate MC tail has zero radius; MC agrees with exact") {
    const OracleEstimate one =
        mc_estimate(SummandSequence::single(Marginal::point_mass(1.0)),
                    Statistic::tail_at(0.5), 1000, 1, 1);
    CHECK(one.value == 1.0);
    CHECK(one.error_radius == 0.0);
    CHECK(one.resolved);

    const OracleEstimate half =
        mc_estimate(rademachers(2), Statistic::tail_at(0.5), 1000000, 3, 4);
    CHECK(std::abs(half.value - 0.5) <= half.error_radius);

    const OracleEstimate norm_mc =
        mc_estimate(rademachers(16), Statistic::p_norm(4.0), 400000, 12, 2);
    CHECK(std::abs(norm_mc.value - std::pow(736.0, 0.25)) <= norm_mc.error_radius);

    // Unresolvable tail: far beyond the support, zero hits.
    const OracleEstimate zero = mc_estimate(rademachers(2), Statistic::tail_at(50.0), 1000, 1, 1);
    CHECK(zero.value == 0.0);
    CHECK_FALSE(zero.resolved);
}

TEST_CASE("exact p-norms are nondecreasing in p") {
    double prev = 0.0;
    for (double p : {1.0, 2.0, 3.0, 4.0, 8.0, 16.0, 40.0}) {
        const double v = exact_estimate(rademachers(8), Statistic::p_norm(p)).value;
        CHECK(v >= prev * (1.0 - 1e-12));
        prev = v;
    }
    CHECK(prev <= 8.0 * (1.0 + 1e-12)); // capped by the range
}

TEST_CASE("levy_check on enumerable cases") {
    const CheckReport single = levy_check(SummandSequence::single(Marginal::rademacher(1.0)), 0.5);
    CHECK(single.pass);
    CHECK(single.values.at("max_tail") == doctest::Approx(1.0));
    CHECK(single.values.at("sum_tail") == doctest::Approx(1.0));

    const CheckReport two = levy_check(rademachers(2), 1.5);
    CHECK(two.pass);
    CHECK(two.values.at("max_tail") == 0.0);
    CHECK(two.values.at("sum_tail") == doctest::Approx(0.5).epsilon(1e-12));

    const CheckReport beyond = levy_check(rademachers(2), 10.0);
    CHECK(beyond.pass);
    CHECK(beyond.lhs == 0.0);
    CHECK(beyond.rhs == 0.0);

    const CheckReport mc = levy_check(rademachers(4), 2.0, OracleMode::MonteCarlo,
                                      McOptions{100000, 21, 2});
    CHECK(mc.pass);

    CHECK_THROWS_AS(levy_check(coins(2), 1.0), std::invalid_argument);
}

TEST_CASE("moment_growth_check records the empirical constant") {
    const CheckReport same = moment_growth_check(rademachers(4), 1.0, 3.0, 3.0);
    CHECK(same.pass);
    CHECK(same.values.at("c_hat") <= 1.0 + 1e-12);

    const CheckReport grow = moment_growth_check(rademachers(16), 1.0, 2.0, 4.0);
    CHECK(grow.pass);
    CHECK(grow.values.at("c_hat") > 0.0);
    CHECK(std::isfinite(grow.values.at("c_hat")));

    // Homogeneity: scaling seq and t together leaves c_hat unchanged.
    const CheckReport scaled_rep = moment_growth_check(scaled(rademachers(16), 3.0), 3.0, 2.0, 4.0);
    CHECK(scaled_rep.values.at("c_hat") ==
          doctest::Approx(grow.values.at("c_hat")).epsilon(1e-10));

    CHECK_THROWS_AS(moment_growth_check(rademachers(4), 1.0, 4.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(moment_growth_check(coins(4), 1.0, 2.0, 4.0), std::invalid_argument);
}

TEST_CASE("decoupling: linear case is an identity in law, bilinear within 25x") {
    const CheckReport k1 =
        decoupling_check(std::vector<double>{1.0, -2.0, 3.0}, Marginal::rademacher(1.0), 2.0,
                         200000, 17);
    CHECK(k1.pass);
    CHECK(k1.values.at("constant") == 3.0);
    CHECK(k1.values.at("lhs_norm") == doctest::Approx(std::sqrt(14.0)).epsilon(0.05));
    CHECK(k1.values.at("ratio") < 3.0);

    std::vector<std::vector<double>> ones(4, std::vector<double>(4, 1.0));
    for (int i = 0; i < 4; ++i) ones[i][i] = 0.0;
    const CheckReport k2 = decoupling_check(ones, Marginal::rademacher(1.0), 2.0, 200000, 18);
    CHECK(k2.pass);
    CHECK(k2.values.at("constant") == 25.0);
    CHECK(k2.values.at("lhs_norm") == doctest::Approx(std::sqrt(24.0)).epsilon(0.05));
    CHECK(k2.values.at("rhs_norm") == doctest::Approx(std::sqrt(12.0)).epsilon(0.05));

    std::vector<std::vector<double>> bad = ones;
    bad[1][1] = 0.5;
    CHECK_THROWS_AS(decoupling_check(bad, Marginal::rademacher(1.0), 2.0, 200000, 18),
                    std::invalid_argument);
    std::vector<std::vector<double>> ragged = {{0.0, 1.0}, {1.0}};
    CHECK_THROWS_AS(decoupling_check(ragged, Marginal::rademacher(1.0), 2.0, 200000, 18),
                    std::invalid_argument);
}

TEST_CASE("product_vs_sum: identity for atoms, consequence against the oracle") {
    const CheckReport three = product_vs_sum_check(coins(3), 2.0);
    CHECK(three.pass);
    CHECK(three.values.at("identity_gap") <= 1e-12);

    const CheckReport pm = product_vs_sum_check(
        SummandSequence::single(Marginal::point_mass(2.0)), 1.0);
    CHECK(pm.pass);
    CHECK(pm.values.at("identity_gap") <= 1e-12);

    const CheckReport zeros = product_vs_sum_check(
        SummandSequence::iid(Marginal::point_mass(0.0), 3), 2.0);
    CHECK(zeros.pass);

    const CheckReport mc = product_vs_sum_check(
        SummandSequence::iid(truncate(Marginal::exponential(1.0), 2.0), 3), 2.0,
        OracleMode::MonteCarlo, McOptions{200000, 31, 2});
    CHECK(mc.pass);

    CHECK_THROWS_AS(product_vs_sum_check(rademachers(2), 2.0), std::invalid_argument);
}
