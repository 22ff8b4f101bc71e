#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sumbounds/latala.hpp"
#include "sumbounds/marginal.hpp"

using namespace sumbounds;

namespace {

const double kE = std::exp(1.0);

SummandSequence mixed_symmetric() {
    return SummandSequence({{Marginal::rademacher(1.0), 2},
                            {Marginal::rademacher(2.0), 1},
                            {Marginal::atoms({{-3.0, 0.05}, {0.0, 0.9}, {3.0, 0.05}}), 1}});
}

SummandSequence coins(long n) {
    return SummandSequence::iid(Marginal::atoms({{0.0, 0.5}, {1.0, 0.5}}), n);
}

} // namespace

TEST_CASE("closed form: single point mass gives a/(e-1) for every p") {
    for (double a : {1.0, 2.5}) {
        for (double p : {1.0, 2.0, 7.5}) {
            const NormResult r = latala_norm(SummandSequence::single(Marginal::point_mass(a)), p);
            CHECK(r.lambda_star == doctest::Approx(a / (kE - 1.0)).epsilon(1e-7));
            CHECK(r.product_at_lambda == doctest::Approx(std::exp(p)).epsilon(1e-5));
        }
    }
}

TEST_CASE("closed form: n i.i.d. Rademacher at p=2 gives (e^{2/n}-1)^{-1/2}") {
    for (long n : {1L, 2L, 4L, 16L}) {
        const NormResult r = latala_norm(SummandSequence::iid(Marginal::rademacher(1.0), n), 2.0);
        const double expected = 1.0 / std::sqrt(std::expm1(2.0 / static_cast<double>(n)));
        CHECK(r.lambda_star == doctest::Approx(expected).epsilon(1e-7));
    }
    const NormResult one = latala_norm(SummandSequence::single(Marginal::rademacher(1.0)), 2.0);
    CHECK(one.lambda_star == doctest::Approx(0.3951).epsilon(1e-3));
}

TEST_CASE("degenerate sequence has norm zero and product one") {
    const NormResult r = latala_norm(SummandSequence::iid(Marginal::point_mass(0.0), 5), 3.0);
    CHECK(r.lambda_star == 0.0);
    CHECK(r.product_at_lambda == 1.0);
    CHECK(r.iterations == 0);
}

TEST_CASE("norm works for continuous and censored families") {
    const SummandSequence seq = SummandSequence(
        {{Marginal::uniform_symmetric(1.0), 3}, {truncate(Marginal::exponential(1.0), 2.0), 2}});
    const NormResult r = latala_norm(seq, 2.0);
    CHECK(r.lambda_star > 0.0);
    CHECK(r.product_at_lambda == doctest::Approx(std::exp(2.0)).epsilon(1e-5));
}

TEST_CASE("scaling homogeneity within solver tolerance") {
    const double c = 3.7;
    for (double p : {1.0, 2.0, 6.0}) {
        const SummandSequence base = coins(4);
        const double lam = latala_norm(base, p).lambda_star;
        const double lam_scaled = latala_norm(scaled(base, c), p).lambda_star;
        CHECK(lam_scaled == doctest::Approx(c * lam).epsilon(2e-9 + 1e-12));
    }
    for (double p : {2.0, 8.0}) {
        const SummandSequence base = mixed_symmetric();
        const double lam = latala_norm(base, p).lambda_star;
        const double lam_scaled = latala_norm(scaled(base, c), p).lambda_star;
        CHECK(lam_scaled == doctest::Approx(c * lam).epsilon(2e-9 + 1e-12));
    }
}

TEST_CASE("lambda_star is nondecreasing in p") {
    const std::vector<double> sym_grid = {2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 20.0};
    double prev = 0.0;
    for (double p : sym_grid) {
        const double lam = latala_norm(mixed_symmetric(), p).lambda_star;
        CHECK(lam >= prev * (1.0 - 2e-9));
        prev = lam;
    }
    const std::vector<double> nn_grid = {1.0, 2.0, 3.0, 4.0, 6.0, 8.0};
    prev = 0.0;
    for (double p : nn_grid) {
        const double lam = latala_norm(coins(8), p).lambda_star;
        CHECK(lam >= prev * (1.0 - 2e-9));
        prev = lam;
    }
}

TEST_CASE("f_series values and domain") {
    CHECK(f_series(0.0) == 1.0);
    CHECK(f_series(0.1) == doctest::Approx(1.536598393402038).epsilon(1e-12));
    CHECK(f_series(0.18) > kE);
    CHECK_THROWS_AS(f_series(-0.01), std::domain_error);
    CHECK_THROWS_AS(f_series(0.1801), std::domain_error);
}

TEST_CASE("kappa solves f = e and beats the classical symmetric constant") {
    const double k = kappa();
    CHECK(k == doctest::Approx(0.1549065968860125598).epsilon(1e-11));
    CHECK(std::abs(f_series(k) - kE) < 1e-10);
    CHECK(k > 0.1539);
    CHECK(k < 0.1559);
    CHECK(latala_lower_constant() ==
          doctest::Approx(0.1162720789674148149).epsilon(1e-14));
    CHECK(k > latala_lower_constant());
}

TEST_CASE("regime constants") {
    CHECK(nonnegative_upper_constant(1.0) == doctest::Approx(kE - 1.0).epsilon(1e-12));
    CHECK(nonnegative_upper_constant(2.0) ==
          doctest::Approx(std::sqrt(std::expm1(2.0))).epsilon(1e-12));
    CHECK(nonnegative_upper_constant(200.0) == doctest::Approx(kE).epsilon(1e-10));
}

TEST_CASE("moment_bounds picks the regime and rejects bad input") {
    const MomentBounds sym = moment_bounds(mixed_symmetric(), 2.0);
    CHECK(sym.regime == Regime::Symmetric);
    CHECK(sym.lower_constant == doctest::Approx(latala_lower_constant()).epsilon(1e-14));
    CHECK(sym.upper_constant == doctest::Approx(kE).epsilon(1e-14));
    CHECK(sym.lower == doctest::Approx(sym.lower_constant * sym.norm.lambda_star));
    CHECK(sym.upper == doctest::Approx(sym.upper_constant * sym.norm.lambda_star));
    CHECK(sym.lower < sym.upper);

    const MomentBounds nn = moment_bounds(coins(3), 1.0);
    CHECK(nn.regime == Regime::Nonnegative);
    CHECK(nn.lower_constant == doctest::Approx(kappa()).epsilon(1e-13));
    CHECK(nn.upper_constant == doctest::Approx(kE - 1.0).epsilon(1e-12));

    // Symmetric wins when both regimes apply (point mass at zero).
    CHECK(moment_bounds(SummandSequence::single(Marginal::point_mass(0.0)), 2.0).regime ==
          Regime::Symmetric);

    CHECK_THROWS_AS(moment_bounds(mixed_symmetric(), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(
        moment_bounds(SummandSequence({{Marginal::atoms({{-1.0, 0.3}, {1.0, 0.7}}), 1}}), 2.0),
        std::invalid_argument);
}

TEST_CASE("bisection bracket is honest") {
    const NormResult r = latala_norm(mixed_symmetric(), 4.0);
    CHECK(r.bracket_lo <= r.lambda_star);
    CHECK(r.lambda_star <= r.bracket_hi);
    CHECK(r.bracket_hi - r.bracket_lo <= 1e-9 * r.bracket_hi + 1e-30);
    CHECK(r.iterations > 0);
}
