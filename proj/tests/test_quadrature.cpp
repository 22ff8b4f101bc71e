#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sumbounds/quadrature.hpp"

using namespace sumbounds;

TEST_CASE("polynomial, exponential and trig integrals") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sharply peaked integrand (Runge) resolves adaptively") {
    const double exact = 2.0 / 5.0 * std::atan(5.0);
    CHECK(adaptive_simpson([](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0) ==
          doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("degenerate interval integrates to zero") {
    CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 2.0, 2.0) == 0.0);
}

TEST_CASE("non-integrable endpoint singularity throws at the depth cap") {
    QuadratureOptions opts;
    opts.max_depth = 30;
    CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opts),
                    std::runtime_error);
}
