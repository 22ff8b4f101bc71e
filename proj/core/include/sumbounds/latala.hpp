#ifndef SUMBOUNDS_LATALA_HPP
#define SUMBOUNDS_LATALA_HPP

#include "sumbounds/marginal.hpp"

namespace sumbounds {

struct NormOptions {
    double rel_tol = 1e-9;     // relative width of the final bisection bracket
    int max_bracket_steps = 200;
};

/// Solution of prod_n E|1 + X_n/lambda|^p = e^p.
struct NormResult {
    double lambda_star = 0.0;
    double p = 0.0;
    double bracket_lo = 0.0;        // final bracket, product >= e^p here
    double bracket_hi = 0.0;        // ... and <= e^p here
    int iterations = 0;             // bisection steps after bracketing
    double product_at_lambda = 1.0; // prod_n E|1 + X_n/lambda_star|^p
};

/// |||(X_n)|||_p = inf { lambda > 0 : prod_n E|1 + X_n/lambda|^p <= e^p }.
///
/// The product is evaluated in log domain; the map lambda -> log-product is
/// nonincreasing, diverges as lambda -> 0 for any sequence that is not a.s. 0,
/// and tends to 0 as lambda -> inf, so a doubling/halving search brackets the
/// crossing and bisection pins it to rel_tol. An all-zero sequence yields
/// lambda_star = 0. Requires finite p >= 1.
NormResult latala_norm(const SummandSequence& seq, double p, const NormOptions& opts = {});

/// Two-sided estimate of ||X_1 + ... + X_n||_p via lambda_star.
struct MomentBounds {
    double lower = 0.0;
    double upper = 0.0;
    Regime regime = Regime::Symmetric;
    double p = 0.0;
    double lower_constant = 0.0; // lower = lower_constant * lambda_star
    double upper_constant = 0.0; // upper = upper_constant * lambda_star
    NormResult norm;
};

/// Moment sandwich lower_constant*lambda_star <= ||S||_p <=
/// upper_constant*lambda_star. Symmetric summands need p >= 2 and use
/// constants ((e-1)/(2e^2), e); nonnegative summands need p >= 1 and use
/// (kappa, (e^p-1)^(1/p)). A sequence qualifying for both regimes (only
/// possible when every summand is 0 a.s.) resolves to whichever regime
/// admits the given p. Throws std::invalid_argument when neither applies.
MomentBounds moment_bounds(const SummandSequence& seq, double p, const NormOptions& opts = {});

/// f(x) = sum_{k>=0} (2k+1)^k x^k / k!, convergent for |x| < 1/(2e).
/// Summation stops once the geometric tail bound drops below 1e-14 of the
/// partial sum. Requires 0 <= x and 2*e*x < 0.999.
double f_series(double x);

/// Unique root of f(x) = e in (0, 0.18); bisected to 1e-12 and cached.
double kappa();

/// (e-1)/(2e^2), the symmetric-regime lower constant.
double latala_lower_constant();

/// (e^p - 1)^(1/p), the nonnegative-regime upper constant, evaluated in a
/// form that never overflows: exp(1 + log1p(-exp(-p))/p).
double nonnegative_upper_constant(double p);

} // namespace sumbounds

#endif
