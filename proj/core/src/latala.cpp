#include "sumbounds/latala.hpp"

#include <cmath>
#include <stdexcept>

namespace sumbounds {

namespace {

const double kE = std::exp(1.0);

void check_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("p must be a finite real >= 1");
}

// log prod_n E|1 + X_n/lambda|^p, nonincreasing in lambda.
double log_product(const SummandSequence& seq, double lambda, double p) {
    double s = 0.0;
    for (const auto& e : seq.entries())
        s += static_cast<double>(e.count) * log_orlicz_term(e.marginal, lambda, p);
    return s;
}

} // namespace

NormResult latala_norm(const SummandSequence& seq, double p, const NormOptions& opts) {
    check_p(p);
    if (!(opts.rel_tol > 0.0))
        throw std::invalid_argument("latala_norm: rel_tol must be positive");

    NormResult res;
    res.p = p;
    if (seq.all_degenerate_zero())
        return res; // product is identically 1, the infimum is 0

    // g(lambda) = log-product - p; we need the crossing g = 0.
    const auto g = [&](double lambda) { return log_product(seq, lambda, p) - p; };

    double lam = sum_abs_means(seq) / (kE - 1.0);
    if (!(lam > 0.0) || !std::isfinite(lam)) lam = 1.0;

    double lo = 0.0, hi = 0.0;
    double g_lam = g(lam);
    if (g_lam > 0.0) {
        lo = lam;
        for (int i = 0;; ++i) {
            if (i >= opts.max_bracket_steps)
                throw std::runtime_error("latala_norm: bracketing failed (product never drops)");
            lam *= 2.0;
            if (g(lam) <= 0.0) { hi = lam; break; }
            lo = lam;
        }
    } else {
        hi = lam;
        for (int i = 0;; ++i) {
            if (i >= opts.max_bracket_steps)
                throw std::runtime_error("latala_norm: bracketing failed (product never exceeds e^p)");
            lam *= 0.5;
            if (g(lam) > 0.0) { lo = lam; break; }
            hi = lam;
        }
    }

    int iters = 0;
    while (hi - lo > opts.rel_tol * hi + 1e-30) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        ++iters;
        if (iters > 400)
            throw std::runtime_error("latala_norm: bisection failed to converge");
    }

    res.lambda_star = 0.5 * (lo + hi);
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.iterations = iters;
    res.product_at_lambda = std::exp(log_product(seq, res.lambda_star, p));
    return res;
}

double f_series(double x) {
    if (!(x >= 0.0) || !(x <= 0.18))
        throw std::domain_error("f_series: x must lie in [0, 0.18], inside the radius 1/(2e)");
    const double r_inf = 2.0 * kE * x; // limit of consecutive term ratios, < 0.979 on the domain

    double sum = 1.0;  // k = 0 term
    double term = 1.0;
    for (int k = 0; k < 20000; ++k) {
        // t_{k+1}/t_k = (2k+3)^{k+1} / ((2k+1)^k (k+1)) * x; the ratios
        // increase monotonically to 2ex, so r_inf bounds the whole tail.
        const double ratio =
            (2.0 * k + 3.0) * std::exp(k * std::log1p(2.0 / (2.0 * k + 1.0))) / (k + 1.0) * x;
        term *= ratio;
        sum += term;
        const double tail_bound = term * r_inf / (1.0 - r_inf);
        if (term < 1e-16 * sum && tail_bound < 1e-15 * sum)
            return sum;
    }
    throw std::runtime_error("f_series: no convergence within term budget");
}

double kappa() {
    static const double value = [] {
        double lo = 0.0;   // f(0) = 1 < e
        double hi = 0.18;  // f(0.18) > 7 > e
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            if (f_series(mid) < kE)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return value;
}

double latala_lower_constant() {
    return (kE - 1.0) / (2.0 * kE * kE);
}

double nonnegative_upper_constant(double p) {
    check_p(p);
    return std::exp(1.0 + std::log1p(-std::exp(-p)) / p);
}

MomentBounds moment_bounds(const SummandSequence& seq, double p, const NormOptions& opts) {
    check_p(p);
    const bool sym_ok = seq.all_symmetric() && p >= 2.0;
    const bool nn_ok = seq.all_nonnegative();
    if (!sym_ok && !nn_ok)
        throw std::invalid_argument(
            "moment_bounds: symmetric summands need p >= 2, nonnegative summands need p >= 1");

    MomentBounds b;
    b.p = p;
    b.norm = latala_norm(seq, p, opts);
    if (sym_ok) {
        b.regime = Regime::Symmetric;
        b.lower_constant = latala_lower_constant();
        b.upper_constant = kE;
    } else {
        b.regime = Regime::Nonnegative;
        b.lower_constant = kappa();
        b.upper_constant = nonnegative_upper_constant(p);
    }
    b.lower = b.lower_constant * b.norm.lambda_star;
    b.upper = b.upper_constant * b.norm.lambda_star;
    return b;
}

} // namespace sumbounds
