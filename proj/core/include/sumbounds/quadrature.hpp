#ifndef SUMBOUNDS_QUADRATURE_HPP
#define SUMBOUNDS_QUADRATURE_HPP

#include <functional>

namespace sumbounds {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    int max_depth = 60;
};

/// Adaptive Simpson integration of f over the finite interval [a, b].
///
/// Panels are refined until the usual Richardson estimate meets the local
/// share of rel_tol * |whole-interval estimate|. A panel that still fails
/// its tolerance at max_depth throws std::runtime_error; that only happens
/// for genuinely pathological integrands (non-integrable behavior, NaNs).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts = {});

} // namespace sumbounds

#endif
