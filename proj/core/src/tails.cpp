#include "sumbounds/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sumbounds/latala.hpp"
#include "sumbounds/numeric.hpp"

namespace sumbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double regime_p_min(const SummandSequence& seq) {
    if (seq.all_symmetric()) return 2.0;
    if (seq.all_nonnegative()) return 1.0;
    throw std::invalid_argument("p_t: symmetric or nonnegative regime required");
}

void check_threshold(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("t must be a positive finite real");
}

void check_constants(const BoundConstants& c) {
    if (!(c.c_lower > 0.0) || c.c_lower > 1.0)
        throw std::invalid_argument("BoundConstants: c_lower must lie in (0, 1]");
    if (!(c.C_upper >= 1.0))
        throw std::invalid_argument("BoundConstants: C_upper must be >= 1");
    if (!(c.alpha > 0.0) || !(c.delta > 0.0))
        throw std::invalid_argument("BoundConstants: alpha and delta must be positive");
}

// One deterministic batch of log|s_n(t)| draws, partitioned and substreamed
// exactly like mc_estimate so (seed, samples, workers) fixes the sample.
std::shared_ptr<std::vector<double>> draw_log_abs_sums(const SummandSequence& seq,
                                                       const McOptions& mc) {
    if (mc.samples < 1000)
        throw std::invalid_argument("make_norm_oracle: samples must be >= 1000");
    if (mc.workers < 1 || mc.workers > 256)
        throw std::invalid_argument("make_norm_oracle: workers must be in [1, 256]");

    auto logs = std::make_shared<std::vector<double>>(static_cast<std::size_t>(mc.samples));
    const long base = mc.samples / mc.workers;
    const long extra = mc.samples % mc.workers;

    const auto body = [&](int w) {
        RngStream rng = RngStream::substream(mc.seed, static_cast<std::uint64_t>(w));
        const long m = base + (w < extra ? 1 : 0);
        long offset = static_cast<long>(w) * base + std::min<long>(w, extra);
        for (long i = 0; i < m; ++i) {
            double sum = 0.0;
            for (const auto& e : seq.entries())
                for (long c = 0; c < e.count; ++c) sum += sample(e.marginal, rng);
            const double a = std::abs(sum);
            (*logs)[static_cast<std::size_t>(offset + i)] = a > 0.0 ? std::log(a) : kNegInf;
        }
    };

    if (mc.workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(mc.workers));
        for (int w = 0; w < mc.workers; ++w) pool.emplace_back(body, w);
        for (std::thread& th : pool) th.join();
    }
    return logs;
}

} // namespace

double p_t(const SummandSequence& seq, double t, const NormOracle& norm_oracle, double p_max) {
    check_threshold(t);
    const double p_min = regime_p_min(seq);
    if (!(p_max > p_min) || !std::isfinite(p_max))
        throw std::invalid_argument("p_t: p_max must be finite and exceed the regime's p_min");
    if (2.0 * t < truncated_sum_l2(seq, t))
        throw std::domain_error("p_t: t lies below the small-t threshold 2t >= ||s_n(t)||_2");

    const double target = 2.0 * t;
    if (norm_oracle(p_min) >= target) return p_min;
    if (norm_oracle(p_max) < target) return kInf;

    double lo = p_min, hi = p_max; // norm(lo) < target <= norm(hi)
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (norm_oracle(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

NormOracle make_norm_oracle(const SummandSequence& seq, double t, OracleMode mode,
                            const McOptions& mc) {
    check_threshold(t);
    const SummandSequence trunc = truncate(seq, t);
    switch (mode) {
    case OracleMode::Exact: {
        auto dist = std::make_shared<Marginal>(exact_sum_distribution(trunc));
        return [dist](double p) { return atom_p_norm(*dist, p); };
    }
    case OracleMode::MonteCarlo: {
        auto logs = draw_log_abs_sums(trunc, mc);
        const double ln_n = std::log(static_cast<double>(mc.samples));
        return [logs, ln_n](double p) {
            LogSumExpAccumulator acc;
            for (const double lv : *logs) acc.add(lv == kNegInf ? kNegInf : p * lv);
            const double lm = acc.log_sum() - ln_n;
            return lm == kNegInf ? 0.0 : std::exp(lm / p);
        };
    }
    case OracleMode::Marginal:
        return [trunc](double p) { return latala_norm(trunc, p).lambda_star; };
    }
    throw std::logic_error("make_norm_oracle: unknown oracle mode");
}

MaxTailBounds max_tail_bounds(const SummandSequence& seq, double u) {
    if (!(u >= 0.0))
        throw std::invalid_argument("max_tail_bounds: u must be >= 0");
    const double T = sum_tails(seq, u);
    MaxTailBounds b;
    b.lower = T / (1.0 + T);
    b.upper = std::min(1.0, 2.0 * T / (1.0 + T));
    b.exact = max_abs_tail(seq, u);
    return b;
}

TailReport tail_bounds(const SummandSequence& seq, double t, const BoundConstants& constants,
                       OracleMode mode, const McOptions& mc, bool allow_nonnegative) {
    check_threshold(t);
    check_constants(constants);
    if (!seq.all_symmetric() && !(allow_nonnegative && seq.all_nonnegative()))
        throw std::invalid_argument(
            "tail_bounds: symmetric summands required (nonnegative needs allow_nonnegative)");

    TailReport r;
    r.t = t;
    r.max_tail_sandwich = max_tail_bounds(seq, t);
    r.max_tail = *r.max_tail_sandwich.exact;

    if (t <= 0.5 * truncated_sum_l2(seq, t)) {
        // small-t regime: the tail is bounded below by the universal
        // constant alone; p_t is not defined here
        r.small_t_regime = true;
        r.lower_bound = constants.c_lower;
        r.upper_bound = 1.0;
        return r;
    }

    const double pt = p_t(seq, t, make_norm_oracle(seq, t, mode, mc));
    r.p_t = pt;
    const double exp_lower = std::exp(-constants.alpha * pt); // 0 at pt = +inf
    const double exp_upper = std::exp(-constants.delta * pt);

    // a claimed lower bound must under-estimate P(X*>t), an upper bound must
    // over-estimate it; with the exact product formula both collapse to it
    const double mt_low = r.max_tail_sandwich.exact ? *r.max_tail_sandwich.exact
                                                    : r.max_tail_sandwich.lower;
    const double mt_up = r.max_tail_sandwich.exact ? *r.max_tail_sandwich.exact
                                                   : r.max_tail_sandwich.upper;
    r.components.lower_max_tail = constants.c_lower * mt_low;
    r.components.lower_exp = constants.c_lower * exp_lower;
    r.components.upper_max_tail = constants.C_upper * mt_up;
    r.components.upper_exp = constants.C_upper * exp_upper;
    r.lower_bound = std::min(1.0, r.components.lower_max_tail + r.components.lower_exp);
    r.upper_bound = std::min(1.0, r.components.upper_max_tail + r.components.upper_exp);
    return r;
}

double paley_zygmund(double mean, double second_moment, double theta) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("paley_zygmund: mean must be a finite real >= 0");
    if (!(second_moment > 0.0) || !std::isfinite(second_moment))
        throw std::invalid_argument("paley_zygmund: second_moment must be a positive finite real");
    if (second_moment < mean * mean * (1.0 - 1e-12))
        throw std::invalid_argument("paley_zygmund: need second_moment >= mean^2");
    if (!(theta > 0.0) || !(theta < 1.0))
        throw std::invalid_argument("paley_zygmund: theta must lie in (0, 1)");
    const double bound = (1.0 - theta) * (1.0 - theta) * mean * mean / second_moment;
    return std::clamp(bound, 0.0, 1.0);
}

} // namespace sumbounds
