#include "sumbounds/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sumbounds/corpus.hpp"
#include "sumbounds/latala.hpp"

namespace sumbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

McOptions mc_for(const VerifyOptions& o, std::uint64_t salt) {
    McOptions mc;
    mc.samples = o.samples;
    mc.seed = o.seed + 0x100000001B3ULL * salt; // distinct stream per call site
    mc.workers = o.workers;
    return mc;
}

OracleEstimate member_estimate(const CorpusMember& m, const Statistic& stat,
                               const VerifyOptions& o, std::uint64_t salt) {
    if (m.mode == OracleMode::Exact) return exact_estimate(m.seq, stat);
    const McOptions mc = mc_for(o, salt);
    return mc_estimate(m.seq, stat, mc.samples, mc.seed, mc.workers);
}

void constants_row(std::vector<CheckReport>& rows) {
    const double k = kappa();
    const double fk = f_series(k);
    const double lat = latala_lower_constant();
    const double e = std::exp(1.0);
    CheckReport r;
    r.name = "constants";
    r.pass = k >= 0.1539 && k <= 0.1559 && std::abs(fk - e) <= 1e-10 && lat >= 0.1152 &&
             lat <= 0.1172 && k > lat;
    r.lhs = k;
    r.rhs = lat;
    r.slack = std::min({k - 0.1539, 0.1559 - k, 1e-10 - std::abs(fk - e)});
    r.values = {{"kappa", k}, {"f_of_kappa", fk}, {"latala_constant", lat}, {"ratio", k / lat}};
    rows.push_back(std::move(r));
}

void closed_form_rows(std::vector<CheckReport>& rows) {
    const double e = std::exp(1.0);
    {
        CheckReport r;
        r.name = "norm_closed_form_point_mass";
        double worst = 0.0;
        for (const double a : {1.0, 2.5})
            for (const double p : {1.0, 2.0, 7.5}) {
                const double want = a / (e - 1.0);
                const double got =
                    latala_norm(SummandSequence::single(Marginal::point_mass(a)), p).lambda_star;
                worst = std::max(worst, std::abs(got - want) / want);
            }
        r.pass = worst <= 1e-7;
        r.lhs = worst;
        r.rhs = 1e-7;
        r.slack = 1e-7 - worst;
        r.values = {{"worst_rel_err", worst}};
        rows.push_back(std::move(r));
    }
    {
        CheckReport r;
        r.name = "norm_closed_form_rademacher_p2";
        double worst = 0.0;
        for (const long n : {1L, 2L, 4L, 16L}) {
            const double want = 1.0 / std::sqrt(std::expm1(2.0 / static_cast<double>(n)));
            const double got =
                latala_norm(SummandSequence::iid(Marginal::rademacher(1.0), n), 2.0).lambda_star;
            worst = std::max(worst, std::abs(got - want) / want);
        }
        r.pass = worst <= 1e-7;
        r.lhs = worst;
        r.rhs = 1e-7;
        r.slack = 1e-7 - worst;
        r.values = {{"worst_rel_err", worst}};
        rows.push_back(std::move(r));
    }
}

struct NonnegSweepStats {
    double min_ratio = kInf; // min oracle ||S||_p / lambda_star
    double max_lambda = 0.0;
};

CheckReport sandwich_row(std::string name, const CorpusMember& m, const std::vector<double>& grid,
                         const VerifyOptions& o, std::uint64_t salt, NonnegSweepStats* stats) {
    CheckReport r;
    r.name = std::move(name);
    r.pass = true;
    r.slack = kInf;
    double worst_lower = kInf, worst_upper = kInf;
    std::uint64_t idx = 0;
    for (const double p : grid) {
        const MomentBounds mb = moment_bounds(m.seq, p);
        const OracleEstimate est = member_estimate(m, Statistic::p_norm(p), o, salt + idx++);
        // relative 1e-9 fudge absorbs boundary-equality rounding (e.g. a
        // single point mass attains the nonnegative upper bound exactly)
        const double lower_slack = est.value + est.error_radius - mb.lower * (1.0 - 1e-9);
        const double upper_slack = mb.upper * (1.0 + 1e-9) + est.error_radius - est.value;
        worst_lower = std::min(worst_lower, lower_slack);
        worst_upper = std::min(worst_upper, upper_slack);
        if (lower_slack < 0.0 || upper_slack < 0.0) r.pass = false;
        if (stats && mb.norm.lambda_star > 0.0) {
            stats->min_ratio = std::min(stats->min_ratio, est.value / mb.norm.lambda_star);
            stats->max_lambda = std::max(stats->max_lambda, mb.norm.lambda_star);
        }
    }
    r.slack = std::min(worst_lower, worst_upper);
    r.values = {{"points", static_cast<double>(grid.size())},
                {"worst_lower_slack", worst_lower},
                {"worst_upper_slack", worst_upper}};
    return r;
}

struct AlphaData {
    double alpha_hat = 0.0;
    bool feasible = true;
    long constraining = 0;
    double min_small_t_prob = 1.0;
};

// One symmetric member's walk over its t-grid: the Chebyshev upper bound,
// the small-t quarter bound, and the alpha constraints of the lower bound.
void tail_rows(const CorpusMember& m, const VerifyOptions& o, std::uint64_t salt,
               std::vector<CheckReport>& rows, AlphaData& ad) {
    CheckReport upper_row{"tail_upper/" + m.name, true, 0, 0, kInf, {}};
    CheckReport small_row{"small_t_lower/" + m.name, true, 0, 0, kInf, {}};
    CheckReport lower_row{"tail_lower_alpha/" + m.name, true, 0, 0, kInf, {}};
    long upper_pts = 0, small_pts = 0, constrain_pts = 0;

    std::uint64_t idx = 0;
    for (const double t : m.t_grid) {
        const std::uint64_t s0 = salt + 8 * idx++;
        const double pstar = max_abs_tail(m.seq, t); // exact, closed form

        if (t <= 0.5 * truncated_sum_l2(m.seq, t)) {
            const OracleEstimate at_t = member_estimate(m, Statistic::tail_at(t), o, s0);
            const double conf_lower = at_t.value - at_t.error_radius;
            ad.min_small_t_prob = std::min(ad.min_small_t_prob, conf_lower);
            small_row.slack = std::min(small_row.slack, conf_lower - 0.25);
            if (conf_lower < 0.25) small_row.pass = false;
            ++small_pts;
            continue;
        }

        const double pt =
            p_t(m.seq, t, make_norm_oracle(m.seq, t, m.mode, mc_for(o, s0 + 1)));

        // P(|S| > 4t) <= P(X* > t) + 2^{-p_t}, with oracle error as slack
        const OracleEstimate at_4t = member_estimate(m, Statistic::tail_at(4.0 * t), o, s0 + 2);
        const double rhs = pstar + std::exp(-std::numbers::ln2 * pt);
        const double upper_slack = rhs + at_4t.error_radius + 1e-12 - at_4t.value;
        upper_row.slack = std::min(upper_row.slack, upper_slack);
        if (upper_slack < 0.0) upper_row.pass = false;
        ++upper_pts;

        // P(|S| > t) >= (P(X* > t) + exp(-alpha p_t))/4 constrains alpha via
        // exp(-alpha p_t) <= margin := 4 P(|S|>t) - P(X*>t)
        const OracleEstimate at_t = member_estimate(m, Statistic::tail_at(t), o, s0 + 3);
        const double margin = 4.0 * (at_t.value - at_t.error_radius) - pstar;
        lower_row.slack = std::min(lower_row.slack, margin);
        if (std::isfinite(pt)) {
            if (margin <= 0.0) {
                lower_row.pass = false;
                ad.feasible = false;
            } else if (margin < 1.0) {
                ad.alpha_hat = std::max(ad.alpha_hat, -std::log(margin) / pt);
                ++constrain_pts;
            }
        } else if (margin < -1e-12) { // p_t = inf leaves only 4P >= P*
            lower_row.pass = false;
            ad.feasible = false;
        }
    }

    if (upper_pts == 0) upper_row.slack = 0.0;
    if (small_pts == 0) small_row.slack = 0.0;
    if (!std::isfinite(lower_row.slack)) lower_row.slack = 0.0;
    upper_row.values = {{"points", static_cast<double>(upper_pts)}};
    small_row.values = {{"points", static_cast<double>(small_pts)},
                        {"min_prob", ad.min_small_t_prob}};
    lower_row.values = {{"constraining_points", static_cast<double>(constrain_pts)}};
    ad.constraining += constrain_pts;
    rows.push_back(std::move(upper_row));
    rows.push_back(std::move(small_row));
    rows.push_back(std::move(lower_row));
}

CheckReport max_tail_row(const CorpusMember& m) {
    CheckReport r;
    r.name = "max_tail_sandwich/" + m.name;
    r.pass = true;
    r.slack = kInf;
    for (const double u : m.u_grid) {
        const MaxTailBounds b = max_tail_bounds(m.seq, u);
        const double exact = *b.exact;
        const double sl = std::min(exact - b.lower, b.upper - exact) + 1e-12;
        r.slack = std::min(r.slack, sl);
        if (sl < 0.0) r.pass = false;
    }
    r.values = {{"points", static_cast<double>(m.u_grid.size())}};
    return r;
}

CheckReport paley_spot_row() {
    const double b1 = paley_zygmund(1.0, 1.0, 0.5); // Z == 1
    const double b2 = paley_zygmund(0.0, 1.0, 0.5); // zero mean
    const double b3 = paley_zygmund(1.0, 2.0, 0.5); // Z in {0,2} fair
    CheckReport r;
    r.name = "paley_zygmund_spot";
    r.pass = std::abs(b1 - 0.25) <= 1e-15 && b2 == 0.0 && std::abs(b3 - 0.125) <= 1e-15 &&
             b1 <= 1.0 && b3 <= 0.5; // exact P(Z > EZ/2) are 1 and 1/2
    r.lhs = b3;
    r.rhs = 0.5;
    r.slack = 0.5 - b3;
    r.values = {{"degenerate", b1}, {"zero_mean", b2}, {"two_point", b3}};
    return r;
}

} // namespace

VerifyResult run_verify(const VerifyOptions& o) {
    if (o.samples < 1000)
        throw std::invalid_argument("run_verify: samples must be >= 1000");
    if (o.workers < 1 || o.workers > 256)
        throw std::invalid_argument("run_verify: workers must be in [1, 256]");

    VerifyResult res;
    auto& rows = res.checks;
    constants_row(rows);
    closed_form_rows(rows);

    const auto& corpus = builtin_corpus();
    NonnegSweepStats nn;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const CorpusMember& m = corpus[i];
        const std::uint64_t salt = 1000 * (i + 1);
        if (m.seq.all_symmetric())
            rows.push_back(
                sandwich_row("sandwich_symmetric/" + m.name, m, symmetric_p_grid(), o, salt, nullptr));
        if (m.seq.all_nonnegative())
            rows.push_back(sandwich_row("sandwich_nonnegative/" + m.name, m, nonnegative_p_grid(),
                                        o, salt + 100, &nn));
    }

    {
        // the improved lower constant is in force: valid corpus-wide and
        // strictly above the older one by a measurable gap
        CheckReport r;
        r.name = "kappa_improvement";
        const double k = kappa();
        const double lat = latala_lower_constant();
        const double gap = (k - lat) * nn.max_lambda;
        r.pass = nn.max_lambda > 0.0 && gap > 1e-6 && nn.min_ratio >= k * (1.0 - 1e-9);
        r.lhs = nn.min_ratio;
        r.rhs = k;
        r.slack = nn.min_ratio - k;
        r.values = {{"min_norm_to_lambda_ratio", nn.min_ratio},
                    {"max_lambda", nn.max_lambda},
                    {"bound_gap_at_witness", gap}};
        rows.push_back(std::move(r));
    }

    AlphaData ad;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const CorpusMember& m = corpus[i];
        if (m.seq.all_symmetric()) tail_rows(m, o, 1000 * (i + 1) + 200, rows, ad);
    }

    for (const CorpusMember& m : corpus) rows.push_back(max_tail_row(m));

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const CorpusMember& m = corpus[i];
        if (!m.seq.all_symmetric()) continue;
        const std::uint64_t salt = 1000 * (i + 1) + 300;
        for (const std::size_t ti : {std::size_t{1}, std::size_t{3}}) {
            CheckReport r = levy_check(m.seq, m.t_grid[ti], m.mode, mc_for(o, salt + ti));
            r.name = "levy/" + m.name + "/t" + std::to_string(ti);
            rows.push_back(std::move(r));
        }
    }

    res.max_c_hat = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const CorpusMember& m = corpus[i];
        if (!m.seq.all_symmetric()) continue;
        const std::uint64_t salt = 1000 * (i + 1) + 400;
        const double t = m.t_grid[2];
        const std::pair<double, double> pqs[] = {{2, 4}, {3, 3}, {2, 8}};
        std::uint64_t k = 0;
        for (const auto& [p, q] : pqs) {
            CheckReport r = moment_growth_check(m.seq, t, p, q, m.mode, mc_for(o, salt + k++));
            r.name = "moment_growth/" + m.name + "/q" + std::to_string(static_cast<int>(q)) +
                     "p" + std::to_string(static_cast<int>(p));
            res.max_c_hat = std::max(res.max_c_hat, r.values.at("c_hat"));
            rows.push_back(std::move(r));
        }
    }
    {
        CheckReport r;
        r.name = "moment_growth_max";
        r.pass = std::isfinite(res.max_c_hat) && res.max_c_hat >= 0.0;
        r.lhs = res.max_c_hat;
        r.rhs = kInf;
        r.slack = 0.0;
        r.values = {{"max_c_hat", res.max_c_hat}};
        rows.push_back(std::move(r));
    }

    rows.push_back(paley_spot_row());

    rows.push_back(decoupling_check(std::vector<double>{1.0, -2.0, 3.0}, Marginal::rademacher(1.0),
                                    2.0, o.samples, mc_for(o, 777).seed));
    {
        std::vector<std::vector<double>> ones(4, std::vector<double>(4, 1.0));
        for (int i = 0; i < 4; ++i) ones[i][i] = 0.0;
        rows.push_back(
            decoupling_check(ones, Marginal::rademacher(1.0), 2.0, o.samples, mc_for(o, 778).seed));
    }

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const CorpusMember& m = corpus[i];
        if (!m.seq.all_nonnegative()) continue;
        const std::uint64_t salt = 1000 * (i + 1) + 500;
        std::uint64_t k = 0;
        for (const double p : {1.0, 2.0, 3.0}) {
            CheckReport r = product_vs_sum_check(m.seq, p, m.mode, mc_for(o, salt + k++));
            r.name = "product_vs_sum/" + m.name + "/p" + std::to_string(static_cast<int>(p));
            rows.push_back(std::move(r));
        }
    }

    res.alpha_hat = ad.alpha_hat;
    res.min_small_t_prob = ad.min_small_t_prob;
    {
        CheckReport r;
        r.name = "alpha_calibration";
        r.pass = ad.feasible && ad.alpha_hat >= 0.0;
        r.lhs = ad.alpha_hat;
        r.rhs = kInf;
        r.slack = 0.0;
        r.values = {{"alpha_hat", ad.alpha_hat},
                    {"constraining_points", static_cast<double>(ad.constraining)},
                    {"min_small_t_prob", ad.min_small_t_prob}};
        rows.push_back(std::move(r));
    }
    {
        CheckReport r;
        r.name = "alpha_default_valid";
        r.lhs = ad.alpha_hat;
        r.rhs = o.constants.alpha;
        r.slack = o.constants.alpha - ad.alpha_hat;
        r.pass = r.slack >= 0.0;
        r.values = {{"alpha_default", o.constants.alpha}, {"alpha_hat", ad.alpha_hat}};
        rows.push_back(std::move(r));
    }

    res.all_pass = std::all_of(rows.begin(), rows.end(),
                               [](const CheckReport& c) { return c.pass; });
    return res;
}

} // namespace sumbounds
