#include "sumbounds/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "sumbounds/latala.hpp"
#include "sumbounds/numeric.hpp"

namespace sumbounds {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kZScore999 = 3.29; // two-sided 99.9% normal quantile
constexpr std::size_t kSupportCap = 1'000'000;
constexpr double kMergeTol = 1e-12;

std::vector<Atom> discrete_atoms_of(const Marginal& m) {
    if (m.kind() == Kind::DiscreteAtoms) return m.atom_list();
    if (m.kind() == Kind::ScaledRademacher) return {{-m.scale(), 0.5}, {m.scale(), 0.5}};
    throw std::invalid_argument("exact_sum_distribution: continuous summands need the MC oracle");
}

// Groups values within kMergeTol of the group's first value and replaces the
// group by its probability-weighted mean.
std::vector<Atom> merge_close(std::vector<Atom> v) {
    std::sort(v.begin(), v.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> out;
    out.reserve(v.size());
    std::size_t i = 0;
    while (i < v.size()) {
        const double v0 = v[i].value;
        double mass = 0.0, weighted = 0.0;
        std::size_t j = i;
        while (j < v.size() && v[j].value - v0 <= kMergeTol) {
            mass += v[j].probability;
            weighted += v[j].probability * v[j].value;
            ++j;
        }
        if (mass > 0.0) out.push_back({weighted / mass, mass});
        i = j;
    }
    return out;
}

std::vector<Atom> convolve(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    if (a.size() * b.size() > kSupportCap)
        throw std::runtime_error("exact_sum_distribution: support exceeds the 10^6-atom cap");
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const Atom& x : a)
        for (const Atom& y : b) {
            const double pr = x.probability * y.probability;
            if (pr > 0.0) out.push_back({x.value + y.value, pr});
        }
    return merge_close(std::move(out));
}

void check_statistic(const Statistic& stat) {
    if (stat.type == Statistic::Type::PNorm) {
        if (!(stat.param >= 1.0) || !std::isfinite(stat.param))
            throw std::invalid_argument("statistic: p must be a finite real >= 1");
    } else if (!(stat.param >= 0.0) || !std::isfinite(stat.param)) {
        throw std::invalid_argument("statistic: threshold t must be a finite real >= 0");
    }
}

// Streaming MC estimate of (E|V|^p)^(1/p) with a delta-method error radius,
// all in log domain so |V|^p never overflows.
struct PNormAccumulator {
    LogSumExpAccumulator m1, m2;

    void add(double abs_v, double p) {
        const double la = abs_v > 0.0 ? p * std::log(abs_v) : kNegInf;
        m1.add(la);
        m2.add(2.0 * la);
    }

    void merge(const PNormAccumulator& other) {
        m1.merge(other.m1);
        m2.merge(other.m2);
    }

    // norm estimate and 99.9% radius from n samples
    void finish(long n, double p, double& value, double& radius) const {
        const double ln_n = std::log(static_cast<double>(n));
        const double lm1 = m1.log_sum() - ln_n; // log mean of |V|^p
        if (lm1 == kNegInf) {
            value = 0.0;
            radius = 0.0;
            return;
        }
        value = std::exp(lm1 / p);
        const double lm2 = m2.log_sum() - ln_n;
        const double d = 2.0 * lm1 - lm2; // log(m1^2/m2) <= 0 in exact arithmetic
        if (d >= 0.0) {
            radius = 0.0; // degenerate sample, zero empirical variance
            return;
        }
        const double log_var = lm2 + std::log1p(-std::exp(d));
        radius = kZScore999 *
                 std::exp(0.5 * (log_var - ln_n) + (1.0 / p - 1.0) * lm1 - std::log(p));
    }
};

struct WorkerState {
    long hits = 0;
    PNormAccumulator pnorm;
};

OracleEstimate make_exact(double value) {
    OracleEstimate out;
    out.value = value;
    out.method = OracleEstimate::Method::Exact;
    return out;
}

McOptions offset_seed(const McOptions& mc, std::uint64_t delta) {
    McOptions out = mc;
    out.seed += delta;
    return out;
}

} // namespace

Marginal exact_sum_distribution(const SummandSequence& seq) {
    std::vector<Atom> dist{{0.0, 1.0}};
    for (const auto& e : seq.entries()) {
        const std::vector<Atom> a = discrete_atoms_of(e.marginal);
        for (long c = 0; c < e.count; ++c) dist = convolve(dist, a);
    }
    double mass = 0.0;
    for (const Atom& a : dist) mass += a.probability;
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::runtime_error("exact_sum_distribution: probability mass drifted beyond 1e-9");
    for (Atom& a : dist) a.probability /= mass;
    return Marginal::atoms(std::move(dist));
}

double atom_p_norm(const Marginal& dist, double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("atom_p_norm: p must be a finite real >= 1");
    std::vector<double> logs;
    logs.reserve(dist.atom_list().size());
    for (const Atom& a : dist.atom_list()) {
        if (a.value == 0.0) continue;
        logs.push_back(std::log(a.probability) + p * std::log(std::abs(a.value)));
    }
    const double ls = log_sum_exp(logs);
    return ls == kNegInf ? 0.0 : std::exp(ls / p);
}

OracleEstimate exact_estimate(const SummandSequence& seq, const Statistic& stat) {
    check_statistic(stat);
    switch (stat.type) {
    case Statistic::Type::MaxTailProbability:
        return make_exact(max_abs_tail(seq, stat.param)); // closed form, any law
    case Statistic::Type::TailProbability:
        return make_exact(tail(exact_sum_distribution(seq), stat.param));
    case Statistic::Type::PNorm:
        return make_exact(atom_p_norm(exact_sum_distribution(seq), stat.param));
    }
    throw std::logic_error("exact_estimate: unknown statistic");
}

OracleEstimate mc_estimate(const SummandSequence& seq, const Statistic& stat, long samples,
                           std::uint64_t seed, int workers) {
    check_statistic(stat);
    if (samples < 1000)
        throw std::invalid_argument("mc_estimate: samples must be >= 1000");
    if (workers < 1 || workers > 256)
        throw std::invalid_argument("mc_estimate: workers must be in [1, 256]");

    const long base = samples / workers;
    const long extra = samples % workers;
    std::vector<WorkerState> states(static_cast<std::size_t>(workers));

    const auto body = [&](int w) {
        RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(w));
        WorkerState& st = states[static_cast<std::size_t>(w)];
        const long m = base + (w < extra ? 1 : 0);
        for (long i = 0; i < m; ++i) {
            double sum = 0.0, max_abs = 0.0;
            for (const auto& e : seq.entries())
                for (long c = 0; c < e.count; ++c) {
                    const double x = sample(e.marginal, rng);
                    sum += x;
                    max_abs = std::max(max_abs, std::abs(x));
                }
            switch (stat.type) {
            case Statistic::Type::TailProbability:
                if (std::abs(sum) > stat.param) ++st.hits;
                break;
            case Statistic::Type::MaxTailProbability:
                if (max_abs > stat.param) ++st.hits;
                break;
            case Statistic::Type::PNorm:
                st.pnorm.add(std::abs(sum), stat.param);
                break;
            }
        }
    };

    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (std::thread& th : pool) th.join();
    }

    OracleEstimate out;
    out.method = OracleEstimate::Method::MonteCarlo;
    out.samples = samples;
    out.seed = seed;
    if (stat.type == Statistic::Type::PNorm) {
        PNormAccumulator total;
        for (const WorkerState& st : states) total.merge(st.pnorm); // fixed worker order
        total.finish(samples, stat.param, out.value, out.error_radius);
    } else {
        long hits = 0;
        for (const WorkerState& st : states) hits += st.hits;
        const double phat = static_cast<double>(hits) / static_cast<double>(samples);
        out.value = phat;
        out.error_radius =
            kZScore999 * std::sqrt(std::max(0.0, phat * (1.0 - phat) / static_cast<double>(samples)));
        out.resolved = hits >= 10;
    }
    return out;
}

OracleEstimate estimate(const SummandSequence& seq, const Statistic& stat, OracleMode mode,
                        const McOptions& mc) {
    switch (mode) {
    case OracleMode::Exact:
        return exact_estimate(seq, stat);
    case OracleMode::MonteCarlo:
        return mc_estimate(seq, stat, mc.samples, mc.seed, mc.workers);
    case OracleMode::Marginal:
        throw std::invalid_argument("estimate: the marginal surrogate answers norm queries only");
    }
    throw std::logic_error("estimate: unknown oracle mode");
}

CheckReport levy_check(const SummandSequence& seq, double t, OracleMode mode, const McOptions& mc) {
    if (!seq.all_symmetric())
        throw std::invalid_argument("levy_check: symmetric summands required");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("levy_check: t must be a finite real >= 0");

    const double max_tail = max_abs_tail(seq, t); // exact in every mode
    const OracleEstimate sum_tail = estimate(seq, Statistic::tail_at(t), mode, mc);
    const OracleEstimate trunc_tail =
        estimate(truncate(seq, t), Statistic::tail_at(t), mode, offset_seed(mc, 1));

    const double rhs = 2.0 * sum_tail.value;
    const double rhs_err = 2.0 * sum_tail.error_radius;
    const double slack_max = rhs + rhs_err - max_tail;
    const double slack_trunc = rhs + rhs_err + trunc_tail.error_radius - trunc_tail.value;

    CheckReport rep;
    rep.name = "levy";
    rep.pass = slack_max >= 0.0 && slack_trunc >= 0.0;
    if (slack_max <= slack_trunc) {
        rep.lhs = max_tail;
        rep.slack = slack_max;
    } else {
        rep.lhs = trunc_tail.value;
        rep.slack = slack_trunc;
    }
    rep.rhs = rhs;
    rep.values = {{"max_tail", max_tail},
                  {"sum_tail", sum_tail.value},
                  {"sum_tail_error", sum_tail.error_radius},
                  {"trunc_sum_tail", trunc_tail.value},
                  {"trunc_sum_tail_error", trunc_tail.error_radius},
                  {"combined_lower", 0.25 * (max_tail + trunc_tail.value)}};
    return rep;
}

CheckReport moment_growth_check(const SummandSequence& seq, double t, double p, double q,
                                OracleMode mode, const McOptions& mc) {
    if (!seq.all_symmetric())
        throw std::invalid_argument("moment_growth_check: symmetric summands required");
    if (!(q >= p) || !(p >= 1.0) || !std::isfinite(q))
        throw std::invalid_argument("moment_growth_check: need q >= p >= 1");
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("moment_growth_check: t must be a positive finite real");

    const SummandSequence trunc = truncate(seq, t);
    const OracleEstimate norm_p = estimate(trunc, Statistic::p_norm(p), mode, mc);
    const OracleEstimate norm_q = estimate(trunc, Statistic::p_norm(q), mode, offset_seed(mc, 1));

    const double denom = (q / p) * (norm_p.value + t);
    const double c_hat = norm_q.value / denom; // denom >= (q/p) t > 0

    CheckReport rep;
    rep.name = "moment_growth";
    rep.pass = std::isfinite(c_hat) && c_hat >= 0.0;
    rep.lhs = norm_q.value;
    rep.rhs = denom;
    rep.slack = denom - norm_q.value;
    rep.values = {{"norm_p", norm_p.value},
                  {"norm_p_error", norm_p.error_radius},
                  {"norm_q", norm_q.value},
                  {"norm_q_error", norm_q.error_radius},
                  {"c_hat", c_hat},
                  {"p", p},
                  {"q", q},
                  {"t", t}};
    return rep;
}

namespace {

// MC p-norm of a sampled scalar functional, single-threaded, log-domain.
template <typename DrawFn>
void mc_functional_norm(DrawFn&& draw, long samples, double p, double& value, double& radius) {
    PNormAccumulator acc;
    for (long i = 0; i < samples; ++i) acc.add(std::abs(draw()), p);
    acc.finish(samples, p, value, radius);
}

CheckReport decoupling_report(const char* name, double constant, double lhs, double lhs_err,
                              double rhs, double rhs_err) {
    CheckReport rep;
    rep.name = name;
    rep.lhs = lhs;
    rep.rhs = constant * rhs;
    rep.slack = rep.rhs + lhs_err + constant * rhs_err - lhs;
    rep.pass = rep.slack >= 0.0;
    rep.values = {{"lhs_norm", lhs},
                  {"lhs_error", lhs_err},
                  {"rhs_norm", rhs},
                  {"rhs_error", rhs_err},
                  {"constant", constant},
                  {"ratio", rhs > 0.0 ? lhs / rhs : 0.0}};
    return rep;
}

void check_decoupling_args(double p, long samples, std::size_t n) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("decoupling_check: p must be a finite real >= 1");
    if (samples < 1000)
        throw std::invalid_argument("decoupling_check: samples must be >= 1000");
    if (n == 0)
        throw std::invalid_argument("decoupling_check: coefficients must be non-empty");
}

} // namespace

CheckReport decoupling_check(const std::vector<double>& coeffs, const Marginal& base, double p,
                             long samples, std::uint64_t seed) {
    check_decoupling_args(p, samples, coeffs.size());
    const std::size_t n = coeffs.size();

    RngStream r_same = RngStream::substream(seed, 0);
    RngStream r_copy = RngStream::substream(seed, 1);
    const auto linear = [&](RngStream& rng) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += coeffs[i] * sample(base, rng);
        return v;
    };

    double lhs = 0.0, lhs_err = 0.0, rhs = 0.0, rhs_err = 0.0;
    mc_functional_norm([&] { return linear(r_same); }, samples, p, lhs, lhs_err);
    mc_functional_norm([&] { return linear(r_copy); }, samples, p, rhs, rhs_err);
    return decoupling_report("decoupling_k1", 3.0, lhs, lhs_err, rhs, rhs_err);
}

CheckReport decoupling_check(const std::vector<std::vector<double>>& coeffs, const Marginal& base,
                             double p, long samples, std::uint64_t seed) {
    check_decoupling_args(p, samples, coeffs.size());
    const std::size_t n = coeffs.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (coeffs[i].size() != n)
            throw std::invalid_argument("decoupling_check: coefficient matrix must be square");
        if (coeffs[i][i] != 0.0)
            throw std::invalid_argument("decoupling_check: diagonal must be zero for k = 2");
    }

    const auto bilinear = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v += coeffs[i][j] * x[i] * y[j];
        return v;
    };
    const auto fill = [&](std::vector<double>& x, RngStream& rng) {
        for (double& xi : x) xi = sample(base, rng);
    };

    double lhs = 0.0, lhs_err = 0.0, rhs = 0.0, rhs_err = 0.0;
    {
        RngStream rng = RngStream::substream(seed, 0);
        std::vector<double> x(n);
        mc_functional_norm(
            [&] {
                fill(x, rng);
                return bilinear(x, x);
            },
            samples, p, lhs, lhs_err);
    }
    {
        RngStream rx = RngStream::substream(seed, 1);
        RngStream ry = RngStream::substream(seed, 2);
        std::vector<double> x(n), y(n);
        mc_functional_norm(
            [&] {
                fill(x, rx);
                fill(y, ry);
                return bilinear(x, y);
            },
            samples, p, rhs, rhs_err);
    }
    return decoupling_report("decoupling_k2", 25.0, lhs, lhs_err, rhs, rhs_err);
}

CheckReport product_vs_sum_check(const SummandSequence& seq, double p, OracleMode mode,
                                 const McOptions& mc) {
    if (!seq.all_nonnegative())
        throw std::invalid_argument("product_vs_sum_check: nonnegative summands required");
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("product_vs_sum_check: p must be a finite real >= 1");

    // 1 + sum X_n <= prod (1 + X_n) pointwise, on seeded draws.
    const long draws = std::min<long>(mc.samples, 100'000);
    RngStream rng = RngStream::substream(mc.seed, 0);
    long violations = 0;
    double worst_gap = 0.0;
    for (long i = 0; i < draws; ++i) {
        double sum = 0.0, log_prod = 0.0;
        for (const auto& e : seq.entries())
            for (long c = 0; c < e.count; ++c) {
                const double x = sample(e.marginal, rng);
                sum += x;
                log_prod += std::log1p(x);
            }
        const double lhs_v = std::log1p(sum);
        if (lhs_v > log_prod + 1e-12) {
            ++violations;
            worst_gap = std::max(worst_gap, lhs_v - log_prod);
        }
    }

    // prod_n E(1+X_n)^p = E prod_n (1+X_n)^p, exactly for discrete laws.
    const bool discrete = std::all_of(seq.entries().begin(), seq.entries().end(), [](const auto& e) {
        return e.marginal.kind() == Kind::DiscreteAtoms;
    });
    double identity_gap = 0.0;
    if (discrete) {
        double log_lhs = 0.0;
        std::vector<SummandSequence::Entry> log_entries;
        log_entries.reserve(seq.entries().size());
        for (const auto& e : seq.entries()) {
            log_lhs += static_cast<double>(e.count) * log_orlicz_term(e.marginal, 1.0, p);
            std::vector<Atom> shifted = e.marginal.atom_list();
            for (Atom& a : shifted) a.value = std::log1p(a.value);
            log_entries.push_back({Marginal::atoms(std::move(shifted)), e.count});
        }
        // prod (1+X_n) = exp(sum log(1+X_n)); convolve the logs exactly
        const Marginal log_sum = exact_sum_distribution(SummandSequence(std::move(log_entries)));
        std::vector<double> logs;
        logs.reserve(log_sum.atom_list().size());
        for (const Atom& a : log_sum.atom_list())
            logs.push_back(std::log(a.probability) + p * a.value);
        const double log_rhs = log_sum_exp(logs);
        identity_gap = std::abs(log_lhs - log_rhs); // ~ relative gap of the expectations
    }

    // ||S||_p <= (e^p - 1)^(1/p) * lambda_star against the requested oracle.
    const NormResult nr = latala_norm(seq, p);
    const OracleEstimate norm_s = estimate(seq, Statistic::p_norm(p), mode, offset_seed(mc, 1));
    const double upper = nonnegative_upper_constant(p) * nr.lambda_star;
    const double slack = upper + norm_s.error_radius + 1e-9 * upper - norm_s.value;

    CheckReport rep;
    rep.name = "product_vs_sum";
    rep.pass = violations == 0 && identity_gap <= 1e-12 && slack >= 0.0;
    rep.lhs = norm_s.value;
    rep.rhs = upper;
    rep.slack = slack;
    rep.values = {{"pointwise_draws", static_cast<double>(draws)},
                  {"pointwise_violations", static_cast<double>(violations)},
                  {"pointwise_worst_gap", worst_gap},
                  {"identity_checked", discrete ? 1.0 : 0.0},
                  {"identity_gap", identity_gap},
                  {"lambda_star", nr.lambda_star},
                  {"norm_p", norm_s.value},
                  {"norm_p_error", norm_s.error_radius}};
    return rep;
}

} // namespace sumbounds
