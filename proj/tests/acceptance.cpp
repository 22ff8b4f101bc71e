// Acceptance harness: one PASS/FAIL line per shipped criterion, exit 0 only
// when all nine hold. argv[1] is the path to the command-line binary.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sumbounds/corpus.hpp"
#include "sumbounds/latala.hpp"
#include "sumbounds/marginal.hpp"
#include "sumbounds/oracle.hpp"
#include "sumbounds/tails.hpp"
#include "sumbounds/verify.hpp"

using namespace sumbounds;

namespace {

int g_failures = 0;

void report(int index, const char* title, bool pass, const std::string& detail) {
    if (!pass) ++g_failures;
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", index, title, detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

OracleEstimate member_estimate(const CorpusMember& m, const Statistic& stat, std::uint64_t seed) {
    if (m.mode == OracleMode::Exact) return exact_estimate(m.seq, stat);
    return mc_estimate(m.seq, stat, 400000, seed, 4);
}

void criterion_constants() {
    const auto start = std::chrono::steady_clock::now();
    const double k = kappa();
    const double fk = f_series(k);
    const double lc = latala_lower_constant();
    const double elapsed = seconds_since(start);
    const bool pass = k >= 0.1539 && k <= 0.1559 && lc >= 0.1152 && lc <= 0.1172 &&
                      std::abs(fk - std::exp(1.0)) <= 1e-10 && elapsed < 1.0;
    report(1, "constants", pass,
           "kappa=" + fmt(k) + " lower_const=" + fmt(lc) + " |f(kappa)-e|=" +
               fmt(std::abs(fk - std::exp(1.0))) + " time=" + fmt(elapsed) + "s");
}

void criterion_closed_forms() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double a : {1.0, 2.5}) {
        for (double p : {1.0, 2.0, 7.5}) {
            const double lam =
                latala_norm(SummandSequence::single(Marginal::point_mass(a)), p).lambda_star;
            const double expect = a / (std::exp(1.0) - 1.0);
            worst = std::max(worst, std::abs(lam - expect) / expect);
        }
    }
    for (long n : {1L, 2L, 4L, 16L}) {
        const double lam =
            latala_norm(SummandSequence::iid(Marginal::rademacher(1.0), n), 2.0).lambda_star;
        const double expect = 1.0 / std::sqrt(std::expm1(2.0 / static_cast<double>(n)));
        worst = std::max(worst, std::abs(lam - expect) / expect);
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst <= 1e-7 && elapsed < 1.0;
    report(2, "norm closed forms", pass,
           "worst_rel_err=" + fmt(worst) + " time=" + fmt(elapsed) + "s");
}

void criterion_symmetric_sandwich() {
    const auto start = std::chrono::steady_clock::now();
    long points = 0, violations = 0;
    double min_slack = 1e300;
    std::uint64_t salt = 40000;
    for (const CorpusMember* m : symmetric_members()) {
        for (double p : symmetric_p_grid()) {
            const MomentBounds b = moment_bounds(m->seq, p);
            const OracleEstimate est = member_estimate(*m, Statistic::p_norm(p), ++salt);
            const double lo_slack = est.value + est.error_radius - b.lower * (1.0 - 1e-9);
            const double hi_slack = b.upper * (1.0 + 1e-9) + est.error_radius - est.value;
            min_slack = std::min({min_slack, lo_slack, hi_slack});
            ++points;
            if (lo_slack < 0.0 || hi_slack < 0.0) ++violations;
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = violations == 0 && elapsed < 30.0;
    report(3, "symmetric moment sandwich", pass,
           fmt(static_cast<double>(points)) + " points, violations=" +
               fmt(static_cast<double>(violations)) + " min_slack=" + fmt(min_slack) +
               " time=" + fmt(elapsed) + "s");
}

void criterion_nonnegative_sandwich() {
    const auto start = std::chrono::steady_clock::now();
    long points = 0, violations = 0;
    double max_lambda = 0.0;
    std::uint64_t salt = 50000;
    for (const CorpusMember* m : nonnegative_members()) {
        for (double p : nonnegative_p_grid()) {
            const MomentBounds b = moment_bounds(m->seq, p);
            const OracleEstimate est = member_estimate(*m, Statistic::p_norm(p), ++salt);
            const double lo_slack = est.value + est.error_radius - b.lower * (1.0 - 1e-9);
            const double hi_slack = b.upper * (1.0 + 1e-9) + est.error_radius - est.value;
            max_lambda = std::max(max_lambda, b.norm.lambda_star);
            ++points;
            if (lo_slack < 0.0 || hi_slack < 0.0) ++violations;
        }
    }
    // The series constant must visibly improve on the classical one: a
    // positive absolute gap between the two lower bounds at some corpus point.
    const double gap = (kappa() - latala_lower_constant()) * max_lambda;
    const double elapsed = seconds_since(start);
    const bool pass = violations == 0 && gap > 1e-6 && elapsed < 30.0;
    report(4, "nonnegative moment sandwich", pass,
           fmt(static_cast<double>(points)) + " points, violations=" +
               fmt(static_cast<double>(violations)) + " improvement_gap=" + fmt(gap) +
               " time=" + fmt(elapsed) + "s");
}

bool rows_pass(const VerifyResult& res, const std::string& prefix, long& total) {
    bool ok = true;
    for (const CheckReport& c : res.checks) {
        if (c.name.rfind(prefix, 0) == 0) {
            ++total;
            ok = ok && c.pass;
        }
    }
    return ok && total > 0;
}

const CheckReport* find_row(const VerifyResult& res, const std::string& name) {
    for (const CheckReport& c : res.checks)
        if (c.name == name) return &c;
    return nullptr;
}

void criteria_from_verify(const VerifyResult& res) {
    long upper_rows = 0;
    const bool upper_ok = rows_pass(res, "tail_upper/", upper_rows);
    report(5, "tail upper bound (delta=ln2, C=1)", upper_ok,
           fmt(static_cast<double>(upper_rows)) + " member rows, zero violations required");

    long small_rows = 0;
    const bool small_ok = rows_pass(res, "small_t_lower/", small_rows);
    long alpha_rows = 0;
    const bool alpha_rows_ok = rows_pass(res, "tail_lower_alpha/", alpha_rows);
    const CheckReport* calib = find_row(res, "alpha_calibration");
    const CheckReport* valid = find_row(res, "alpha_default_valid");
    const bool alpha_ok = calib != nullptr && calib->pass && valid != nullptr && valid->pass &&
                          res.alpha_hat > 0.0 && small_ok && alpha_rows_ok;
    report(6, "tail lower bound with global alpha", alpha_ok,
           "alpha_hat=" + fmt(res.alpha_hat) + " default_alpha_valid=" +
               (valid && valid->pass ? "yes" : "no") + " min_small_t_prob=" +
               fmt(res.min_small_t_prob) + " (>= 0.25 required)");

    long sandwich_rows = 0;
    const bool sandwich_ok = rows_pass(res, "max_tail_sandwich/", sandwich_rows);
    report(7, "max-summand tail sandwich", sandwich_ok,
           fmt(static_cast<double>(sandwich_rows)) + " member rows, all u-grid points");

    long aux_rows = 0;
    bool aux_ok = rows_pass(res, "levy/", aux_rows) && rows_pass(res, "moment_growth/", aux_rows) &&
                  rows_pass(res, "product_vs_sum/", aux_rows);
    for (const char* name : {"paley_zygmund_spot", "decoupling_k1", "decoupling_k2",
                             "moment_growth_max"}) {
        const CheckReport* row = find_row(res, name);
        aux_ok = aux_ok && row != nullptr && row->pass;
        ++aux_rows;
    }
    report(8, "auxiliary checks", aux_ok,
           fmt(static_cast<double>(aux_rows)) + " rows (levy, moment growth, decoupling, "
           "product identity, Paley-Zygmund), max_C_hat=" + fmt(res.max_c_hat));
}

int run_command(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_determinism(const std::string& cli) {
    const std::string out1 = "acceptance_verify_run1.jsonl";
    const std::string out2 = "acceptance_verify_run2.jsonl";
    const std::string args = " verify --seed 7 --samples 1000000 --workers 4 --out ";
    const int rc1 = run_command("\"" + cli + "\"" + args + out1);
    const int rc2 = run_command("\"" + cli + "\"" + args + out2);
    const std::string body1 = read_file(out1);
    const std::string body2 = read_file(out2);
    const bool identical = !body1.empty() && body1 == body2;

    long hits = 0;
    const long trials = 1000;
    const SummandSequence two = SummandSequence::iid(Marginal::rademacher(1.0), 2);
    for (long trial = 0; trial < trials; ++trial) {
        const OracleEstimate est =
            mc_estimate(two, Statistic::tail_at(0.5), 10000, 1000 + trial, 1);
        if (std::abs(est.value - 0.5) <= est.error_radius) ++hits;
    }
    const double coverage = static_cast<double>(hits) / trials;

    const bool pass = identical && rc1 == 0 && rc2 == 0 && coverage >= 0.99;
    report(9, "determinism and MC coverage", pass,
           std::string("byte_identical=") + (identical ? "yes" : "no") + " exit_codes=" +
               fmt(rc1) + "/" + fmt(rc2) + " coverage=" + fmt(coverage) + " (>= 0.99)");
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
        return 2;
    }
    const std::string cli = argv[1];

    criterion_constants();
    criterion_closed_forms();
    criterion_symmetric_sandwich();
    criterion_nonnegative_sandwich();

    VerifyOptions opts;
    opts.seed = 7;
    opts.samples = 400000;
    opts.workers = 4;
    const VerifyResult res = run_verify(opts);
    criteria_from_verify(res);

    criterion_determinism(cli);

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria satisfied\n");
        return 0;
    }
    std::printf("acceptance: %d criteria failed\n", g_failures);
    return 1;
}
