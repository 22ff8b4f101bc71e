#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumbounds/io.hpp"
#include "sumbounds/latala.hpp"
#include "sumbounds/marginal.hpp"
#include "sumbounds/oracle.hpp"
#include "sumbounds/tails.hpp"
#include "sumbounds/verify.hpp"

namespace sb = sumbounds;

namespace {

// Exit codes: 0 success / all checks pass, 1 verification failure, 2 usage
// or input error.
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CliConfig {
    std::string input;
    double p = 0.0;
    std::string p_grid_text;
    double t = 0.0;
    std::string t_grid_text;
    std::string mode = "exact";
    long samples = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
    double alpha = sb::kDefaultAlpha;
    double delta = sb::BoundConstants{}.delta;
    std::string format = "json";
    std::string out;
};

std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used > 0 && used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
            ++used;
        if (used == 0 || used != item.size())
            throw std::invalid_argument(flag + ": cannot parse \"" + item + "\" as a number");
        grid.push_back(v);
    }
    if (grid.empty()) throw std::invalid_argument(flag + ": grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument(flag + ": grid must be strictly increasing");
    return grid;
}

std::vector<double> resolve_grid(const CLI::Option* single, double value, const std::string& text,
                                 const std::string& single_flag, const std::string& grid_flag) {
    if (single->count() > 0) return {value};
    if (!text.empty()) return parse_grid(text, grid_flag);
    throw std::invalid_argument("either " + single_flag + " or " + grid_flag + " is required");
}

// --input accepts inline JSON (first non-space byte '{' or '[') or a path.
sb::SummandSequence load_sequence(const std::string& input) {
    const std::size_t first = input.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (input[first] == '{' || input[first] == '['))
        return sb::parse_sequence_json(input);
    std::ifstream in(input);
    if (!in) throw std::invalid_argument("cannot open input file: " + input);
    std::stringstream buf;
    buf << in.rdbuf();
    return sb::parse_sequence_json(buf.str());
}

sb::OracleMode parse_mode(const std::string& mode) {
    if (mode == "exact") return sb::OracleMode::Exact;
    if (mode == "mc") return sb::OracleMode::MonteCarlo;
    return sb::OracleMode::Marginal;
}

void require_seed_for_mc(const std::string& mode, const CLI::Option* seed_opt) {
    if (mode == "mc" && seed_opt->count() == 0)
        throw std::invalid_argument("--mode mc requires an explicit --seed");
}

class LineSink {
public:
    explicit LineSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    void line(const std::string& s) {
        std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
        os << s << '\n';
    }

private:
    std::ofstream file_;
};

int run_kappa(const CliConfig& cfg) {
    LineSink sink(cfg.out);
    if (cfg.format == "csv") {
        const double k = sb::kappa();
        const double c = sb::latala_lower_constant();
        sink.line("kappa,f_of_kappa,latala_constant,ratio");
        sink.line(sb::g17(k) + ',' + sb::g17(sb::f_series(k)) + ',' + sb::g17(c) + ',' +
                  sb::g17(k / c));
    } else {
        sink.line(sb::kappa_json());
    }
    return 0;
}

int run_norm(const CliConfig& cfg, const std::vector<double>& ps) {
    const sb::SummandSequence seq = load_sequence(cfg.input);
    LineSink sink(cfg.out);
    if (cfg.format == "csv")
        sink.line("p,lambda_star,bracket_lo,bracket_hi,iterations,product_at_lambda");
    for (double p : ps) {
        const sb::NormResult r = sb::latala_norm(seq, p);
        if (cfg.format == "csv")
            sink.line(sb::g17(r.p) + ',' + sb::g17(r.lambda_star) + ',' + sb::g17(r.bracket_lo) +
                      ',' + sb::g17(r.bracket_hi) + ',' + std::to_string(r.iterations) + ',' +
                      sb::g17(r.product_at_lambda));
        else
            sink.line(sb::norm_result_json(r));
    }
    return 0;
}

int run_bounds(const CliConfig& cfg, const std::vector<double>& ps) {
    const sb::SummandSequence seq = load_sequence(cfg.input);
    const sb::OracleMode mode = parse_mode(cfg.mode);
    LineSink sink(cfg.out);
    if (cfg.format == "csv")
        sink.line("p,regime,lambda_star,lower,upper,lower_constant,upper_constant,"
                  "oracle_norm,oracle_error_radius,oracle_method,within_bounds");
    for (double p : ps) {
        const sb::MomentBounds b = sb::moment_bounds(seq, p);
        std::optional<sb::OracleEstimate> est;
        if (mode == sb::OracleMode::Exact)
            est = sb::exact_estimate(seq, sb::Statistic::p_norm(p));
        else if (mode == sb::OracleMode::MonteCarlo)
            est = sb::mc_estimate(seq, sb::Statistic::p_norm(p), cfg.samples, cfg.seed,
                                  cfg.workers);
        if (cfg.format == "csv") {
            std::string row = sb::g17(b.p);
            row += b.regime == sb::Regime::Symmetric ? ",symmetric," : ",nonnegative,";
            row += sb::g17(b.norm.lambda_star) + ',' + sb::g17(b.lower) + ',' + sb::g17(b.upper) +
                   ',' + sb::g17(b.lower_constant) + ',' + sb::g17(b.upper_constant) + ',';
            if (est) {
                const bool within = est->value + est->error_radius >= b.lower &&
                                    est->value - est->error_radius <= b.upper;
                row += sb::g17(est->value) + ',' + sb::g17(est->error_radius) + ',';
                row += est->method == sb::OracleEstimate::Method::Exact ? "exact" : "monte_carlo";
                row += within ? ",true" : ",false";
            } else {
                row += ",,,";
            }
            sink.line(row);
        } else {
            sink.line(sb::moment_bounds_json(b, est ? &*est : nullptr));
        }
    }
    return 0;
}

int run_tails(const CliConfig& cfg, const std::vector<double>& ts) {
    const sb::SummandSequence seq = load_sequence(cfg.input);
    const sb::OracleMode mode = parse_mode(cfg.mode);
    sb::BoundConstants constants;
    constants.alpha = cfg.alpha;
    constants.delta = cfg.delta;
    const sb::McOptions mc{cfg.samples, cfg.seed, cfg.workers};
    LineSink sink(cfg.out);
    if (cfg.format == "csv") sink.line(sb::tail_report_csv_header());
    for (double t : ts) {
        const sb::TailReport r = sb::tail_bounds(seq, t, constants, mode, mc);
        sink.line(cfg.format == "csv" ? sb::tail_report_csv_row(r) : sb::tail_report_json(r));
    }
    return 0;
}

int run_verify_cmd(const CliConfig& cfg) {
    sb::VerifyOptions opts;
    opts.seed = cfg.seed;
    opts.samples = cfg.samples;
    opts.workers = cfg.workers;
    opts.constants.alpha = cfg.alpha;
    opts.constants.delta = cfg.delta;
    const sb::VerifyResult res = sb::run_verify(opts);
    LineSink sink(cfg.out);
    if (cfg.format == "csv") {
        sink.line(sb::check_report_csv_header());
        for (const sb::CheckReport& c : res.checks) sink.line(sb::check_report_csv_row(c));
    } else {
        for (const sb::CheckReport& c : res.checks) sink.line(sb::check_report_json(c));
        sink.line(sb::verify_summary_json(res));
    }
    return res.all_pass ? 0 : kExitFail;
}

void add_format_out(CLI::App* cmd, CliConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->envname("SUMBOUNDS_FORMAT");
    cmd->add_option("--out", cfg.out, "Write to this file instead of stdout");
}

CLI::Option* add_oracle_opts(CLI::App* cmd, CliConfig& cfg) {
    cmd->add_option("--mode", cfg.mode, "Oracle mode")
        ->check(CLI::IsMember({"exact", "mc", "marginal"}))
        ->envname("SUMBOUNDS_MODE");
    cmd->add_option("--samples", cfg.samples, "Monte Carlo sample count (>= 1000)")
        ->envname("SUMBOUNDS_SAMPLES");
    CLI::Option* seed = cmd->add_option("--seed", cfg.seed, "Monte Carlo seed")
                            ->envname("SUMBOUNDS_SEED");
    cmd->add_option("--workers", cfg.workers, "Monte Carlo worker threads (1..256)")
        ->envname("SUMBOUNDS_WORKERS");
    return seed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sided moment and tail estimates for sums of independent random variables"};
    app.require_subcommand(1);

    CliConfig cfg;
    CliConfig vcfg;
    vcfg.seed = 7;
    vcfg.samples = 200'000;

    CLI::App* kappa_cmd = app.add_subcommand(
        "kappa", "Print the nonnegative-regime series constant and its classical comparison");
    add_format_out(kappa_cmd, cfg);

    CLI::App* norm_cmd =
        app.add_subcommand("norm", "Orlicz norm lambda_star of a summand sequence");
    norm_cmd->add_option("--input", cfg.input, "Sequence JSON (inline or file path)")->required();
    CLI::Option* norm_p = norm_cmd->add_option("--p", cfg.p, "Moment order (>= 1)");
    CLI::Option* norm_pg =
        norm_cmd->add_option("--p-grid", cfg.p_grid_text, "Comma-separated increasing p grid");
    norm_p->excludes(norm_pg);
    norm_pg->excludes(norm_p);
    add_format_out(norm_cmd, cfg);

    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "Two-sided moment bounds with an oracle p-norm");
    bounds_cmd->add_option("--input", cfg.input, "Sequence JSON (inline or file path)")->required();
    CLI::Option* bounds_p = bounds_cmd->add_option("--p", cfg.p, "Moment order");
    CLI::Option* bounds_pg =
        bounds_cmd->add_option("--p-grid", cfg.p_grid_text, "Comma-separated increasing p grid");
    bounds_p->excludes(bounds_pg);
    bounds_pg->excludes(bounds_p);
    CLI::Option* bounds_seed = add_oracle_opts(bounds_cmd, cfg);
    add_format_out(bounds_cmd, cfg);

    CLI::App* tails_cmd =
        app.add_subcommand("tails", "Two-sided tail probability estimates over a t grid");
    tails_cmd->add_option("--input", cfg.input, "Sequence JSON (inline or file path)")->required();
    CLI::Option* tails_t = tails_cmd->add_option("--t", cfg.t, "Tail threshold (> 0)");
    CLI::Option* tails_tg =
        tails_cmd->add_option("--t-grid", cfg.t_grid_text, "Comma-separated increasing t grid");
    tails_t->excludes(tails_tg);
    tails_tg->excludes(tails_t);
    CLI::Option* tails_seed = add_oracle_opts(tails_cmd, cfg);
    tails_cmd->add_option("--alpha", cfg.alpha, "Lower-bound exponential rate (> 0)")
        ->envname("SUMBOUNDS_ALPHA");
    tails_cmd->add_option("--delta", cfg.delta, "Upper-bound exponential rate (> 0)")
        ->envname("SUMBOUNDS_DELTA");
    add_format_out(tails_cmd, cfg);

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "Run every inequality check over the built-in corpus and calibrate alpha");
    verify_cmd->add_option("--samples", vcfg.samples, "Monte Carlo sample count (>= 1000)")
        ->envname("SUMBOUNDS_SAMPLES");
    verify_cmd->add_option("--seed", vcfg.seed, "Monte Carlo seed")->envname("SUMBOUNDS_SEED");
    verify_cmd->add_option("--workers", vcfg.workers, "Monte Carlo worker threads (1..256)")
        ->envname("SUMBOUNDS_WORKERS");
    verify_cmd->add_option("--alpha", vcfg.alpha, "Lower-bound exponential rate to validate")
        ->envname("SUMBOUNDS_ALPHA");
    verify_cmd->add_option("--delta", vcfg.delta, "Upper-bound exponential rate (> 0)")
        ->envname("SUMBOUNDS_DELTA");
    add_format_out(verify_cmd, vcfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (kappa_cmd->parsed()) return run_kappa(cfg);
        if (norm_cmd->parsed())
            return run_norm(cfg, resolve_grid(norm_p, cfg.p, cfg.p_grid_text, "--p", "--p-grid"));
        if (bounds_cmd->parsed()) {
            require_seed_for_mc(cfg.mode, bounds_seed);
            return run_bounds(cfg,
                              resolve_grid(bounds_p, cfg.p, cfg.p_grid_text, "--p", "--p-grid"));
        }
        if (tails_cmd->parsed()) {
            require_seed_for_mc(cfg.mode, tails_seed);
            return run_tails(cfg, resolve_grid(tails_t, cfg.t, cfg.t_grid_text, "--t", "--t-grid"));
        }
        return run_verify_cmd(vcfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
