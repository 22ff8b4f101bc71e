#ifndef SUMBOUNDS_ORACLE_HPP
#define SUMBOUNDS_ORACLE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sumbounds/marginal.hpp"

namespace sumbounds {

/// How ground-truth quantities are produced.
///  - Exact: iterated convolution (discrete laws only).
///  - MonteCarlo: seeded sampling with a 99.9% normal error radius.
///  - Marginal: no joint computation at all; p-norms of a sum are replaced
///    by the Orlicz-norm lambda_star of the summand sequence, which brackets
///    them within the regime constants. Only meaningful for norm queries.
enum class OracleMode { Exact, MonteCarlo, Marginal };

struct McOptions {
    long samples = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct OracleEstimate {
    double value = 0.0;
    enum class Method { Exact, MonteCarlo } method = Method::Exact;
    double error_radius = 0.0; // 0 for exact; 99.9% half-width for MC
    long samples = 0;          // MC only
    std::uint64_t seed = 0;    // MC only
    /// False for an MC tail estimate with fewer than 10 exceedances: the
    /// normal approximation behind error_radius is unreliable there.
    bool resolved = true;
};

/// Quantity of the sum law being estimated.
struct Statistic {
    enum class Type { TailProbability, PNorm, MaxTailProbability };
    Type type = Type::TailProbability;
    double param = 0.0; // threshold t for the tails, exponent p for PNorm

    static Statistic tail_at(double t) { return {Type::TailProbability, t}; }
    static Statistic p_norm(double p) { return {Type::PNorm, p}; }
    static Statistic max_tail_at(double t) { return {Type::MaxTailProbability, t}; }
};

/// Exact law of S = sum of all summands, by iterated convolution. Values
/// closer than 1e-12 merge into their probability-weighted mean. Requires
/// every entry to be DiscreteAtoms or ScaledRademacher and keeps the working
/// support below 10^6 points per convolution step.
Marginal exact_sum_distribution(const SummandSequence& seq);

/// (E|S|^p)^(1/p) of a discrete law, accumulated in log domain.
double atom_p_norm(const Marginal& dist, double p);

/// Exact evaluation of a statistic (error_radius 0). MaxTailProbability uses
/// the closed product formula and therefore accepts continuous summands too.
OracleEstimate exact_estimate(const SummandSequence& seq, const Statistic& stat);

/// Monte Carlo evaluation. Deterministic for fixed (seed, samples, workers):
/// sample indices are partitioned across workers up front, each worker draws
/// from RngStream::substream(seed, worker), and partial results merge in
/// worker order, so the result is independent of thread scheduling.
/// error_radius is 3.29 standard errors (99.9% two-sided normal); p-norm
/// radii come from the delta method on the p-th moment. samples >= 1000.
OracleEstimate mc_estimate(const SummandSequence& seq, const Statistic& stat, long samples,
                           std::uint64_t seed, int workers = 1);

/// Dispatch on mode (Exact or MonteCarlo; Marginal is rejected here).
OracleEstimate estimate(const SummandSequence& seq, const Statistic& stat, OracleMode mode,
                        const McOptions& mc = {});

/// Outcome of one numeric inequality verification, lhs <= rhs + slack-budget.
struct CheckReport {
    std::string name;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs + allowed error - lhs; >= 0 iff pass
    std::map<std::string, double> values;
};

/// Maximum and truncated-sum tails are each dominated by twice the full-sum
/// tail: P(max_i |X_i| > t) <= 2 P(|S| > t) and P(|sum truncated| > t)
/// <= 2 P(|S| > t). Symmetric summands only. The combined consequence
/// P(|S| > t) >= (P(max > t) + P(|trunc sum| > t))/4 is recorded in values.
CheckReport levy_check(const SummandSequence& seq, double t, OracleMode mode = OracleMode::Exact,
                       const McOptions& mc = {});

/// Norm growth of the truncated sum: for q >= p >= 1 the ratio
/// C_hat = ||s||_q / ((q/p) (||s||_p + t)) stays bounded by a universal
/// constant; the report carries C_hat and the suite aggregates its maximum.
/// The sequence is truncated at t internally. Symmetric summands only.
CheckReport moment_growth_check(const SummandSequence& seq, double t, double p, double q,
                                OracleMode mode = OracleMode::Exact, const McOptions& mc = {});

/// Linear decoupling (k = 1): replacing the summands of sum_i c_i X_i by an
/// independent copy changes nothing in law, so the p-norm ratio is 1 <= 3.
CheckReport decoupling_check(const std::vector<double>& coeffs, const Marginal& base, double p,
                             long samples, std::uint64_t seed);

/// Bilinear decoupling (k = 2): with zero-diagonal coefficients,
/// ||sum_{i != j} c_ij X_i X_j||_p <= 25 ||sum_{i != j} c_ij X_i Y_j||_p
/// where (Y_j) is an independent copy of (X_i). Both norms are MC estimates.
CheckReport decoupling_check(const std::vector<std::vector<double>>& coeffs, const Marginal& base,
                             double p, long samples, std::uint64_t seed);

/// Nonnegative summands: pointwise 1 + sum X_n <= prod (1 + X_n) on seeded
/// draws; the independence identity prod_n E(1+X_n)^p = E prod_n (1+X_n)^p
/// exactly for discrete laws; and the consequence ||S / lambda_star||_p <=
/// (e^p - 1)^(1/p) against the requested oracle.
CheckReport product_vs_sum_check(const SummandSequence& seq, double p,
                                 OracleMode mode = OracleMode::Exact, const McOptions& mc = {});

} // namespace sumbounds

#endif
