#ifndef SUMBOUNDS_MARGINAL_HPP
#define SUMBOUNDS_MARGINAL_HPP

#include <optional>
#include <vector>

#include "sumbounds/rng.hpp"

namespace sumbounds {

enum class Kind { DiscreteAtoms, ScaledRademacher, Exponential, UniformSymmetric };

enum class Regime { Symmetric, Nonnegative };

struct Atom {
    double value;
    double probability;
};

/// Distribution of one independent summand.
///
/// Supported laws: finite atom lists and three analytic families
/// (Rademacher taking values +-scale, Exponential with mean scale, and the
/// uniform law on [-scale, scale]). A continuous family may carry a
/// censoring bound: `truncation() == T` means the law of X*1{|X| <= T},
/// i.e. the continuous part restricted to [-T, T] plus an atom at 0
/// holding the excluded mass. Truncating a discrete law materializes new
/// atoms instead.
///
/// The symmetric/nonnegative flags are always derived from the law, never
/// user-supplied. Values are immutable after construction and safe to share
/// across threads.
class Marginal {
public:
    /// Finite atom list. Probabilities must be in (0,1] and sum to 1 within
    /// 1e-12; values must be finite and distinct.
    static Marginal atoms(std::vector<Atom> atoms);
    static Marginal point_mass(double value);
    static Marginal rademacher(double scale);
    static Marginal exponential(double scale);       // mean = scale
    static Marginal uniform_symmetric(double scale); // uniform on [-scale, scale]

    Kind kind() const { return kind_; }
    const std::vector<Atom>& atom_list() const; // DiscreteAtoms only
    double scale() const;                       // analytic families only
    std::optional<double> truncation() const { return truncation_; }

    bool symmetric() const { return symmetric_; }
    bool nonnegative() const { return nonnegative_; }
    bool is_point_mass_at_zero() const;

    /// Essential supremum of |X| (+inf for an uncensored Exponential).
    double max_abs_support() const;

    /// Mass of the censoring atom at 0, i.e. P(|X| > T) of the parent law.
    /// Zero for uncensored or discrete marginals.
    double censor_atom_probability() const;

private:
    Marginal() = default;

    Kind kind_ = Kind::DiscreteAtoms;
    std::vector<Atom> atoms_;
    double scale_ = 0.0;
    std::optional<double> truncation_;
    bool symmetric_ = false;
    bool nonnegative_ = false;

    friend Marginal truncate(const Marginal&, double);
};

/// E|1 + X/lambda|^p. Exact (finite sum) for discrete laws, adaptive
/// quadrature to relative tolerance 1e-10 for the continuous families.
/// Atom sums switch to log-domain evaluation once p*log(1+|v|/lambda)
/// leaves the safe exponent range, so p up to several hundred is fine;
/// the returned double may still overflow to +inf for extreme inputs,
/// in which case use log_orlicz_term.
double orlicz_term(const Marginal& m, double lambda, double p);

/// log E|1 + X/lambda|^p, finite even where the expectation itself
/// overflows. This is the form the norm solver consumes.
double log_orlicz_term(const Marginal& m, double lambda, double p);

/// Law of X*1{|X| <= t} (ties at |X| = t stay included); excluded mass
/// moves to an atom at 0. Symmetry and nonnegativity are preserved.
Marginal truncate(const Marginal& m, double t);

/// P(|X| > u), strict inequality. Exact for every supported law.
/// Probabilities below 1e-300 are reported as 0.
double tail(const Marginal& m, double u);

/// E|X|^p for p >= 1. Exact where a closed form exists, quadrature
/// (same policy as orlicz_term) for censored exponential laws.
double abs_moment(const Marginal& m, double p);

/// E X.
double mean(const Marginal& m);

/// One variate. Reproducible given the stream state; no hidden globals.
double sample(const Marginal& m, RngStream& rng);

/// Finite ordered list of independent summands. An entry's count is i.i.d.
/// shorthand: (marginal, count=k) contributes k independent copies.
class SummandSequence {
public:
    struct Entry {
        Marginal marginal;
        long count = 1;
    };

    explicit SummandSequence(std::vector<Entry> entries);
    static SummandSequence iid(Marginal m, long n);
    static SummandSequence single(Marginal m) { return iid(std::move(m), 1); }

    const std::vector<Entry>& entries() const { return entries_; }
    long size() const { return total_; } // expanded length n

    bool all_symmetric() const { return all_symmetric_; }
    bool all_nonnegative() const { return all_nonnegative_; }
    bool has_regime(Regime r) const {
        return r == Regime::Symmetric ? all_symmetric_ : all_nonnegative_;
    }
    bool all_degenerate_zero() const;

private:
    std::vector<Entry> entries_;
    long total_ = 0;
    bool all_symmetric_ = true;
    bool all_nonnegative_ = true;
};

SummandSequence truncate(const SummandSequence& seq, double t);

/// Law of (c*X_n) for c > 0.
SummandSequence scaled(const SummandSequence& seq, double c);

/// ||sum_i X_i 1{|X_i| <= t}||_2 from marginal moments (independence).
double truncated_sum_l2(const SummandSequence& seq, double t);

/// sum_i E|X_i|.
double sum_abs_means(const SummandSequence& seq);

/// sum_i P(|X_i| > u) — the T of the maximal-summand tail sandwich.
double sum_tails(const SummandSequence& seq, double u);

/// P(max_i |X_i| > u) = 1 - prod_i (1 - P(|X_i| > u)), exact.
double max_abs_tail(const SummandSequence& seq, double u);

/// sum_i ess-sup |X_i|; +inf if any summand is unbounded.
double total_abs_range(const SummandSequence& seq);

} // namespace sumbounds

#endif
