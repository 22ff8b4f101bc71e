#ifndef SUMBOUNDS_CORPUS_HPP
#define SUMBOUNDS_CORPUS_HPP

#include <string>
#include <vector>

#include "sumbounds/marginal.hpp"
#include "sumbounds/oracle.hpp"

namespace sumbounds {

/// One fixed verification input: a sequence, the oracle able to ground-truth
/// it, and the threshold grids the sweeps run over.
struct CorpusMember {
    std::string name;
    SummandSequence seq;
    OracleMode mode;            // Exact for discrete members, MonteCarlo else
    std::vector<double> t_grid; // tail thresholds, multiples of ||S||_2
    std::vector<double> u_grid; // max-tail thresholds spanning the support
};

/// The built-in corpus: Rademacher systems (i.i.d. n in {1,2,4,16}, mixed
/// scales, geometric decay 2^-k), symmetric and nonnegative atom systems,
/// and continuous members (uniform, exponential, censored exponential) that
/// only the MC oracle can ground-truth. Deterministic contents.
const std::vector<CorpusMember>& builtin_corpus();

std::vector<const CorpusMember*> symmetric_members();
std::vector<const CorpusMember*> nonnegative_members();

/// Exponent grids of the two moment-sandwich sweeps.
const std::vector<double>& symmetric_p_grid();   // {2,3,4,6,8,12,16,20}
const std::vector<double>& nonnegative_p_grid(); // {1,2,3,4,6,8}

} // namespace sumbounds

#endif
