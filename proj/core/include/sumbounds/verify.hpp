#ifndef SUMBOUNDS_VERIFY_HPP
#define SUMBOUNDS_VERIFY_HPP

#include <cstdint>
#include <vector>

#include "sumbounds/oracle.hpp"
#include "sumbounds/tails.hpp"

namespace sumbounds {

struct VerifyOptions {
    std::uint64_t seed = 7;
    long samples = 200'000; // per MC estimate; the acceptance run passes 10^6
    int workers = 1;
    BoundConstants constants{};
};

struct VerifyResult {
    std::vector<CheckReport> checks;
    /// Smallest alpha for which the lower tail bound holds corpus-wide, from
    /// the binding constraint exp(-alpha p_t) <= 4 P(|S|>t) - P(X*>t). The
    /// bound then holds for every alpha >= alpha_hat.
    double alpha_hat = 0.0;
    double max_c_hat = 0.0;        // largest empirical norm-growth ratio seen
    double min_small_t_prob = 1.0; // min oracle P(|S|>t) over small-t points
    bool all_pass = false;
};

/// Every inequality of the suite over the built-in corpus: constants, norm
/// closed forms, both moment sandwiches, the two-sided tail bounds with the
/// alpha calibration, the max-tail sandwich, and the auxiliary checks.
/// Deterministic in (seed, samples, workers).
VerifyResult run_verify(const VerifyOptions& opts = {});

} // namespace sumbounds

#endif
