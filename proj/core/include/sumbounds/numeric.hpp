#ifndef SUMBOUNDS_NUMERIC_HPP
#define SUMBOUNDS_NUMERIC_HPP

#include <vector>

namespace sumbounds {

/// log(sum(exp(l))) over the entries of `logs`; -inf entries contribute 0.
double log_sum_exp(const std::vector<double>& logs);

/// Streaming log-sum-exp: keeps a running maximum and a rescaled partial sum
/// so that sums like sum_i |s_i|^p stay representable for p in the hundreds.
/// Merging accumulators in a fixed order gives bit-reproducible results.
class LogSumExpAccumulator {
public:
    void add(double log_term);
    void merge(const LogSumExpAccumulator& other);
    double log_sum() const; // -inf when nothing was added
    long long count() const { return count_; }

private:
    double max_log_ = -1e308;
    double scaled_sum_ = 0.0; // sum of exp(log_term - max_log_)
    long long count_ = 0;
    bool empty_ = true;

    void rescale(double new_max);
};

} // namespace sumbounds

#endif
