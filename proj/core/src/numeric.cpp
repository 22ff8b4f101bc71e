#include "sumbounds/numeric.hpp"

#include <cmath>
#include <limits>

namespace sumbounds {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(const std::vector<double>& logs) {
    double m = kNegInf;
    for (double l : logs)
        if (l > m) m = l;
    if (m == kNegInf) return kNegInf;
    if (std::isinf(m)) return m; // +inf dominates
    double s = 0.0;
    for (double l : logs)
        if (l != kNegInf) s += std::exp(l - m);
    return m + std::log(s);
}

void LogSumExpAccumulator::rescale(double new_max) {
    if (!empty_ && new_max > max_log_) {
        scaled_sum_ *= std::exp(max_log_ - new_max);
        max_log_ = new_max;
    }
}

void LogSumExpAccumulator::add(double log_term) {
    ++count_;
    if (log_term == kNegInf) return; // exp(-inf) = 0
    if (empty_) {
        max_log_ = log_term;
        scaled_sum_ = 1.0;
        empty_ = false;
        return;
    }
    if (log_term > max_log_) {
        rescale(log_term);
        scaled_sum_ += 1.0;
    } else {
        scaled_sum_ += std::exp(log_term - max_log_);
    }
}

void LogSumExpAccumulator::merge(const LogSumExpAccumulator& other) {
    count_ += other.count_;
    if (other.empty_) return;
    if (empty_) {
        max_log_ = other.max_log_;
        scaled_sum_ = other.scaled_sum_;
        empty_ = false;
        return;
    }
    if (other.max_log_ > max_log_) {
        rescale(other.max_log_);
        scaled_sum_ += other.scaled_sum_;
    } else {
        scaled_sum_ += other.scaled_sum_ * std::exp(other.max_log_ - max_log_);
    }
}

double LogSumExpAccumulator::log_sum() const {
    if (empty_ || scaled_sum_ <= 0.0) return kNegInf;
    return max_log_ + std::log(scaled_sum_);
}

} // namespace sumbounds
