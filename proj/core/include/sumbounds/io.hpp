#ifndef SUMBOUNDS_IO_HPP
#define SUMBOUNDS_IO_HPP

#include <string>

#include "sumbounds/latala.hpp"
#include "sumbounds/marginal.hpp"
#include "sumbounds/oracle.hpp"
#include "sumbounds/tails.hpp"
#include "sumbounds/verify.hpp"

namespace sumbounds {

/// Parses one marginal object or an array of them into a sequence.
/// Accepted objects: {"kind":"atoms","atoms":[[value,prob],...]},
/// {"kind":"rademacher","scale":s}, {"kind":"exponential","scale":s},
/// {"kind":"uniform_sym","scale":s}; each may carry "count" (i.i.d.
/// repetitions, default 1) and "truncation" (censoring level |X| <= T).
/// Malformed input raises std::invalid_argument with a parse diagnostic.
SummandSequence parse_sequence_json(const std::string& text);

/// Inverse of parse_sequence_json up to atom ordering (atoms are emitted
/// sorted by value); parse(dump(seq)) is semantically identical to seq.
std::string dump_sequence_json(const SummandSequence& seq);

// Single-line JSON records. Nonfinite numbers serialize as the strings
// "inf"/"-inf"/"nan"; an unsolved p_t (small-t regime) serializes as null.
std::string norm_result_json(const NormResult& r);
std::string moment_bounds_json(const MomentBounds& b, const OracleEstimate* oracle_norm);
std::string tail_report_json(const TailReport& r);
std::string check_report_json(const CheckReport& c);
std::string verify_summary_json(const VerifyResult& r);
std::string kappa_json();

/// Shortest-faithful decimal rendering (%.17g); nonfinite values render as
/// "inf"/"-inf"/"nan". Used for every CSV number so reruns are byte-identical.
std::string g17(double v);

// CSV with %.17g numbers; p_t is empty in the small-t regime, "inf" at the
// sentinel; booleans are "true"/"false".
std::string tail_report_csv_header();
std::string tail_report_csv_row(const TailReport& r);
std::string check_report_csv_header();
std::string check_report_csv_row(const CheckReport& c);

} // namespace sumbounds

#endif
