#include "sumbounds/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace sumbounds {

namespace {

using nlohmann::json;

json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0.0 ? "inf" : "-inf";
}

Marginal base_marginal(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "atoms") {
        const json& arr = j.at("atoms");
        if (!arr.is_array() || arr.empty())
            throw std::invalid_argument("sequence JSON: \"atoms\" must be a non-empty array");
        std::vector<Atom> atoms;
        atoms.reserve(arr.size());
        for (const json& pair : arr) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("sequence JSON: each atom must be [value, probability]");
            atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
        }
        return Marginal::atoms(std::move(atoms));
    }
    if (kind == "rademacher") return Marginal::rademacher(j.at("scale").get<double>());
    if (kind == "exponential") return Marginal::exponential(j.at("scale").get<double>());
    if (kind == "uniform_sym") return Marginal::uniform_symmetric(j.at("scale").get<double>());
    throw std::invalid_argument("sequence JSON: unknown kind \"" + kind + "\"");
}

SummandSequence::Entry parse_entry(const json& j) {
    if (!j.is_object())
        throw std::invalid_argument("sequence JSON: each marginal must be an object");
    long count = 1;
    if (j.contains("count")) {
        const json& c = j.at("count");
        if (!c.is_number_integer() || c.get<long>() < 1)
            throw std::invalid_argument("sequence JSON: \"count\" must be an integer >= 1");
        count = c.get<long>();
    }
    Marginal m = base_marginal(j);
    if (j.contains("truncation")) m = truncate(m, j.at("truncation").get<double>());
    return {std::move(m), count};
}

} // namespace

std::string g17(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0.0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SummandSequence parse_sequence_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("sequence JSON: ") + e.what());
    }
    try {
        std::vector<SummandSequence::Entry> entries;
        if (j.is_array()) {
            if (j.empty()) throw std::invalid_argument("sequence JSON: empty array");
            entries.reserve(j.size());
            for (const json& obj : j) entries.push_back(parse_entry(obj));
        } else {
            entries.push_back(parse_entry(j));
        }
        return SummandSequence(std::move(entries));
    } catch (const json::exception& e) { // missing fields, wrong types
        throw std::invalid_argument(std::string("sequence JSON: ") + e.what());
    }
}

std::string dump_sequence_json(const SummandSequence& seq) {
    json arr = json::array();
    for (const auto& e : seq.entries()) {
        json o;
        switch (e.marginal.kind()) {
        case Kind::DiscreteAtoms: {
            o["kind"] = "atoms";
            json atoms = json::array();
            for (const Atom& a : e.marginal.atom_list())
                atoms.push_back(json::array({a.value, a.probability}));
            o["atoms"] = std::move(atoms);
            break;
        }
        case Kind::ScaledRademacher:
            o["kind"] = "rademacher";
            o["scale"] = e.marginal.scale();
            break;
        case Kind::Exponential:
            o["kind"] = "exponential";
            o["scale"] = e.marginal.scale();
            break;
        case Kind::UniformSymmetric:
            o["kind"] = "uniform_sym";
            o["scale"] = e.marginal.scale();
            break;
        }
        if (e.marginal.truncation()) o["truncation"] = *e.marginal.truncation();
        if (e.count != 1) o["count"] = e.count;
        arr.push_back(std::move(o));
    }
    return arr.dump();
}

std::string norm_result_json(const NormResult& r) {
    json o;
    o["lambda_star"] = r.lambda_star;
    o["p"] = r.p;
    o["bracket"] = json::array({r.bracket_lo, r.bracket_hi});
    o["iterations"] = r.iterations;
    o["product_at_lambda"] = json_number(r.product_at_lambda);
    return o.dump();
}

std::string moment_bounds_json(const MomentBounds& b, const OracleEstimate* oracle_norm) {
    json o;
    o["p"] = b.p;
    o["regime"] = b.regime == Regime::Symmetric ? "symmetric" : "nonnegative";
    o["lambda_star"] = b.norm.lambda_star;
    o["lower"] = b.lower;
    o["upper"] = b.upper;
    o["lower_constant"] = b.lower_constant;
    o["upper_constant"] = b.upper_constant;
    if (oracle_norm) {
        o["oracle_norm"] = oracle_norm->value;
        o["oracle_method"] =
            oracle_norm->method == OracleEstimate::Method::Exact ? "exact" : "monte_carlo";
        o["oracle_error_radius"] = oracle_norm->error_radius;
        o["within_bounds"] = oracle_norm->value + oracle_norm->error_radius >= b.lower &&
                             oracle_norm->value - oracle_norm->error_radius <= b.upper;
    } else {
        o["oracle_norm"] = nullptr;
    }
    return o.dump();
}

std::string tail_report_json(const TailReport& r) {
    json o;
    o["t"] = r.t;
    o["p_t"] = r.p_t ? json_number(*r.p_t) : json(nullptr);
    o["max_tail"] = r.max_tail;
    o["max_tail_lower"] = r.max_tail_sandwich.lower;
    o["max_tail_upper"] = r.max_tail_sandwich.upper;
    o["lower"] = r.lower_bound;
    o["upper"] = r.upper_bound;
    o["small_t"] = r.small_t_regime;
    o["components"] = {{"lower_max_tail", r.components.lower_max_tail},
                       {"lower_exp", r.components.lower_exp},
                       {"upper_max_tail", r.components.upper_max_tail},
                       {"upper_exp", r.components.upper_exp}};
    return o.dump();
}

std::string check_report_json(const CheckReport& c) {
    json o;
    o["check"] = c.name;
    o["pass"] = c.pass;
    o["lhs"] = json_number(c.lhs);
    o["rhs"] = json_number(c.rhs);
    o["slack"] = json_number(c.slack);
    json vals;
    for (const auto& [k, v] : c.values) vals[k] = json_number(v);
    o["values"] = std::move(vals);
    return o.dump();
}

std::string verify_summary_json(const VerifyResult& r) {
    long failed = 0;
    for (const CheckReport& c : r.checks)
        if (!c.pass) ++failed;
    json o;
    o["all_pass"] = r.all_pass;
    o["checks_total"] = r.checks.size();
    o["checks_failed"] = failed;
    o["alpha_hat"] = json_number(r.alpha_hat);
    o["max_c_hat"] = json_number(r.max_c_hat);
    o["min_small_t_prob"] = json_number(r.min_small_t_prob);
    return o.dump();
}

std::string kappa_json() {
    const double k = kappa();
    json o;
    o["kappa"] = k;
    o["f_of_kappa"] = f_series(k);
    o["latala_constant"] = latala_lower_constant();
    o["ratio"] = k / latala_lower_constant();
    return o.dump();
}

std::string tail_report_csv_header() {
    return "t,p_t,max_tail,max_tail_lower,max_tail_upper,lower,upper,small_t,"
           "lower_max_tail,lower_exp,upper_max_tail,upper_exp";
}

std::string tail_report_csv_row(const TailReport& r) {
    std::string row = g17(r.t);
    row += ',';
    if (r.p_t) row += std::isinf(*r.p_t) ? "inf" : g17(*r.p_t);
    row += ',';
    row += g17(r.max_tail);
    row += ',';
    row += g17(r.max_tail_sandwich.lower);
    row += ',';
    row += g17(r.max_tail_sandwich.upper);
    row += ',';
    row += g17(r.lower_bound);
    row += ',';
    row += g17(r.upper_bound);
    row += ',';
    row += r.small_t_regime ? "true" : "false";
    row += ',';
    row += g17(r.components.lower_max_tail);
    row += ',';
    row += g17(r.components.lower_exp);
    row += ',';
    row += g17(r.components.upper_max_tail);
    row += ',';
    row += g17(r.components.upper_exp);
    return row;
}

std::string check_report_csv_header() { return "check,pass,lhs,rhs,slack"; }

std::string check_report_csv_row(const CheckReport& c) {
    std::string row = c.name; // corpus names contain no commas or quotes
    row += ',';
    row += c.pass ? "true" : "false";
    row += ',';
    row += g17(c.lhs);
    row += ',';
    row += g17(c.rhs);
    row += ',';
    row += g17(c.slack);
    return row;
}

} // namespace sumbounds
