#include "sumbounds/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sumbounds {

namespace {

// Thresholds straddle the small-t boundary: 0.3 and 0.6 of ||S||_2 usually
// fall in or near the small-t regime, the rest exercise the p_t path.
std::vector<double> t_grid_for(const SummandSequence& seq) {
    const double l2 = truncated_sum_l2(seq, std::numeric_limits<double>::infinity());
    return {0.3 * l2, 0.6 * l2, 1.0 * l2, 1.5 * l2, 2.5 * l2};
}

std::vector<double> u_grid_for(const SummandSequence& seq) {
    double reach = 0.0; // largest support point, or a 5-sigma stand-in
    for (const auto& e : seq.entries()) {
        const double s = e.marginal.max_abs_support();
        reach = std::max(reach, std::isfinite(s) ? s : 5.0 * e.marginal.scale());
    }
    std::vector<double> grid{0.0,          0.25 * reach, 0.5 * reach, 0.75 * reach,
                             0.9 * reach,  reach,        1.1 * reach};
    for (const auto& e : seq.entries()) {
        if (e.marginal.kind() != Kind::DiscreteAtoms) continue;
        for (const Atom& a : e.marginal.atom_list())
            if (a.value != 0.0) grid.push_back(std::abs(a.value)); // tie convention edge
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

CorpusMember make_member(std::string name, SummandSequence seq, OracleMode mode) {
    std::vector<double> t = t_grid_for(seq);
    std::vector<double> u = u_grid_for(seq);
    return {std::move(name), std::move(seq), mode, std::move(t), std::move(u)};
}

Marginal coin() { return Marginal::atoms({{0.0, 0.5}, {1.0, 0.5}}); }

std::vector<CorpusMember> build() {
    std::vector<CorpusMember> c;

    for (long n : {1L, 2L, 4L, 16L})
        c.push_back(make_member("rademacher_n" + std::to_string(n),
                                SummandSequence::iid(Marginal::rademacher(1.0), n),
                                OracleMode::Exact));

    c.push_back(make_member("rademacher_mixed_scales",
                            SummandSequence({{Marginal::rademacher(1.0), 2},
                                             {Marginal::rademacher(2.0), 1},
                                             {Marginal::rademacher(3.0), 1}}),
                            OracleMode::Exact));

    {
        std::vector<SummandSequence::Entry> entries;
        for (int k = 0; k < 8; ++k)
            entries.push_back({Marginal::rademacher(std::ldexp(1.0, -k)), 1});
        c.push_back(make_member("rademacher_geometric_decay", SummandSequence(std::move(entries)),
                                OracleMode::Exact));
    }

    c.push_back(make_member(
        "symmetric_sparse_atoms",
        SummandSequence::iid(Marginal::atoms({{-3.0, 0.05}, {0.0, 0.9}, {3.0, 0.05}}), 4),
        OracleMode::Exact));

    c.push_back(make_member(
        "symmetric_five_point",
        SummandSequence::iid(
            Marginal::atoms({{-2.0, 0.25}, {-1.0, 0.1}, {0.0, 0.3}, {1.0, 0.1}, {2.0, 0.25}}), 3),
        OracleMode::Exact));

    for (long n : {1L, 3L, 8L})
        c.push_back(make_member("coin_n" + std::to_string(n), SummandSequence::iid(coin(), n),
                                OracleMode::Exact));

    c.push_back(make_member("skewed_two_point",
                            SummandSequence::iid(Marginal::atoms({{0.0, 0.9}, {5.0, 0.1}}), 4),
                            OracleMode::Exact));

    c.push_back(make_member(
        "nonneg_three_point",
        SummandSequence::iid(Marginal::atoms({{0.0, 0.5}, {1.0, 0.3}, {4.0, 0.2}}), 3),
        OracleMode::Exact));

    c.push_back(make_member("uniform_symmetric_n6",
                            SummandSequence::iid(Marginal::uniform_symmetric(1.0), 6),
                            OracleMode::MonteCarlo));

    c.push_back(make_member("exponential_n4", SummandSequence::iid(Marginal::exponential(1.0), 4),
                            OracleMode::MonteCarlo));

    c.push_back(make_member("censored_exponential_n5",
                            SummandSequence::iid(truncate(Marginal::exponential(1.0), 2.0), 5),
                            OracleMode::MonteCarlo));

    return c;
}

} // namespace

const std::vector<CorpusMember>& builtin_corpus() {
    static const std::vector<CorpusMember> corpus = build();
    return corpus;
}

std::vector<const CorpusMember*> symmetric_members() {
    std::vector<const CorpusMember*> out;
    for (const CorpusMember& m : builtin_corpus())
        if (m.seq.all_symmetric()) out.push_back(&m);
    return out;
}

std::vector<const CorpusMember*> nonnegative_members() {
    std::vector<const CorpusMember*> out;
    for (const CorpusMember& m : builtin_corpus())
        if (m.seq.all_nonnegative()) out.push_back(&m);
    return out;
}

const std::vector<double>& symmetric_p_grid() {
    static const std::vector<double> grid{2, 3, 4, 6, 8, 12, 16, 20};
    return grid;
}

const std::vector<double>& nonnegative_p_grid() {
    static const std::vector<double> grid{1, 2, 3, 4, 6, 8};
    return grid;
}

} // namespace sumbounds
