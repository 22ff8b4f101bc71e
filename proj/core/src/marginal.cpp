#include "sumbounds/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sumbounds/numeric.hpp"
#include "sumbounds/quadrature.hpp"

namespace sumbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kProbFloor = 1e-300; // double-precision floor, reported as 0
constexpr double kAtomTol = 1e-12;

void check_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("p must be a finite real >= 1");
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be a positive finite real");
}

// log|1 + v/lambda|; -inf when the argument is exactly 0.
double log_abs1p_over(double v, double lambda) {
    const double q = v / lambda;
    if (q > -0.5 && q < 0.5) return std::log1p(q);
    const double r = 1.0 + q;
    if (r == 0.0) return kNegInf;
    return std::log(std::abs(r));
}

double atoms_log_orlicz(const std::vector<Atom>& atoms, double lambda, double p) {
    std::vector<double> logs;
    logs.reserve(atoms.size());
    for (const Atom& a : atoms) {
        const double la = log_abs1p_over(a.value, lambda);
        if (la == kNegInf) continue; // |1 + v/lambda|^p = 0
        logs.push_back(std::log(a.probability) + p * la);
    }
    return log_sum_exp(logs);
}

std::vector<Atom> rademacher_atoms(double s) {
    return {{-s, 0.5}, {s, 0.5}};
}

// log of the integral part of E|1+X/lambda|^p for Exponential(mean s)
// censored at T (T = +inf means uncensored). The integrand is lifted to a
// frame where its maximum is 1 so that p in the hundreds cannot overflow.
double exp_family_log_orlicz_integral(double s, double T, double lambda, double p) {
    const auto g = [&](double x) {
        return p * log_abs1p_over(x, lambda) - x / s - std::log(s);
    };
    const double x_peak = std::clamp(p * s - lambda, 0.0, std::isfinite(T) ? T : kInf);

    double upper = T;
    if (!std::isfinite(T)) {
        // g is concave for x >= 0, so past the peak it sits below its tangent;
        // once the slope is at least 1/(2s), the tail beyond `upper` is at most
        // exp(g(upper)) * 2s. Push upper until that tail is negligible.
        upper = std::max(x_peak + s, 2.0 * p * s - lambda + s);
        const double a_peak = g(x_peak);
        int guard = 0;
        while (g(upper) > a_peak - 120.0) {
            upper = x_peak + 2.0 * (upper - x_peak);
            if (++guard > 300)
                throw std::runtime_error("orlicz_term: exponential cutoff search diverged");
        }
    }

    const double A = std::max({g(0.0), g(x_peak), g(upper)});
    const auto frame = [&](double x) { return std::exp(g(x) - A); };
    double integral = 0.0;
    if (x_peak > 0.0 && x_peak < upper) {
        integral = adaptive_simpson(frame, 0.0, x_peak) + adaptive_simpson(frame, x_peak, upper);
    } else {
        integral = adaptive_simpson(frame, 0.0, upper);
    }
    if (!std::isfinite(T)) {
        // a-posteriori tail check; extends the domain in the rare case the
        // fixed 120-e-fold cutoff was not enough relative to the bulk
        int guard = 0;
        while (std::exp(g(upper) - A) * 2.0 * s > 1e-13 * integral) {
            const double next = upper + std::max(upper - x_peak, s);
            integral += adaptive_simpson(frame, upper, next);
            upper = next;
            if (++guard > 60)
                throw std::runtime_error("orlicz_term: exponential tail refused to decay");
        }
    }
    if (integral <= 0.0) return kNegInf;
    return A + std::log(integral);
}

// log of the integral part for UniformSymmetric(scale s) restricted to
// [-w, w]; the |1+x/lambda| kink at x = -lambda splits the panels.
double uniform_log_orlicz_integral(double s, double w, double lambda, double p) {
    const auto g = [&](double x) {
        return p * log_abs1p_over(x, lambda) - std::log(2.0 * s);
    };
    const double A = std::max(g(-w), g(w));
    const auto frame = [&](double x) { return std::exp(g(x) - A); };
    double integral = 0.0;
    if (-w < -lambda && -lambda < w) {
        integral = adaptive_simpson(frame, -w, -lambda) + adaptive_simpson(frame, -lambda, w);
    } else {
        integral = adaptive_simpson(frame, -w, w);
    }
    if (integral <= 0.0) return kNegInf;
    return A + std::log(integral);
}

} // namespace

// ---------------------------------------------------------------------------
// Marginal construction
// ---------------------------------------------------------------------------

Marginal Marginal::atoms(std::vector<Atom> atoms) {
    if (atoms.empty())
        throw std::invalid_argument("Marginal::atoms: empty atom list");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    double mass = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i].value))
            throw std::invalid_argument("Marginal::atoms: atom value must be finite");
        if (!(atoms[i].probability > 0.0) || atoms[i].probability > 1.0)
            throw std::invalid_argument("Marginal::atoms: probability must be in (0,1]");
        if (i > 0 && !(atoms[i].value > atoms[i - 1].value))
            throw std::invalid_argument("Marginal::atoms: atom values must be distinct");
        mass += atoms[i].probability;
    }
    if (std::abs(mass - 1.0) > kAtomTol)
        throw std::invalid_argument("Marginal::atoms: probabilities must sum to 1 within 1e-12");

    Marginal m;
    m.kind_ = Kind::DiscreteAtoms;
    m.atoms_ = std::move(atoms);

    // derive flags
    m.nonnegative_ = std::all_of(m.atoms_.begin(), m.atoms_.end(),
                                 [](const Atom& a) { return a.value >= 0.0; });
    bool sym = true;
    std::size_t i = 0, j = m.atoms_.size() - 1;
    while (i < j) {
        const Atom& lo = m.atoms_[i];
        const Atom& hi = m.atoms_[j];
        const bool values_match =
            std::abs(lo.value + hi.value) <= kAtomTol * std::max(1.0, std::abs(hi.value));
        if (!values_match || std::abs(lo.probability - hi.probability) > kAtomTol) {
            sym = false;
            break;
        }
        ++i;
        --j;
    }
    if (sym && i == j && std::abs(m.atoms_[i].value) > kAtomTol)
        sym = false;
    m.symmetric_ = sym;
    return m;
}

Marginal Marginal::point_mass(double value) {
    return atoms({{value, 1.0}});
}

Marginal Marginal::rademacher(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("Marginal::rademacher: scale must be positive");
    Marginal m;
    m.kind_ = Kind::ScaledRademacher;
    m.scale_ = scale;
    m.symmetric_ = true;
    m.nonnegative_ = false;
    return m;
}

Marginal Marginal::exponential(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("Marginal::exponential: scale must be positive");
    Marginal m;
    m.kind_ = Kind::Exponential;
    m.scale_ = scale;
    m.symmetric_ = false;
    m.nonnegative_ = true;
    return m;
}

Marginal Marginal::uniform_symmetric(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("Marginal::uniform_symmetric: scale must be positive");
    Marginal m;
    m.kind_ = Kind::UniformSymmetric;
    m.scale_ = scale;
    m.symmetric_ = true;
    m.nonnegative_ = false;
    return m;
}

const std::vector<Atom>& Marginal::atom_list() const {
    if (kind_ != Kind::DiscreteAtoms)
        throw std::logic_error("Marginal::atom_list: not an atom marginal");
    return atoms_;
}

double Marginal::scale() const {
    if (kind_ == Kind::DiscreteAtoms)
        throw std::logic_error("Marginal::scale: atom marginals have no scale");
    return scale_;
}

bool Marginal::is_point_mass_at_zero() const {
    return kind_ == Kind::DiscreteAtoms && atoms_.size() == 1 && atoms_[0].value == 0.0;
}

double Marginal::max_abs_support() const {
    switch (kind_) {
    case Kind::DiscreteAtoms: {
        double m = 0.0;
        for (const Atom& a : atoms_) m = std::max(m, std::abs(a.value));
        return m;
    }
    case Kind::ScaledRademacher:
        return scale_;
    case Kind::Exponential:
        return truncation_ ? *truncation_ : kInf;
    case Kind::UniformSymmetric:
        return truncation_ ? std::min(scale_, *truncation_) : scale_;
    }
    return 0.0;
}

double Marginal::censor_atom_probability() const {
    if (!truncation_) return 0.0;
    const double T = *truncation_;
    if (kind_ == Kind::Exponential) return std::exp(-T / scale_);
    if (kind_ == Kind::UniformSymmetric)
        return T >= scale_ ? 0.0 : (scale_ - T) / scale_;
    return 0.0;
}

// ---------------------------------------------------------------------------
// Elementary expectations
// ---------------------------------------------------------------------------

double log_orlicz_term(const Marginal& m, double lambda, double p) {
    check_lambda(lambda);
    check_p(p);
    switch (m.kind()) {
    case Kind::DiscreteAtoms:
        return atoms_log_orlicz(m.atom_list(), lambda, p);
    case Kind::ScaledRademacher:
        return atoms_log_orlicz(rademacher_atoms(m.scale()), lambda, p);
    case Kind::Exponential: {
        const double T = m.truncation() ? *m.truncation() : kInf;
        const double integral = exp_family_log_orlicz_integral(m.scale(), T, lambda, p);
        if (!m.truncation()) return integral;
        return log_sum_exp({-*m.truncation() / m.scale(), integral});
    }
    case Kind::UniformSymmetric: {
        const double w = m.truncation() ? std::min(m.scale(), *m.truncation()) : m.scale();
        const double integral = uniform_log_orlicz_integral(m.scale(), w, lambda, p);
        const double p0 = m.censor_atom_probability();
        if (p0 == 0.0) return integral;
        return log_sum_exp({std::log(p0), integral});
    }
    }
    return kNegInf;
}

double orlicz_term(const Marginal& m, double lambda, double p) {
    return std::exp(log_orlicz_term(m, lambda, p));
}

double tail(const Marginal& m, double u) {
    if (!(u >= 0.0))
        throw std::invalid_argument("tail: u must be >= 0");
    double q = 0.0;
    switch (m.kind()) {
    case Kind::DiscreteAtoms:
        for (const Atom& a : m.atom_list())
            if (std::abs(a.value) > u) q += a.probability;
        break;
    case Kind::ScaledRademacher:
        q = m.scale() > u ? 1.0 : 0.0;
        break;
    case Kind::Exponential: {
        const double base = std::exp(-u / m.scale());
        if (m.truncation()) {
            const double T = *m.truncation();
            q = u >= T ? 0.0 : base - std::exp(-T / m.scale());
        } else {
            q = base;
        }
        break;
    }
    case Kind::UniformSymmetric: {
        const double w = m.truncation() ? std::min(m.scale(), *m.truncation()) : m.scale();
        q = u >= w ? 0.0 : (w - u) / m.scale();
        break;
    }
    }
    if (q < kProbFloor) return 0.0;
    return std::min(q, 1.0);
}

double abs_moment(const Marginal& m, double p) {
    check_p(p);
    switch (m.kind()) {
    case Kind::DiscreteAtoms: {
        std::vector<double> logs;
        logs.reserve(m.atom_list().size());
        for (const Atom& a : m.atom_list()) {
            if (a.value == 0.0) continue;
            logs.push_back(std::log(a.probability) + p * std::log(std::abs(a.value)));
        }
        return std::exp(log_sum_exp(logs));
    }
    case Kind::ScaledRademacher:
        return std::pow(m.scale(), p);
    case Kind::Exponential: {
        const double s = m.scale();
        if (!m.truncation())
            return std::exp(p * std::log(s) + std::lgamma(p + 1.0));
        const double T = *m.truncation();
        const auto g = [&](double x) {
            return x <= 0.0 ? kNegInf : p * std::log(x) - x / s - std::log(s);
        };
        const double x_peak = std::clamp(p * s, 0.0, T);
        const double A = std::max({g(x_peak), g(T), g(0.5 * T)});
        const auto frame = [&](double x) {
            const double v = g(x);
            return v == kNegInf ? 0.0 : std::exp(v - A);
        };
        double integral = 0.0;
        if (x_peak > 0.0 && x_peak < T)
            integral = adaptive_simpson(frame, 0.0, x_peak) + adaptive_simpson(frame, x_peak, T);
        else
            integral = adaptive_simpson(frame, 0.0, T);
        return integral <= 0.0 ? 0.0 : std::exp(A + std::log(integral));
    }
    case Kind::UniformSymmetric: {
        const double s = m.scale();
        const double w = m.truncation() ? std::min(s, *m.truncation()) : s;
        return std::pow(w, p + 1.0) / (s * (p + 1.0));
    }
    }
    return 0.0;
}

double mean(const Marginal& m) {
    switch (m.kind()) {
    case Kind::DiscreteAtoms: {
        double s = 0.0;
        for (const Atom& a : m.atom_list()) s += a.probability * a.value;
        return s;
    }
    case Kind::ScaledRademacher:
    case Kind::UniformSymmetric:
        return 0.0;
    case Kind::Exponential: {
        const double s = m.scale();
        if (!m.truncation()) return s;
        const double T = *m.truncation();
        return s - (s + T) * std::exp(-T / s);
    }
    }
    return 0.0;
}

double sample(const Marginal& m, RngStream& rng) {
    const double u = rng.uniform01();
    switch (m.kind()) {
    case Kind::DiscreteAtoms: {
        double cum = 0.0;
        for (const Atom& a : m.atom_list()) {
            cum += a.probability;
            if (u < cum) return a.value;
        }
        return m.atom_list().back().value; // guard against rounding in cum
    }
    case Kind::ScaledRademacher:
        return u < 0.5 ? -m.scale() : m.scale();
    case Kind::Exponential: {
        const double x = -m.scale() * std::log1p(-u);
        if (m.truncation() && x > *m.truncation()) return 0.0;
        return x;
    }
    case Kind::UniformSymmetric: {
        const double x = (2.0 * u - 1.0) * m.scale();
        if (m.truncation() && std::abs(x) > *m.truncation()) return 0.0;
        return x;
    }
    }
    return 0.0;
}

Marginal truncate(const Marginal& m, double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("truncate: t must be >= 0");
    if (t == kInf) return m;
    switch (m.kind()) {
    case Kind::DiscreteAtoms: {
        std::vector<Atom> kept;
        double removed = 0.0;
        for (const Atom& a : m.atom_list()) {
            if (std::abs(a.value) <= t) // ties at |X| = t stay included
                kept.push_back(a);
            else
                removed += a.probability;
        }
        if (removed == 0.0) return m;
        if (kept.empty()) return Marginal::point_mass(0.0);
        auto at_zero = std::find_if(kept.begin(), kept.end(),
                                    [](const Atom& a) { return a.value == 0.0; });
        if (at_zero != kept.end())
            at_zero->probability += removed;
        else
            kept.push_back({0.0, removed});
        return Marginal::atoms(std::move(kept));
    }
    case Kind::ScaledRademacher:
        return t >= m.scale() ? m : Marginal::point_mass(0.0);
    case Kind::Exponential: {
        if (t == 0.0) return Marginal::point_mass(0.0);
        if (m.truncation() && t >= *m.truncation()) return m;
        Marginal out = m;
        out.truncation_ = t;
        return out;
    }
    case Kind::UniformSymmetric: {
        if (t == 0.0) return Marginal::point_mass(0.0);
        const double w = m.truncation() ? std::min(m.scale(), *m.truncation()) : m.scale();
        if (t >= w) return m;
        Marginal out = m;
        out.truncation_ = t;
        return out;
    }
    }
    return m;
}

// ---------------------------------------------------------------------------
// SummandSequence
// ---------------------------------------------------------------------------

SummandSequence::SummandSequence(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty())
        throw std::invalid_argument("SummandSequence: at least one summand required");
    for (const Entry& e : entries_) {
        if (e.count < 1)
            throw std::invalid_argument("SummandSequence: repetition count must be >= 1");
        if (total_ > (1L << 40))
            throw std::invalid_argument("SummandSequence: expanded length too large");
        total_ += e.count;
        all_symmetric_ = all_symmetric_ && e.marginal.symmetric();
        all_nonnegative_ = all_nonnegative_ && e.marginal.nonnegative();
    }
}

SummandSequence SummandSequence::iid(Marginal m, long n) {
    return SummandSequence({Entry{std::move(m), n}});
}

bool SummandSequence::all_degenerate_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Entry& e) { return e.marginal.is_point_mass_at_zero(); });
}

SummandSequence truncate(const SummandSequence& seq, double t) {
    std::vector<SummandSequence::Entry> out;
    out.reserve(seq.entries().size());
    for (const auto& e : seq.entries())
        out.push_back({truncate(e.marginal, t), e.count});
    return SummandSequence(std::move(out));
}

SummandSequence scaled(const SummandSequence& seq, double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("scaled: factor must be positive and finite");
    std::vector<SummandSequence::Entry> out;
    out.reserve(seq.entries().size());
    for (const auto& e : seq.entries()) {
        const Marginal& m = e.marginal;
        Marginal sm = m;
        switch (m.kind()) {
        case Kind::DiscreteAtoms: {
            std::vector<Atom> atoms = m.atom_list();
            for (Atom& a : atoms) a.value *= c;
            sm = Marginal::atoms(std::move(atoms));
            break;
        }
        case Kind::ScaledRademacher:
            sm = Marginal::rademacher(m.scale() * c);
            break;
        case Kind::Exponential:
            sm = Marginal::exponential(m.scale() * c);
            break;
        case Kind::UniformSymmetric:
            sm = Marginal::uniform_symmetric(m.scale() * c);
            break;
        }
        if (m.truncation())
            sm = truncate(sm, *m.truncation() * c);
        out.push_back({std::move(sm), e.count});
    }
    return SummandSequence(std::move(out));
}

double truncated_sum_l2(const SummandSequence& seq, double t) {
    double var_sum = 0.0;
    double mean_sum = 0.0;
    for (const auto& e : seq.entries()) {
        const Marginal y = truncate(e.marginal, t);
        const double m1 = mean(y);
        const double m2 = abs_moment(y, 2.0);
        var_sum += static_cast<double>(e.count) * (m2 - m1 * m1);
        mean_sum += static_cast<double>(e.count) * m1;
    }
    return std::sqrt(std::max(0.0, var_sum + mean_sum * mean_sum));
}

double sum_abs_means(const SummandSequence& seq) {
    double s = 0.0;
    for (const auto& e : seq.entries())
        s += static_cast<double>(e.count) * abs_moment(e.marginal, 1.0);
    return s;
}

double sum_tails(const SummandSequence& seq, double u) {
    double s = 0.0;
    for (const auto& e : seq.entries())
        s += static_cast<double>(e.count) * tail(e.marginal, u);
    return s;
}

double max_abs_tail(const SummandSequence& seq, double u) {
    double log_prod = 0.0;
    for (const auto& e : seq.entries()) {
        const double q = tail(e.marginal, u);
        if (q >= 1.0) return 1.0;
        log_prod += static_cast<double>(e.count) * std::log1p(-q);
    }
    // + 0.0 normalizes the -0.0 that -expm1(0) yields past the support.
    const double result = -std::expm1(log_prod) + 0.0;
    return std::clamp(result, 0.0, 1.0);
}

double total_abs_range(const SummandSequence& seq) {
    double s = 0.0;
    for (const auto& e : seq.entries())
        s += static_cast<double>(e.count) * e.marginal.max_abs_support();
    return s;
}

} // namespace sumbounds
