#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mamreal/conditions.hpp"
#include "mamreal/mammillary.hpp"
#include "mamreal/errors.hpp"
#include "mamreal/params.hpp"
#include "mamreal/poly.hpp"
#include "mamreal/statespace.hpp"
#include "mamreal/tf.hpp"
#include "mamreal/tolerances.hpp"

namespace mamreal {

/// Exchanges (k21, k31) and (k12, k13): the same model with the two
/// peripheral compartments relabelled.
template <typename Scalar>
PkPdParams<Scalar> apply_swap(PkPdParams<Scalar> p) {
    std::swap(p.k21, p.k31);
    std::swap(p.k12, p.k13);
    return p;
}

/// p relabelled so that k21 < k31.
template <typename Scalar>
PkPdParams<Scalar> ordered(const PkPdParams<Scalar>& p) {
    return p.k21 < p.k31 ? p : apply_swap(p);
}

/// Schnider propofol parameters for a 40-year-old, 163 cm, 54 kg female
/// patient, stored as published (k21 > k31).
inline PkPdParamsd schnider_fixture() {
    PkPdParamsd p;
    p.k1e_over_V1 = 0.0018;
    p.k21 = 0.0011;
    p.k31 = 0.0001;
    p.ke0 = 0.0077;
    p.k10 = 0.0065;
    p.k12 = 0.0063;
    p.k13 = 0.0033;
    return p;
}

/// schnider_fixture() relabelled to k21 < k31.
inline PkPdParamsd schnider_fixture_ordered() { return ordered(schnider_fixture()); }

enum class PkPdVerdict { PositiveRealizations, RealizationsOnly, NoRealization };

inline const char* to_string(PkPdVerdict v) {
    switch (v) {
        case PkPdVerdict::PositiveRealizations: return "POSITIVE_REALIZATIONS";
        case PkPdVerdict::RealizationsOnly: return "REALIZATIONS_ONLY";
        case PkPdVerdict::NoRealization: return "NO_REALIZATION";
    }
    return "?";
}

/// Per-candidate check for one choice of filter pole z0.
template <typename Scalar>
struct BranchCheck {
    Scalar z0 = Scalar(0);
    int multiplicity = 1;
    /// Sign pattern a(0) > 0, a(z2) < 0, a(z3) > 0 with alpha(s) = (s - z0) a(s).
    ConditionEntry<Scalar> sign_pattern;
};

template <typename Scalar>
struct PkPdConditionReport {
    /// Global conditions; its verdict field is unused.
    ConditionReport<Scalar> global;
    std::vector<BranchCheck<Scalar>> branches;
    PkPdVerdict verdict = PkPdVerdict::NoRealization;
};

namespace detail {

// Distinct real negative poles in descending order, with multiplicities.
template <typename Scalar>
std::vector<std::pair<Scalar, int>> negative_real_poles(const RootSet<Scalar>& poles, Scalar separation) {
    using std::abs;
    std::vector<std::pair<Scalar, int>> out;
    for (Scalar v : poles.real_values()) {
        if (!(v < Scalar(0))) continue;
        if (!out.empty() && abs(out.back().first - v) <= separation * std::max(abs(out.back().first), abs(v))) {
            ++out.back().second;
            continue;
        }
        out.emplace_back(v, 1);
    }
    return out;
}

template <typename Scalar>
struct BranchValues {
    Scalar a0, a_z2, a_z3;
    Scalar k10, k12, k13;
};

template <typename Scalar>
BranchValues<Scalar> branch_values(const Polynomial<Scalar>& den, Scalar z0, Scalar z2, Scalar z3, Scalar deflation) {
    // The deflation checks that z0 is a root; a(z) itself is evaluated as
    // alpha(z) / (z - z0), which avoids the rounding of the quotient
    // coefficients when z0 is small.
    deflate(den, z0, deflation);
    BranchValues<Scalar> v;
    v.a0 = eval(den, Scalar(0)) / -z0;
    v.a_z2 = eval(den, z2) / (z2 - z0);
    v.a_z3 = eval(den, z3) / (z3 - z0);
    v.k10 = v.a0 / (z2 * z3);
    v.k12 = v.a_z2 / (z2 * (z2 - z3));
    v.k13 = -v.a_z3 / (z3 * (z2 - z3));
    return v;
}

}  // namespace detail

/// Conditions for a realization by the three-compartment PK model with an
/// effect-site filter (order 4).
///
/// Realization: relative degree 2, numerator roots simple, real, and
/// nonzero, at least one real pole, no pole/zero pair within the separation
/// tolerance. Positivity: positive numerator gain, negative numerator
/// roots, a real negative pole z0, and per z0 the sign pattern of a(s).
template <typename Scalar>
PkPdConditionReport<Scalar> check_conditions_pkpd(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol = {}) {
    using std::abs;
    if (h.order() != 4) throw WrongOrder(4, h.order());
    PkPdConditionReport<Scalar> out;
    auto& r = out.global;
    r.tolerances = tol;

    auto& rel = detail::add_entry(r, "relative_degree_two", Basis::Realization, "relative degree of H equals 2");
    rel.witnesses.push_back({"relative_degree", Scalar(h.relative_degree())});
    rel.status = detail::status_of(h.relative_degree() == 2);

    RootSet<Scalar> zeros;
    if (h.num().degree() >= 1) zeros = h.zeros(tol);
    auto& real = detail::add_entry(r, "numerator_roots_real", Basis::Realization, "numerator roots are real");
    auto& simple = detail::add_entry(r, "numerator_roots_simple", Basis::Realization, "numerator roots are simple");
    auto& nonzero = detail::add_entry(r, "numerator_roots_nonzero", Basis::Realization, "numerator roots are nonzero");
    for (std::size_t i = 0; i < zeros.roots.size(); ++i) {
        const auto& z = zeros.roots[i];
        const std::string name = "z" + std::to_string(i + 2);
        real.witnesses.push_back({name + ".re", z.value.real()});
        if (!z.is_real) real.witnesses.push_back({name + ".im", z.value.imag()});
    }
    real.status = detail::status_of(zeros.all_real());
    simple.status = detail::status_of(zeros.all_simple());
    const Scalar zero_tol = tol.nonzero_root * (Scalar(1) + h.num().scale());
    bool all_nonzero = true;
    for (const auto& z : zeros.roots) all_nonzero = all_nonzero && abs(z.value) > zero_tol;
    nonzero.witnesses.push_back({"threshold", zero_tol});
    nonzero.status = detail::status_of(all_nonzero);
    if (zeros.all_real()) r.numerator_roots = zeros.real_values();

    const auto poles = h.poles(tol);
    auto& has_real = detail::add_entry(r, "denominator_has_real_root", Basis::Realization,
                                       "denominator has at least one real root");
    for (Scalar v : poles.real_values()) has_real.witnesses.push_back({"pole", v});
    has_real.status = detail::status_of(!poles.real_values().empty());

    auto& coprime = detail::add_entry(r, "no_pole_zero_cancellation", Basis::Realization,
                                      "no numerator root coincides with a denominator root");
    if (auto c = near_cancellation(h, tol)) {
        coprime.status = Status::Fail;
        coprime.witnesses.push_back({"zero", c->zero.real()});
        coprime.witnesses.push_back({"pole", c->pole.real()});
        coprime.detail = "order-4 structure requires coprime numerator and denominator";
    } else {
        coprime.status = Status::Pass;
    }

    auto& gain = detail::add_entry(r, "numerator_gain_positive", Basis::Positivity,
                                   "numerator leading coefficient is positive");
    gain.witnesses.push_back({"k", h.gain()});
    gain.status = detail::status_of(h.gain() > Scalar(0));

    detail::check_negative_roots(zeros, r);

    const auto candidates = detail::negative_real_poles(poles, tol.separation);
    auto& has_negative = detail::add_entry(r, "denominator_has_negative_real_root", Basis::Positivity,
                                           "denominator has at least one real negative root z0");
    has_negative.status = detail::status_of(!candidates.empty());

    const bool can_branch = zeros.all_real() && zeros.size() == 2 && zeros.all_simple();
    for (const auto& [z0, mult] : candidates) {
        BranchCheck<Scalar> b;
        b.z0 = z0;
        b.multiplicity = mult;
        b.sign_pattern.id = "a_sign_pattern";
        b.sign_pattern.basis = Basis::Positivity;
        b.sign_pattern.description = "a(0) > 0, a(z2) < 0, a(z3) > 0 where alpha(s) = (s - z0) a(s)";
        if (mult > 1) b.sign_pattern.detail = "repeated pole; deflated once";
        if (!can_branch) {
            b.sign_pattern.status = Status::Skipped;
            b.sign_pattern.detail = "requires two simple real numerator roots";
        } else {
            const auto v = detail::branch_values(h.den(), z0, r.numerator_roots[0], r.numerator_roots[1], tol.deflation);
            b.sign_pattern.witnesses = {{"a(0)", v.a0}, {"a(z2)", v.a_z2}, {"a(z3)", v.a_z3}};
            b.sign_pattern.status = detail::status_of(v.a0 > Scalar(0) && v.a_z2 < Scalar(0) && v.a_z3 > Scalar(0));
        }
        out.branches.push_back(std::move(b));
    }

    detail::warn_near_cancellation(h, tol, r);
    if (!r.group_passed(Basis::Realization)) {
        out.verdict = PkPdVerdict::NoRealization;
    } else {
        bool any = false;
        for (const auto& b : out.branches) any = any || b.sign_pattern.passed();
        out.verdict = r.group_passed(Basis::Positivity) && any ? PkPdVerdict::PositiveRealizations
                                                               : PkPdVerdict::RealizationsOnly;
    }
    return out;
}

template <typename Scalar>
struct PkPdBranch {
    Scalar z0 = Scalar(0);
    int multiplicity = 1;
    bool accepted = false;
    /// Closed-form parameters for this z0, positive or not.
    PkPdParams<Scalar> candidate;
    /// Set only for accepted branches.
    std::optional<PkPdParams<Scalar>> params;
    /// Id of the condition that rejected the branch; empty when accepted.
    std::string failed_condition;
    /// Forward verification residual, accepted branches only.
    Scalar residual = Scalar(0);
};

template <typename Scalar>
struct PkPdEnumeration {
    PkPdConditionReport<Scalar> report;
    std::vector<PkPdBranch<Scalar>> branches;
    std::optional<std::size_t> selected;

    std::size_t accepted_count() const {
        std::size_t n = 0;
        for (const auto& b : branches) n += b.accepted ? 1 : 0;
        return n;
    }
};

/// Every positive realization over the choice of filter pole z0.
///
/// With beta(s) = k (s - z2)(s - z3), z2 > z3: k1e/V1 = k, k21 = -z2,
/// k31 = -z3, and for each real negative pole z0, ke0 = -z0 and k10, k12, k13
/// from a(s) = alpha(s) / (s - z0). A branch is kept iff k10, k12, k13 are all
/// positive. If reference_ke0 is given, `selected` is the accepted branch
/// whose ke0 is closest to it.
template <typename Scalar>
PkPdEnumeration<Scalar> realize_pkpd(const TransferFunction<Scalar>& h, std::optional<Scalar> reference_ke0 = {},
                                     const Tolerances<Scalar>& tol = {}) {
    using std::abs;
    PkPdEnumeration<Scalar> out;
    out.report = check_conditions_pkpd(h, tol);
    if (out.report.verdict == PkPdVerdict::NoRealization) throw ConditionsFailed(out.report.global.failed_ids());

    const bool positive_base = out.report.global.group_passed(Basis::Positivity);
    std::string base_failure;
    for (const auto& e : out.report.global.entries)
        if (e.basis == Basis::Positivity && e.status == Status::Fail && base_failure.empty()) base_failure = e.id;

    const Scalar z2 = out.report.global.numerator_roots[0];
    const Scalar z3 = out.report.global.numerator_roots[1];
    for (const auto& check : out.report.branches) {
        PkPdBranch<Scalar> b;
        b.z0 = check.z0;
        b.multiplicity = check.multiplicity;
        const auto v = detail::branch_values(h.den(), check.z0, z2, z3, tol.deflation);
        auto& c = b.candidate;
        c.k1e_over_V1 = h.gain();
        c.k21 = -z2;
        c.k31 = -z3;
        c.ke0 = -check.z0;
        c.k10 = v.k10;
        c.k12 = v.k12;
        c.k13 = v.k13;
        const bool rates_positive = c.k10 > Scalar(0) && c.k12 > Scalar(0) && c.k13 > Scalar(0);
        b.accepted = positive_base && rates_positive;
        if (b.accepted) {
            b.residual = coefficient_residual(transfer_function(c), h);
            if (!(b.residual <= tol.verify))
                throw VerificationFailed(static_cast<double>(b.residual), static_cast<double>(tol.verify));
            b.params = c;
        } else {
            b.failed_condition = positive_base ? "a_sign_pattern" : base_failure;
        }
        out.branches.push_back(std::move(b));
    }

    if (reference_ke0) {
        for (std::size_t i = 0; i < out.branches.size(); ++i) {
            if (!out.branches[i].accepted) continue;
            if (!out.selected || abs(out.branches[i].candidate.ke0 - *reference_ke0) <
                                     abs(out.branches[*out.selected].candidate.ke0 - *reference_ke0))
                out.selected = i;
        }
    }
    return out;
}

}  // namespace mamreal
