#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mamreal/conditions.hpp"
#include "mamreal/errors.hpp"
#include "mamreal/params.hpp"
#include "mamreal/poly.hpp"
#include "mamreal/statespace.hpp"
#include "mamreal/tf.hpp"
#include "mamreal/tolerances.hpp"

namespace mamreal {

namespace detail {

// Shared numerator analysis for the mammillary checkers: order, relative
// degree one, monic numerator with simple, real, nonzero roots.
template <typename Scalar>
RootSet<Scalar> check_exact_realization(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol,
                                        ConditionReport<Scalar>& r) {
    using std::abs;
    auto& order = add_entry(r, "order_at_least_two", Basis::Realization, "transfer function order n >= 2");
    order.witnesses.push_back({"order", Scalar(h.order())});
    order.status = status_of(h.order() >= 2);

    auto& rel = add_entry(r, "relative_degree_one", Basis::Realization, "relative degree of H equals 1");
    rel.witnesses.push_back({"relative_degree", Scalar(h.relative_degree())});
    rel.status = status_of(h.relative_degree() == 1);

    auto& monic = add_entry(r, "numerator_monic", Basis::Realization, "numerator is monic");
    monic.witnesses.push_back({"leading", h.num().leading()});
    monic.status = status_of(abs(h.num().leading() - Scalar(1)) <= tol.monic);

    RootSet<Scalar> zeros;
    if (h.num().degree() >= 1) zeros = h.zeros(tol);

    auto& real = add_entry(r, "numerator_roots_real", Basis::Realization, "numerator roots are real");
    auto& simple = add_entry(r, "numerator_roots_simple", Basis::Realization, "numerator roots are simple");
    auto& nonzero = add_entry(r, "numerator_roots_nonzero", Basis::Realization, "numerator roots are nonzero");
    for (std::size_t i = 0; i < zeros.roots.size(); ++i) {
        const auto& z = zeros.roots[i];
        const std::string name = "z" + std::to_string(i + 2);
        real.witnesses.push_back({name + ".re", z.value.real()});
        if (!z.is_real) real.witnesses.push_back({name + ".im", z.value.imag()});
    }
    real.status = status_of(zeros.all_real());
    simple.status = status_of(zeros.all_simple());
    if (!zeros.all_simple()) simple.detail = "two or more numerator roots coincide within the separation tolerance";

    const Scalar zero_tol = tol.nonzero_root * (Scalar(1) + h.num().scale());
    bool all_nonzero = true;
    for (const auto& z : zeros.roots)
        if (abs(z.value) <= zero_tol) all_nonzero = false;
    nonzero.witnesses.push_back({"threshold", zero_tol});
    nonzero.status = status_of(all_nonzero);

    if (zeros.all_real()) r.numerator_roots = zeros.real_values();
    return zeros;
}

template <typename Scalar>
void check_negative_roots(const RootSet<Scalar>& zeros, ConditionReport<Scalar>& r) {
    auto& neg = add_entry(r, "numerator_roots_negative", Basis::Positivity, "numerator roots are strictly negative");
    if (!zeros.all_real()) {
        neg.detail = "requires real numerator roots";
        neg.status = Status::Fail;
        return;
    }
    bool ok = true;
    for (Scalar z : zeros.real_values()) ok = ok && z < Scalar(0);
    neg.status = status_of(ok);
}

template <typename Scalar>
void warn_near_cancellation(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol,
                            ConditionReport<Scalar>& r) {
    if (auto c = near_cancellation(h, tol))
        r.warnings.push_back("numerator root " + std::to_string(static_cast<double>(c->zero.real())) +
                             " nearly cancels denominator root " + std::to_string(static_cast<double>(c->pole.real())) +
                             "; the pair is kept");
}

template <typename Scalar>
bool realization_ready(const ConditionReport<Scalar>& r) {
    return r.verdict != Verdict::NoRealization;
}

template <typename Scalar>
Scalar verify_forward(const MammillaryParams<Scalar>& p, const TransferFunction<Scalar>& h, Scalar tolerance) {
    const Scalar residual = coefficient_residual(transfer_function(p), h);
    if (!(residual <= tolerance)) throw VerificationFailed(static_cast<double>(residual), static_cast<double>(tolerance));
    return residual;
}

}  // namespace detail

/// Existence and positivity conditions for a mammillary realization of
/// order n = deg(den).
///
/// Realization: order >= 2, relative degree 1, monic numerator with simple,
/// real, nonzero roots. Positivity additionally requires negative numerator
/// roots, H(0) > 0, and beta_i(z_i) / alpha(z_i) > 0 for every numerator
/// root z_i, where beta_i(s) = z_i * beta(s) / (s - z_i).
template <typename Scalar>
ConditionReport<Scalar> check_conditions(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol = {}) {
    ConditionReport<Scalar> r;
    r.tolerances = tol;
    const auto zeros = detail::check_exact_realization(h, tol, r);

    detail::check_negative_roots(zeros, r);

    auto& dc = detail::add_entry(r, "dc_gain_positive", Basis::Positivity, "H(0) > 0");
    try {
        const Scalar h0 = eval_at_zero(h);
        dc.witnesses.push_back({"H(0)", h0});
        dc.status = detail::status_of(h0 > Scalar(0));
    } catch (const PoleAtOrigin&) {
        dc.status = Status::Fail;
        dc.detail = "pole at s = 0";
    }

    auto& residue = detail::add_entry(r, "residue_signs", Basis::Positivity,
                                      "beta_i(z_i) / alpha(z_i) > 0 for every numerator root z_i");
    if (!zeros.all_real() || !zeros.all_simple() || zeros.size() == 0) {
        residue.status = Status::Skipped;
        residue.detail = "requires simple real numerator roots";
    } else {
        bool ok = true;
        const auto z = zeros.real_values();
        for (std::size_t i = 0; i < z.size(); ++i) {
            const std::string idx = std::to_string(i + 2);
            const Scalar alpha_z = eval(h.den(), z[i]);
            const Scalar beta_i = z[i] * eval(deflate(h.num(), z[i], tol.deflation).quotient, z[i]);
            residue.witnesses.push_back({"alpha(z" + idx + ")", alpha_z});
            residue.witnesses.push_back({"beta_" + idx + "(z" + idx + ")", beta_i});
            ok = ok && alpha_z != Scalar(0) && ((alpha_z > Scalar(0)) == (beta_i > Scalar(0)));
        }
        residue.status = detail::status_of(ok);
    }

    detail::warn_near_cancellation(h, tol, r);
    r.verdict = detail::verdict_of(r);
    return r;
}

/// Order-3 checker: the existence conditions plus the sign pattern
/// alpha(0) > 0, alpha(z2) < 0, alpha(z3) > 0 with z2 > z3.
template <typename Scalar>
ConditionReport<Scalar> check_conditions3(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol = {}) {
    if (h.order() != 3) throw WrongOrder(3, h.order());
    ConditionReport<Scalar> r;
    r.tolerances = tol;
    const auto zeros = detail::check_exact_realization(h, tol, r);
    detail::check_negative_roots(zeros, r);

    auto& signs = detail::add_entry(r, "alpha_sign_pattern", Basis::Positivity,
                                    "alpha(0) > 0, alpha(z2) < 0, alpha(z3) > 0");
    const Scalar a0 = eval(h.den(), Scalar(0));
    signs.witnesses.push_back({"alpha(0)", a0});
    if (!zeros.all_real() || zeros.size() != 2) {
        signs.status = Status::Fail;
        signs.detail = "requires two real numerator roots";
    } else {
        const auto z = zeros.real_values();
        const Scalar a2 = eval(h.den(), z[0]);
        const Scalar a3 = eval(h.den(), z[1]);
        signs.witnesses.push_back({"alpha(z2)", a2});
        signs.witnesses.push_back({"alpha(z3)", a3});
        signs.status = detail::status_of(a0 > Scalar(0) && a2 < Scalar(0) && a3 > Scalar(0));
    }

    detail::warn_near_cancellation(h, tol, r);
    r.verdict = detail::verdict_of(r);
    return r;
}

template <typename Scalar>
struct MammillaryRealization {
    ConditionReport<Scalar> report;
    MammillaryParams<Scalar> params;
    /// Coefficientwise residual of the forward-mapped parameters against H.
    Scalar residual = Scalar(0);
};

/// Unique mammillary parameters for H, with the report and the forward
/// verification residual.
///
/// With numerator roots z_2 > ... > z_n: k_i1 = -z_i, k10 = alpha(0)/beta(0),
/// k_1i = alpha(z_i)/beta_i(z_i) for every i in 2..n.
template <typename Scalar>
MammillaryRealization<Scalar> realize_detailed(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol = {}) {
    MammillaryRealization<Scalar> out;
    out.report = check_conditions(h, tol);
    if (!detail::realization_ready(out.report)) throw ConditionsFailed(out.report.failed_ids());

    const auto& z = out.report.numerator_roots;
    const Eigen::Index m = static_cast<Eigen::Index>(z.size());
    auto& p = out.params;
    p.k10 = eval(h.den(), Scalar(0)) / eval(h.num(), Scalar(0));
    p.k_to_center.resize(m);
    p.k_from_center.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Scalar zi = z[static_cast<std::size_t>(i)];
        const Scalar beta_i = zi * eval(deflate(h.num(), zi, tol.deflation).quotient, zi);
        p.k_to_center[i] = -zi;
        p.k_from_center[i] = eval(h.den(), zi) / beta_i;
    }
    validate(p);
    out.residual = detail::verify_forward(p, h, tol.verify);
    return out;
}

template <typename Scalar>
MammillaryParams<Scalar> realize(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol = {}) {
    return realize_detailed(h, tol).params;
}

/// Closed-form order-3 realization:
/// k10 = alpha(0)/(z2 z3), k12 = alpha(z2)/(z2 (z2 - z3)),
/// k13 = -alpha(z3)/(z3 (z2 - z3)), k21 = -z2, k31 = -z3.
template <typename Scalar>
MammillaryRealization<Scalar> realize3_detailed(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol = {}) {
    if (h.order() != 3) throw WrongOrder(3, h.order());
    MammillaryRealization<Scalar> out;
    out.report = check_conditions3(h, tol);
    if (!detail::realization_ready(out.report)) throw ConditionsFailed(out.report.failed_ids());

    const Scalar z2 = out.report.numerator_roots[0];
    const Scalar z3 = out.report.numerator_roots[1];
    auto& p = out.params;
    p.k10 = eval(h.den(), Scalar(0)) / (z2 * z3);
    p.k_to_center.resize(2);
    p.k_from_center.resize(2);
    p.k_to_center << -z2, -z3;
    p.k_from_center << eval(h.den(), z2) / (z2 * (z2 - z3)), -eval(h.den(), z3) / (z3 * (z2 - z3));
    validate(p);
    out.residual = detail::verify_forward(p, h, tol.verify);
    return out;
}

template <typename Scalar>
MammillaryParams<Scalar> realize3(const TransferFunction<Scalar>& h, const Tolerances<Scalar>& tol = {}) {
    return realize3_detailed(h, tol).params;
}

}  // namespace mamreal
