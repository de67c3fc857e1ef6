#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "mamreal/errors.hpp"
#include "mamreal/params.hpp"
#include "mamreal/poly.hpp"
#include "mamreal/tf.hpp"

namespace mamreal {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Which closed-form structure, if any, the matrices follow. Structured
/// models get their transfer function from the rate constants directly.
enum class Structure { General, Mammillary, PkPd };

/// Single-input single-output model x' = A x + B u, y = C x.
template <typename Scalar = double>
struct StateSpaceModel {
    Matrix<Scalar> A;
    Vector<Scalar> B;
    RowVector<Scalar> C;
    Structure structure = Structure::General;

    Eigen::Index n() const { return A.rows(); }
};

using StateSpaceModeld = StateSpaceModel<double>;

/// Central compartment 0 exchanging with peripherals 1..n-1; B = C^T = e_1.
template <typename Scalar>
StateSpaceModel<Scalar> build_mammillary(const MammillaryParams<Scalar>& p) {
    const Eigen::Index n = p.n();
    StateSpaceModel<Scalar> m;
    m.A = Matrix<Scalar>::Zero(n, n);
    m.A(0, 0) = -p.k10 - p.k_from_center.sum();
    for (Eigen::Index i = 1; i < n; ++i) {
        m.A(0, i) = p.k_to_center[i - 1];
        m.A(i, 0) = p.k_from_center[i - 1];
        m.A(i, i) = -p.k_to_center[i - 1];
    }
    m.B = Vector<Scalar>::Unit(n, 0);
    m.C = RowVector<Scalar>::Unit(n, 0);
    m.structure = Structure::Mammillary;
    return m;
}

/// Three-compartment PK block plus the effect-site row. The effect-site
/// gain is not a loss from the central compartment, so it is absent from A(0,0).
template <typename Scalar>
StateSpaceModel<Scalar> build_pkpd(const PkPdParams<Scalar>& p) {
    StateSpaceModel<Scalar> m;
    m.A = Matrix<Scalar>::Zero(4, 4);
    m.A(0, 0) = -(p.k10 + p.k12 + p.k13);
    m.A(0, 1) = p.k21;
    m.A(0, 2) = p.k31;
    m.A(1, 0) = p.k12;
    m.A(1, 1) = -p.k21;
    m.A(2, 0) = p.k13;
    m.A(2, 2) = -p.k31;
    m.A(3, 0) = p.k1e_over_V1;
    m.A(3, 3) = -p.ke0;
    m.B = Vector<Scalar>::Unit(4, 0);
    m.C = RowVector<Scalar>::Unit(4, 3);
    m.structure = Structure::PkPd;
    return m;
}

/// det(sI - A) by the Faddeev-LeVerrier recurrence.
template <typename Scalar>
Polynomial<Scalar> char_poly(const Matrix<Scalar>& a) {
    const Eigen::Index n = a.rows();
    typename Polynomial<Scalar>::Coefficients c(n + 1);
    c[0] = Scalar(1);
    Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
    const Matrix<Scalar> eye = Matrix<Scalar>::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[k - 1] * eye;
        c[k] = -(a * m).trace() / Scalar(k);
    }
    return Polynomial<Scalar>(std::move(c));
}

template <typename Scalar>
Polynomial<Scalar> char_poly(const StateSpaceModel<Scalar>& m) {
    return char_poly(m.A);
}

namespace detail {

// Mammillary matrices: den = (s + k10) prod(s + k_i1) + s * sum_i k_1i prod_{j != i}(s + k_j1).
// Every term is a sum of like-signed products when the rates are positive,
// so small trailing coefficients keep full relative accuracy.
template <typename Scalar>
TransferFunction<Scalar> mammillary_tf(const Matrix<Scalar>& a) {
    const Eigen::Index m = a.rows() - 1;
    std::vector<Scalar> peripheral_roots(static_cast<std::size_t>(m));
    Scalar k10 = -a(0, 0);
    for (Eigen::Index i = 0; i < m; ++i) {
        peripheral_roots[static_cast<std::size_t>(i)] = -a(0, i + 1);
        k10 -= a(i + 1, 0);
    }
    const auto num = from_roots(peripheral_roots);
    Polynomial<Scalar> coupling;
    for (Eigen::Index i = 0; i < m; ++i) {
        std::vector<Scalar> others;
        for (Eigen::Index j = 0; j < m; ++j)
            if (j != i) others.push_back(peripheral_roots[static_cast<std::size_t>(j)]);
        coupling = coupling + from_roots(others, a(i + 1, 0));
    }
    const auto den = Polynomial<Scalar>{Scalar(1), k10} * num + Polynomial<Scalar>{Scalar(1), Scalar(0)} * coupling;
    return TransferFunction<Scalar>::normalize(num, den);
}

template <typename Scalar>
TransferFunction<Scalar> pkpd_tf(const Matrix<Scalar>& a) {
    const auto inner = mammillary_tf<Scalar>(a.topLeftCorner(3, 3));
    const Scalar gain = a(3, 0);
    const Scalar ke0 = -a(3, 3);
    return TransferFunction<Scalar>::normalize(gain * inner.num(), Polynomial<Scalar>{Scalar(1), ke0} * inner.den());
}

// C adj(sI - A) B sampled at n points on the unit circle, offset by half a
// step so no node is real, and recovered by an inverse DFT (exact for
// degree < n).
template <typename Scalar>
Polynomial<Scalar> adjugate_numerator(const StateSpaceModel<Scalar>& m, const Polynomial<Scalar>& den) {
    using Complex = std::complex<Scalar>;
    using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
    using std::abs;
    const Eigen::Index n = m.n();
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    const Scalar offset = std::numbers::pi_v<Scalar> / Scalar(n);

    std::vector<Complex> samples(static_cast<std::size_t>(n));
    const CMatrix ac = m.A.template cast<Complex>();
    const CVector bc = m.B.template cast<Complex>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex s = std::polar(Scalar(1), two_pi * Scalar(k) / Scalar(n) + offset);
        CMatrix resolvent = s * CMatrix::Identity(n, n) - ac;
        const CVector x = resolvent.partialPivLu().solve(bc);
        samples[static_cast<std::size_t>(k)] = eval(den, s) * (m.C.template cast<Complex>() * x)(0, 0);
    }

    // Ascending coefficients.
    std::vector<Scalar> scaled(static_cast<std::size_t>(n));
    Scalar largest = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex acc = 0;
        for (Eigen::Index k = 0; k < n; ++k)
            acc += samples[static_cast<std::size_t>(k)] * std::polar(Scalar(1), -two_pi * Scalar(j * k) / Scalar(n));
        scaled[static_cast<std::size_t>(j)] = (acc * std::polar(Scalar(1), -offset * Scalar(j))).real() / Scalar(n);
        largest = std::max(largest, abs(scaled[static_cast<std::size_t>(j)]));
    }
    Eigen::Index top = n - 1;
    while (top > 0 && abs(scaled[static_cast<std::size_t>(top)]) <= Scalar(1e-10) * largest) --top;

    typename Polynomial<Scalar>::Coefficients c(top + 1);
    for (Eigen::Index j = 0; j <= top; ++j) c[top - j] = scaled[static_cast<std::size_t>(j)];
    return Polynomial<Scalar>(std::move(c));
}

}  // namespace detail

/// H(s) = C (sI - A)^{-1} B.
///
/// Mammillary and PK-PD models use the closed-form numerator prod(s + k_i1)
/// (times the effect-site gain) and a cancellation-free expansion of the
/// denominator. General models use char_poly for the denominator and an
/// interpolated C adj(sI - A) B for the numerator.
template <typename Scalar>
TransferFunction<Scalar> transfer_function(const StateSpaceModel<Scalar>& m) {
    switch (m.structure) {
        case Structure::Mammillary:
            return detail::mammillary_tf<Scalar>(m.A);
        case Structure::PkPd:
            return detail::pkpd_tf<Scalar>(m.A);
        case Structure::General:
            break;
    }
    const auto den = char_poly(m);
    return TransferFunction<Scalar>::normalize(detail::adjugate_numerator(m, den), den);
}

template <typename Scalar>
TransferFunction<Scalar> transfer_function(const MammillaryParams<Scalar>& p) {
    return transfer_function(build_mammillary(p));
}

template <typename Scalar>
TransferFunction<Scalar> transfer_function(const PkPdParams<Scalar>& p) {
    return transfer_function(build_pkpd(p));
}

/// Controllable canonical realization of a strictly proper H.
template <typename Scalar>
StateSpaceModel<Scalar> controllable_canonical(const TransferFunction<Scalar>& h) {
    const Eigen::Index n = h.order();
    StateSpaceModel<Scalar> m;
    m.A = Matrix<Scalar>::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) m.A(i, i + 1) = Scalar(1);
    for (Eigen::Index j = 0; j < n; ++j) m.A(n - 1, j) = -h.den()[n - j];
    m.B = Vector<Scalar>::Unit(n, n - 1);
    m.C = RowVector<Scalar>::Zero(n);
    const Eigen::Index nd = h.num().degree();
    for (Eigen::Index j = 0; j <= nd; ++j) m.C(j) = h.num()[nd - j];
    return m;
}

template <typename Scalar>
struct Symmetrized {
    /// Diagonal of D, with D(0,0) = 1 and D(i,i) = sqrt(k_i1 / k_1i).
    Vector<Scalar> d;
    /// D A D^{-1}, symmetric up to rounding.
    Matrix<Scalar> a;
};

/// Diagonal similarity that makes a mammillary matrix symmetric.
template <typename Scalar>
Symmetrized<Scalar> symmetrize(const MammillaryParams<Scalar>& p) {
    using std::isfinite;
    using std::sqrt;
    const Eigen::Index n = p.n();
    Symmetrized<Scalar> out;
    out.d = Vector<Scalar>::Ones(n);
    for (Eigen::Index i = 1; i < n; ++i) {
        const Scalar ratio = p.k_to_center[i - 1] / p.k_from_center[i - 1];
        if (!(ratio > Scalar(0)) || !isfinite(ratio))
            throw NonPositiveRates("k_" + std::to_string(i + 1) + "1 / k_1" + std::to_string(i + 1) +
                                   " must be positive to symmetrize");
        out.d[i] = sqrt(ratio);
    }
    const auto a = build_mammillary(p).A;
    out.a = out.d.asDiagonal() * a * out.d.cwiseInverse().asDiagonal();
    return out;
}

struct CompartmentalReport {
    bool nonnegative_io = false;
    bool nonnegative_off_diagonal = false;
    bool column_sums_nonpositive = false;
    std::vector<double> column_sums;
    std::vector<std::string> notes;

    bool passed() const { return nonnegative_io && nonnegative_off_diagonal && column_sums_nonpositive; }
};

/// Nonnegative B and C, nonnegative off-diagonal A, and nonpositive column sums.
template <typename Scalar>
CompartmentalReport compartmental_check(const StateSpaceModel<Scalar>& m) {
    CompartmentalReport r;
    r.nonnegative_io = (m.B.array() >= Scalar(0)).all() && (m.C.array() >= Scalar(0)).all();
    r.nonnegative_off_diagonal = true;
    for (Eigen::Index i = 0; i < m.n(); ++i)
        for (Eigen::Index j = 0; j < m.n(); ++j)
            if (i != j && m.A(i, j) < Scalar(0)) r.nonnegative_off_diagonal = false;
    r.column_sums_nonpositive = true;
    for (Eigen::Index j = 0; j < m.n(); ++j) {
        const Scalar sum = m.A.col(j).sum();
        r.column_sums.push_back(static_cast<double>(sum));
        if (sum > Scalar(0)) r.column_sums_nonpositive = false;
    }
    if (m.structure == Structure::PkPd)
        r.notes.emplace_back(
            "column 1 sum includes the effect-site gain k1e/V1, which models a concentration lag rather than a "
            "mass flow out of the central compartment");
    return r;
}

enum class EigenMethod { Symmetrized, CharPolyRoots };

template <typename Scalar>
struct EigenReport {
    std::vector<std::complex<Scalar>> eigenvalues;
    Scalar max_abs_imag = Scalar(0);
    Scalar max_real = Scalar(0);
    Scalar tolerance = Scalar(0);
    EigenMethod method = EigenMethod::CharPolyRoots;

    bool all_real() const { return max_abs_imag <= tolerance; }
    bool nonpositive() const { return max_real <= tolerance; }
    bool passed() const { return all_real() && nonpositive(); }
};

namespace detail {

template <typename Scalar>
bool symmetrizable(const MammillaryParams<Scalar>& p) {
    return ((p.k_to_center.array() / p.k_from_center.array()) > Scalar(0)).all();
}

template <typename Scalar>
MammillaryParams<Scalar> mammillary_rates(const Matrix<Scalar>& a) {
    MammillaryParams<Scalar> p;
    const Eigen::Index m = a.rows() - 1;
    p.k_to_center.resize(m);
    p.k_from_center.resize(m);
    p.k10 = -a(0, 0);
    for (Eigen::Index i = 0; i < m; ++i) {
        p.k_to_center[i] = a(0, i + 1);
        p.k_from_center[i] = a(i + 1, 0);
        p.k10 -= a(i + 1, 0);
    }
    return p;
}

template <typename Scalar>
std::vector<std::complex<Scalar>> symmetric_eigenvalues(const MammillaryParams<Scalar>& p) {
    const auto sym = symmetrize(p);
    const Matrix<Scalar> s = (sym.a + sym.a.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(s, Eigen::EigenvaluesOnly);
    std::vector<std::complex<Scalar>> out;
    for (Eigen::Index i = 0; i < s.rows(); ++i) out.emplace_back(solver.eigenvalues()[i], Scalar(0));
    return out;
}

}  // namespace detail

/// Eigenvalue realness and sign check against tolerance * ||A||_inf.
///
/// Mammillary blocks with positive rate ratios go through the symmetrized
/// matrix; everything else uses the roots of char_poly(A).
template <typename Scalar>
EigenReport<Scalar> eigen_check(const StateSpaceModel<Scalar>& m, Scalar tolerance = Scalar(1e-9)) {
    using std::abs;
    EigenReport<Scalar> r;
    const Scalar norm = m.A.cwiseAbs().rowwise().sum().maxCoeff();
    r.tolerance = tolerance * norm;

    bool done = false;
    if (m.structure == Structure::Mammillary) {
        const auto p = detail::mammillary_rates<Scalar>(m.A);
        if (detail::symmetrizable(p)) {
            r.eigenvalues = detail::symmetric_eigenvalues(p);
            done = true;
        }
    } else if (m.structure == Structure::PkPd) {
        const auto p = detail::mammillary_rates<Scalar>(m.A.topLeftCorner(3, 3));
        if (detail::symmetrizable(p)) {
            r.eigenvalues = detail::symmetric_eigenvalues(p);
            r.eigenvalues.emplace_back(m.A(3, 3), Scalar(0));
            done = true;
        }
    }
    if (done) {
        r.method = EigenMethod::Symmetrized;
    } else {
        for (const auto& root : real_roots(char_poly(m), Scalar(0), Scalar(0)).roots) r.eigenvalues.push_back(root.value);
    }
    r.max_real = -std::numeric_limits<Scalar>::infinity();
    for (const auto& ev : r.eigenvalues) {
        r.max_abs_imag = std::max(r.max_abs_imag, abs(ev.imag()));
        r.max_real = std::max(r.max_real, ev.real());
    }
    return r;
}

template <typename Scalar>
struct Trajectory {
    Vector<Scalar> t;
    Vector<Scalar> y;
    /// One row per time sample, one column per state.
    Matrix<Scalar> x;
};

/// Impulse response y(t_k) = C exp(A t_k) B on t_k = k dt, k = 0..floor(T/dt).
///
/// The state advances by repeated multiplication with exp(A dt), computed by
/// Pade scaling and squaring.
template <typename Scalar>
Trajectory<Scalar> simulate_impulse(const StateSpaceModel<Scalar>& m, Scalar horizon, Scalar dt) {
    using std::floor;
    using std::isfinite;
    if (!(dt > Scalar(0)) || !isfinite(dt)) throw InvalidArgument("time step must be positive and finite");
    if (!(horizon >= dt) || !isfinite(horizon)) throw InvalidArgument("horizon must be finite and at least one step");
    const auto steps = static_cast<Eigen::Index>(floor(horizon / dt * (Scalar(1) + Scalar(1e-12))));
    const Matrix<Scalar> step = (m.A * dt).exp();

    Trajectory<Scalar> out;
    out.t.resize(steps + 1);
    out.y.resize(steps + 1);
    out.x.resize(steps + 1, m.n());
    Vector<Scalar> state = m.B;
    for (Eigen::Index k = 0; k <= steps; ++k) {
        out.t[k] = dt * Scalar(k);
        out.x.row(k) = state.transpose();
        out.y[k] = m.C.dot(state);
        state = step * state;
    }
    return out;
}

}  // namespace mamreal
