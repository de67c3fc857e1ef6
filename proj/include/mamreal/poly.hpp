#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "mamreal/errors.hpp"

namespace mamreal {

/// Real univariate polynomial, coefficients in descending degree order.
///
/// coeffs()[0] is the leading coefficient. Leading zeros are dropped on
/// construction, so the leading coefficient is nonzero unless the polynomial
/// is the zero polynomial, which is stored as the single coefficient 0.
template <typename Scalar = double>
class Polynomial {
   public:
    using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Polynomial() : coeffs_(Coefficients::Zero(1)) {}
    explicit Polynomial(Coefficients coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<Scalar> coeffs)
        : Polynomial(std::span<const Scalar>(coeffs.begin(), coeffs.size())) {}
    explicit Polynomial(std::span<const Scalar> coeffs) : coeffs_(coeffs.size()) {
        std::copy(coeffs.begin(), coeffs.end(), coeffs_.data());
        trim();
    }

    static Polynomial constant(Scalar c) { return Polynomial{c}; }

    /// The monic linear factor (s - root).
    static Polynomial linear_factor(Scalar root) { return Polynomial{Scalar(1), -root}; }

    Eigen::Index degree() const { return coeffs_.size() - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Scalar(0); }
    Scalar leading() const { return coeffs_[0]; }
    Scalar constant_term() const { return coeffs_[coeffs_.size() - 1]; }
    Scalar operator[](Eigen::Index i) const { return coeffs_[i]; }
    const Coefficients& coeffs() const { return coeffs_; }

    /// Largest coefficient magnitude.
    Scalar scale() const { return coeffs_.cwiseAbs().maxCoeff(); }

    std::vector<Scalar> to_vector() const { return {coeffs_.data(), coeffs_.data() + coeffs_.size()}; }

    template <typename Other>
    Polynomial<Other> cast() const {
        return Polynomial<Other>(typename Polynomial<Other>::Coefficients(coeffs_.template cast<Other>()));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeffs_.size() == b.coeffs_.size() && (a.coeffs_.array() == b.coeffs_.array()).all();
    }

   private:
    void trim() {
        Eigen::Index first = 0;
        while (first < coeffs_.size() && coeffs_[first] == Scalar(0)) ++first;
        if (first == coeffs_.size()) {
            coeffs_ = Coefficients::Zero(1);
        } else if (first > 0) {
            coeffs_ = Coefficients(coeffs_.tail(coeffs_.size() - first));
        }
    }

    Coefficients coeffs_;
};

using Polynomiald = Polynomial<double>;

/// Horner evaluation at a real or complex point.
template <typename Scalar, typename T>
T eval(const Polynomial<Scalar>& p, const T& s) {
    T acc = T(p[0]);
    for (Eigen::Index k = 1; k <= p.degree(); ++k) acc = acc * s + T(p[k]);
    return acc;
}

template <typename Scalar>
Polynomial<Scalar> operator*(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
    using Coefficients = typename Polynomial<Scalar>::Coefficients;
    Coefficients out = Coefficients::Zero(a.degree() + b.degree() + 1);
    for (Eigen::Index i = 0; i <= a.degree(); ++i)
        for (Eigen::Index j = 0; j <= b.degree(); ++j) out[i + j] += a[i] * b[j];
    return Polynomial<Scalar>(std::move(out));
}

template <typename Scalar>
Polynomial<Scalar> operator*(Scalar c, const Polynomial<Scalar>& p) {
    return Polynomial<Scalar>(typename Polynomial<Scalar>::Coefficients(c * p.coeffs()));
}

template <typename Scalar>
Polynomial<Scalar> operator+(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
    using Coefficients = typename Polynomial<Scalar>::Coefficients;
    const Eigen::Index n = std::max(a.coeffs().size(), b.coeffs().size());
    Coefficients out = Coefficients::Zero(n);
    out.tail(a.coeffs().size()) += a.coeffs();
    out.tail(b.coeffs().size()) += b.coeffs();
    return Polynomial<Scalar>(std::move(out));
}

template <typename Scalar>
Polynomial<Scalar> operator-(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
    return a + Scalar(-1) * b;
}

template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
    if (p.degree() == 0) return {};
    typename Polynomial<Scalar>::Coefficients out(p.degree());
    for (Eigen::Index k = 0; k < p.degree(); ++k) out[k] = p[k] * Scalar(p.degree() - k);
    return Polynomial<Scalar>(std::move(out));
}

/// leading * prod(s - r_i), expanded by repeated convolution.
template <typename Scalar>
Polynomial<Scalar> from_roots(std::span<const Scalar> roots, Scalar leading = Scalar(1)) {
    using Coefficients = typename Polynomial<Scalar>::Coefficients;
    Coefficients c = Coefficients::Zero(static_cast<Eigen::Index>(roots.size()) + 1);
    c[0] = leading;
    Eigen::Index deg = 0;
    for (Scalar r : roots) {
        ++deg;
        for (Eigen::Index k = deg; k >= 1; --k) c[k] -= r * c[k - 1];
    }
    return Polynomial<Scalar>(std::move(c));
}

template <typename Scalar>
Polynomial<Scalar> from_roots(std::initializer_list<Scalar> roots, Scalar leading = Scalar(1)) {
    return from_roots(std::span<const Scalar>(roots.begin(), roots.size()), leading);
}

template <typename Scalar>
Polynomial<Scalar> from_roots(const std::vector<Scalar>& roots, Scalar leading = Scalar(1)) {
    return from_roots(std::span<const Scalar>(roots), leading);
}

template <typename Scalar>
struct Deflation {
    Polynomial<Scalar> quotient;
    Scalar remainder;
};

/// Division of p by (s - r). Leading quotient coefficients come from forward
/// synthetic division, trailing ones from backward division; the split that
/// best reproduces p is kept. Throws NotARoot when the forward remainder
/// exceeds tolerance * max|coeff|.
template <typename Scalar>
Deflation<Scalar> deflate(const Polynomial<Scalar>& p, Scalar r, Scalar tolerance = Scalar(1e-8)) {
    using std::abs;
    if (p.is_zero()) throw ZeroPolynomial();
    if (p.degree() == 0) throw NotARoot(static_cast<double>(r), static_cast<double>(p[0]));
    const Eigen::Index n = p.degree();
    typename Polynomial<Scalar>::Coefficients fwd(n), bwd(n);
    Scalar acc = p[0];
    fwd[0] = acc;
    for (Eigen::Index k = 1; k < n; ++k) {
        acc = acc * r + p[k];
        fwd[k] = acc;
    }
    const Scalar remainder = acc * r + p[n];
    if (abs(remainder) > tolerance * p.scale()) throw NotARoot(static_cast<double>(r), static_cast<double>(remainder));
    if (r == Scalar(0)) return {Polynomial<Scalar>(std::move(fwd)), remainder};

    bwd[n - 1] = -p[n] / r;
    for (Eigen::Index k = n - 1; k >= 1; --k) bwd[k - 1] = (bwd[k] - p[k]) / r;

    // Split j: fwd[0..j-1], bwd[j..n-1]. Score by the worst coefficientwise
    // relative mismatch of q*(s - r) against p.
    const Scalar tiny = std::numeric_limits<Scalar>::min();
    auto rel = [&](Scalar got, Scalar want, Scalar size) { return abs(got - want) / std::max(size, tiny); };
    auto mismatch = [&](const typename Polynomial<Scalar>::Coefficients& q) {
        Scalar worst = rel(q[0], p[0], abs(p[0]));
        for (Eigen::Index k = 1; k < n; ++k)
            worst = std::max(worst, rel(q[k] - r * q[k - 1], p[k], abs(q[k]) + abs(r * q[k - 1]) + abs(p[k])));
        return std::max(worst, rel(-r * q[n - 1], p[n], abs(r * q[n - 1]) + abs(p[n])));
    };
    typename Polynomial<Scalar>::Coefficients best = fwd, q(n);
    Scalar best_score = mismatch(fwd);
    for (Eigen::Index j = 0; j < n; ++j) {
        q << fwd.head(j), bwd.tail(n - j);
        const Scalar score = mismatch(q);
        if (score < best_score) {
            best_score = score;
            best = q;
        }
    }
    return {Polynomial<Scalar>(std::move(best)), remainder};
}

template <typename Scalar>
struct Root {
    std::complex<Scalar> value;
    bool is_real = false;
    /// False when another root lies within the separation tolerance.
    bool simple = true;
};

template <typename Scalar>
struct RootSet {
    /// Sorted by descending real part; conjugate pairs are adjacent.
    std::vector<Root<Scalar>> roots;
    Scalar tol_imag = Scalar(0);
    Scalar tol_separation = Scalar(0);

    std::size_t size() const { return roots.size(); }
    bool all_real() const {
        return std::all_of(roots.begin(), roots.end(), [](const auto& r) { return r.is_real; });
    }
    bool all_simple() const {
        return std::all_of(roots.begin(), roots.end(), [](const auto& r) { return r.simple; });
    }
    /// Values of the real-classified roots, in descending order.
    std::vector<Scalar> real_values() const {
        std::vector<Scalar> out;
        for (const auto& r : roots)
            if (r.is_real) out.push_back(r.value.real());
        return out;
    }
};

namespace detail {

// Parlett-Reinsch balancing with radix 2; leaves eigenvalues unchanged.
template <typename Scalar>
void balance(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    using std::abs;
    const Scalar radix = 2;
    const Scalar radix_sq = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            Scalar c = 0;
            Scalar r = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += abs(a(j, i));
                r += abs(a(i, j));
            }
            if (c == Scalar(0) || r == Scalar(0)) continue;
            const Scalar s = c + r;
            Scalar f = 1;
            Scalar g = r / radix;
            while (c < g) {
                f *= radix;
                c *= radix_sq;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix_sq;
            }
            if ((c + r) / f < Scalar(0.95) * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

// Newton refinement of a real root on the original polynomial; a step is
// kept only while it reduces |p|.
template <typename Scalar>
Scalar polish_real_root(const Polynomial<Scalar>& p, const Polynomial<Scalar>& dp, Scalar x) {
    using std::abs;
    Scalar fx = eval(p, x);
    for (int it = 0; it < 4 && fx != Scalar(0); ++it) {
        const Scalar d = eval(dp, x);
        if (d == Scalar(0)) break;
        const Scalar next = x - fx / d;
        const Scalar fn = eval(p, next);
        if (!(abs(fn) < abs(fx))) break;
        x = next;
        fx = fn;
    }
    return x;
}

}  // namespace detail

/// All roots of p from the eigenvalues of its balanced companion matrix.
///
/// A root r is classified real iff |Im r| <= tol_imag * |r|; real roots
/// are refined by Newton's method and reported with zero imaginary part. Any
/// two roots closer than tol_separation * max(|r_i|, |r_j|) are both marked non-simple.
template <typename Scalar>
RootSet<Scalar> real_roots(const Polynomial<Scalar>& p, Scalar tol_imag = Scalar(1e-9),
                           Scalar tol_separation = Scalar(1e-7)) {
    using std::abs;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (p.is_zero()) throw ZeroPolynomial();

    RootSet<Scalar> out;
    out.tol_imag = tol_imag;
    out.tol_separation = tol_separation;
    const Eigen::Index n = p.degree();
    if (n == 0) return out;

    Matrix companion = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) companion(0, k) = -p[k + 1] / p[0];
    for (Eigen::Index k = 1; k < n; ++k) companion(k, k - 1) = Scalar(1);
    detail::balance(companion);

    Eigen::EigenSolver<Matrix> solver(companion, false);
    const auto& eig = solver.eigenvalues();
    const Polynomial<Scalar> dp = derivative(p);

    for (Eigen::Index k = 0; k < n; ++k) {
        Root<Scalar> root;
        root.value = eig[k];
        root.is_real = abs(eig[k].imag()) <= tol_imag * abs(eig[k]);
        if (root.is_real) root.value = {detail::polish_real_root(p, dp, eig[k].real()), Scalar(0)};
        out.roots.push_back(root);
    }

    std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });

    for (std::size_t i = 0; i < out.roots.size(); ++i) {
        for (std::size_t j = 0; j < out.roots.size(); ++j) {
            if (i == j) continue;
            const auto& ri = out.roots[i].value;
            if (abs(ri - out.roots[j].value) <= tol_separation * std::max(abs(ri), abs(out.roots[j].value))) {
                out.roots[i].simple = false;
                out.roots[j].simple = false;
            }
        }
    }
    return out;
}

/// Largest coefficientwise relative difference between two polynomials.
///
/// Coefficient k contributes |a_k - b_k| / max(|a_k|, |b_k|, floor * scale),
/// where scale is the larger max|coeff| of the pair; the floor keeps
/// structurally-zero coefficients from dominating through rounding noise.
template <typename Scalar>
Scalar coefficient_residual(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b, Scalar floor = Scalar(1e-13)) {
    using std::abs;
    using std::max;
    const Eigen::Index n = max(a.coeffs().size(), b.coeffs().size());
    const Scalar scale = max(a.scale(), b.scale());
    if (scale == Scalar(0)) return Scalar(0);
    Scalar worst = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index ia = k - (n - a.coeffs().size());
        const Eigen::Index ib = k - (n - b.coeffs().size());
        const Scalar ak = ia >= 0 ? a[ia] : Scalar(0);
        const Scalar bk = ib >= 0 ? b[ib] : Scalar(0);
        const Scalar denom = max({abs(ak), abs(bk), floor * scale});
        worst = max(worst, abs(ak - bk) / denom);
    }
    return worst;
}

}  // namespace mamreal
