#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>

#include "mamreal/errors.hpp"
#include "mamreal/poly.hpp"
#include "mamreal/tolerances.hpp"

namespace mamreal {

/// Strictly proper rational transfer function H(s) = num(s) / den(s),
/// stored with a monic denominator. The numerator's leading coefficient
/// is then the gain.
template <typename Scalar = double>
class TransferFunction {
   public:
    using Poly = Polynomial<Scalar>;

    /// Scales num and den by 1/den.leading.
    static TransferFunction normalize(const Poly& num, const Poly& den) {
        if (den.is_zero()) throw ImproperTransferFunction("denominator is the zero polynomial");
        if (num.is_zero()) throw ZeroNumerator();
        if (num.degree() >= den.degree())
            throw ImproperTransferFunction("numerator degree " + std::to_string(num.degree()) +
                                           " is not below denominator degree " + std::to_string(den.degree()));
        if (den.leading() == Scalar(1)) return TransferFunction(num, den);
        const Scalar inv = Scalar(1) / den.leading();
        auto d = (inv * den).coeffs();
        d[0] = Scalar(1);
        return TransferFunction(inv * num, Poly(std::move(d)));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    /// Order n = deg(den).
    Eigen::Index order() const { return den_.degree(); }
    Eigen::Index relative_degree() const { return den_.degree() - num_.degree(); }
    Scalar gain() const { return num_.leading(); }

    RootSet<Scalar> zeros(const Tolerances<Scalar>& tol = {}) const {
        return real_roots(num_, tol.imag, tol.separation);
    }
    RootSet<Scalar> poles(const Tolerances<Scalar>& tol = {}) const {
        return real_roots(den_, tol.imag, tol.separation);
    }

    template <typename T>
    T operator()(const T& s) const {
        return eval(num_, s) / eval(den_, s);
    }

    template <typename Other>
    TransferFunction<Other> cast() const {
        return TransferFunction<Other>::normalize(num_.template cast<Other>(), den_.template cast<Other>());
    }

   private:
    TransferFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}

    Poly num_;
    Poly den_;
};

using TransferFunctiond = TransferFunction<double>;

template <typename Scalar>
Eigen::Index relative_degree(const TransferFunction<Scalar>& h) {
    return h.relative_degree();
}

/// H(0). Throws PoleAtOrigin when den(0) is exactly zero. A tiny den(0) is
/// legitimate: it is the product of the poles, and slow models reach 1e-18.
template <typename Scalar>
Scalar eval_at_zero(const TransferFunction<Scalar>& h) {
    const Scalar d0 = h.den().constant_term();
    if (d0 == Scalar(0)) throw PoleAtOrigin();
    return h.num().constant_term() / d0;
}

/// Worst coefficientwise relative difference over numerator and denominator.
template <typename Scalar>
Scalar coefficient_residual(const TransferFunction<Scalar>& a, const TransferFunction<Scalar>& b) {
    using std::max;
    return max(coefficient_residual(a.num(), b.num()), coefficient_residual(a.den(), b.den()));
}

/// A zero/pole pair closer than the separation tolerance, if any. Such a
/// pair is reported, never cancelled: cancelling would change the order.
template <typename Scalar>
struct NearCancellation {
    std::complex<Scalar> zero;
    std::complex<Scalar> pole;
};

template <typename Scalar>
std::optional<NearCancellation<Scalar>> near_cancellation(const TransferFunction<Scalar>& h,
                                                          const Tolerances<Scalar>& tol = {}) {
    using std::abs;
    if (h.num().degree() == 0) return std::nullopt;
    const auto zs = h.zeros(tol);
    const auto ps = h.poles(tol);
    for (const auto& z : zs.roots)
        for (const auto& p : ps.roots)
            if (abs(z.value - p.value) <= tol.separation * std::max(abs(z.value), abs(p.value)))
                return NearCancellation<Scalar>{z.value, p.value};
    return std::nullopt;
}

}  // namespace mamreal
