#pragma once

// Test-only reference computations and random generators. Nothing here
// calls into the code paths these oracles are used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mamreal/params.hpp"
#include "mamreal/poly.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXd;

/// det(sI - A) sampled at n + 1 points on a circle of the given radius (LU
/// determinants), then interpolated exactly by an inverse DFT.
inline mamreal::Polynomiald char_poly_by_interpolation(const Matrix& a, double radius = 1.0) {
    using Complex = std::complex<double>;
    const Eigen::Index n = a.rows();
    const Eigen::Index points = n + 1;
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Complex> values(static_cast<std::size_t>(points));
    // Half-step phase offset keeps the nodes off the real axis, where the
    // eigenvalues of compartmental matrices lie.
    const double offset = std::numbers::pi / double(points);
    for (Eigen::Index k = 0; k < points; ++k) {
        const Complex s = std::polar(radius, two_pi * double(k) / double(points) + offset);
        Eigen::MatrixXcd m = s * Eigen::MatrixXcd::Identity(n, n) - a.cast<Complex>();
        values[static_cast<std::size_t>(k)] = m.partialPivLu().determinant();
    }
    Eigen::VectorXd c(points);
    for (Eigen::Index j = 0; j < points; ++j) {
        Complex acc = 0;
        for (Eigen::Index k = 0; k < points; ++k)
            acc += values[static_cast<std::size_t>(k)] * std::polar(1.0, -two_pi * double(j * k) / double(points));
        c[n - j] = (acc * std::polar(1.0, -offset * double(j))).real() / double(points) / std::pow(radius, double(j));
    }
    return mamreal::Polynomiald(c);
}

/// max|a_k - b_k| / max(max|a|, max|b|); both polynomials must share a degree.
inline double normwise_relative(const mamreal::Polynomiald& a, const mamreal::Polynomiald& b) {
    const double scale = std::max(a.scale(), b.scale());
    return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() / scale;
}

inline double relative_error(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log10(lo), std::log10(hi));
    return std::pow(10.0, u(rng));
}

/// Sorted k_to_center with pairwise relative separation >= min_separation,
/// by rejection.
inline Eigen::VectorXd separated_rates(std::mt19937_64& rng, Eigen::Index count, double lo, double hi,
                                       double min_separation) {
    Eigen::VectorXd k(count);
    for (;;) {
        for (Eigen::Index i = 0; i < count; ++i) k[i] = log_uniform(rng, lo, hi);
        std::sort(k.data(), k.data() + count);
        bool ok = true;
        for (Eigen::Index i = 1; i < count; ++i) ok = ok && (k[i] - k[i - 1]) >= min_separation * k[i];
        if (ok) return k;
    }
}

/// Strictly positive mammillary parameters: rates log-uniform in [1e-4, 1],
/// k_to_center pairwise separated by >= 1e-2 relative.
inline mamreal::MammillaryParamsd random_mammillary(std::mt19937_64& rng, Eigen::Index n) {
    mamreal::MammillaryParamsd p;
    p.k10 = log_uniform(rng, 1e-4, 1.0);
    p.k_to_center = separated_rates(rng, n - 1, 1e-4, 1.0, 1e-2);
    p.k_from_center.resize(n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i) p.k_from_center[i] = log_uniform(rng, 1e-4, 1.0);
    return p;
}

/// Strictly positive PK-PD parameters: rates log-uniform in [1e-5, 1e-1],
/// k21/k31 separated by >= 1e-2 relative, ke0 separated from every PK pole
/// (eigenvalue of the 3x3 block) by >= 1e-2 relative.
inline mamreal::PkPdParamsd random_pkpd(std::mt19937_64& rng) {
    for (;;) {
        mamreal::PkPdParamsd p;
        const auto k = separated_rates(rng, 2, 1e-5, 1e-1, 1e-2);
        std::bernoulli_distribution flip(0.5);
        p.k21 = flip(rng) ? k[0] : k[1];
        p.k31 = p.k21 == k[0] ? k[1] : k[0];
        p.k10 = log_uniform(rng, 1e-5, 1e-1);
        p.k12 = log_uniform(rng, 1e-5, 1e-1);
        p.k13 = log_uniform(rng, 1e-5, 1e-1);
        p.k1e_over_V1 = log_uniform(rng, 1e-5, 1e-1);
        p.ke0 = log_uniform(rng, 1e-5, 1e-1);
        Eigen::Matrix3d a;
        a << -(p.k10 + p.k12 + p.k13), p.k21, p.k31, p.k12, -p.k21, 0, p.k13, 0, -p.k31;
        const Eigen::Vector3cd ev = a.eigenvalues();
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
            const double pole = -ev[i].real();
            ok = ok && std::abs(pole - p.ke0) >= 1e-2 * std::max(pole, p.ke0);
        }
        if (ok) return p;
    }
}

/// Max componentwise relative error between two parameter sets.
inline double max_relative_error(const mamreal::MammillaryParamsd& got, const mamreal::MammillaryParamsd& want) {
    double e = relative_error(got.k10, want.k10);
    for (Eigen::Index i = 0; i < want.k_to_center.size(); ++i) {
        e = std::max(e, relative_error(got.k_to_center[i], want.k_to_center[i]));
        e = std::max(e, relative_error(got.k_from_center[i], want.k_from_center[i]));
    }
    return e;
}

inline double max_relative_error(const mamreal::PkPdParamsd& got, const mamreal::PkPdParamsd& want) {
    double e = 0;
    for (auto [g, w] : {std::pair{got.k10, want.k10}, {got.k12, want.k12}, {got.k13, want.k13},
                        {got.k21, want.k21}, {got.k31, want.k31}, {got.k1e_over_V1, want.k1e_over_V1},
                        {got.ke0, want.ke0}})
        e = std::max(e, relative_error(g, w));
    return e;
}

}  // namespace oracle
