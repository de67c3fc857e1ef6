#pragma once

namespace mamreal {

/// Numerical thresholds used by root classification and the condition
/// checkers. All values are relative; see each field for its scale.
template <typename Scalar = double>
struct Tolerances {
    /// Root r is real iff |Im r| <= imag * |r|.
    Scalar imag = Scalar(1e-9);
    /// Roots r_i, r_j coincide iff |r_i - r_j| <= separation * max(|r_i|, |r_j|).
    Scalar separation = Scalar(1e-7);
    /// Synthetic division accepts a root iff |remainder| <= deflation * max|coeff|.
    Scalar deflation = Scalar(1e-8);
    /// Round-trip transfer function agreement (coefficientwise relative).
    Scalar verify = Scalar(1e-8);
    /// A numerator root is zero iff |z| <= nonzero_root * (1 + max|num coeff|).
    Scalar nonzero_root = Scalar(1e-10);
    /// A numerator is monic iff |leading - 1| <= monic.
    Scalar monic = Scalar(1e-9);
    /// Eigenvalue checks use eigen * ||A||_inf as absolute threshold.
    Scalar eigen = Scalar(1e-9);
};

}  // namespace mamreal
