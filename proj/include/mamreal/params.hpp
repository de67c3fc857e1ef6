#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mamreal/errors.hpp"

namespace mamreal {

/// Rate constants of an n-compartment mammillary model with elimination
/// from the central compartment only.
///
/// k_to_center[i-2] is k_{i1}: the rate entering the central compartment
/// from peripheral i (matrix entry A(0, i-1)).
/// k_from_center[i-2] is k_{1i}: the rate entering peripheral i from the
/// central compartment (matrix entry A(i-1, 0)).
template <typename Scalar = double>
struct MammillaryParams {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Scalar k10 = Scalar(0);
    Vector k_to_center;
    Vector k_from_center;

    Eigen::Index n() const { return k_to_center.size() + 1; }

    bool all_positive() const {
        return k10 > Scalar(0) && (k_to_center.array() > Scalar(0)).all() &&
               (k_from_center.array() > Scalar(0)).all();
    }

    template <typename Other>
    MammillaryParams<Other> cast() const {
        return {Other(k10), k_to_center.template cast<Other>(), k_from_center.template cast<Other>()};
    }
};

using MammillaryParamsd = MammillaryParams<double>;

/// Checks sizes, finiteness, and the strictly increasing, nonzero
/// k_to_center convention. Throws InvalidParameters.
template <typename Scalar>
void validate(const MammillaryParams<Scalar>& p) {
    using std::isfinite;
    if (p.k_to_center.size() < 1) throw InvalidParameters("mammillary model needs n >= 2 compartments");
    if (p.k_to_center.size() != p.k_from_center.size())
        throw InvalidParameters("k_to_center and k_from_center must both have n - 1 entries");
    if (!isfinite(p.k10) || !p.k_to_center.allFinite() || !p.k_from_center.allFinite())
        throw InvalidParameters("rates must be finite");
    for (Eigen::Index i = 0; i < p.k_to_center.size(); ++i) {
        if (p.k_to_center[i] == Scalar(0)) throw InvalidParameters("k_to_center entries must be nonzero");
        if (i > 0 && !(p.k_to_center[i - 1] < p.k_to_center[i]))
            throw InvalidParameters("k_to_center must be strictly increasing");
    }
}

template <typename Scalar>
struct OrderedParams {
    MammillaryParams<Scalar> params;
    /// permutation[j] is the input peripheral index placed at position j.
    std::vector<Eigen::Index> permutation;
    bool reordered = false;
};

/// Relabels peripherals so k_to_center is increasing. Duplicate
/// k_to_center values cannot be ordered and throw InvalidParameters.
template <typename Scalar>
OrderedParams<Scalar> canonical_order(const MammillaryParams<Scalar>& p) {
    if (p.k_to_center.size() != p.k_from_center.size())
        throw InvalidParameters("k_to_center and k_from_center must both have n - 1 entries");
    const Eigen::Index m = p.k_to_center.size();
    OrderedParams<Scalar> out;
    out.permutation.resize(static_cast<std::size_t>(m));
    std::iota(out.permutation.begin(), out.permutation.end(), Eigen::Index(0));
    std::stable_sort(out.permutation.begin(), out.permutation.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return p.k_to_center[a] < p.k_to_center[b]; });
    out.params.k10 = p.k10;
    out.params.k_to_center.resize(m);
    out.params.k_from_center.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index src = out.permutation[static_cast<std::size_t>(j)];
        out.params.k_to_center[j] = p.k_to_center[src];
        out.params.k_from_center[j] = p.k_from_center[src];
        if (src != j) out.reordered = true;
        if (j > 0 && out.params.k_to_center[j] == out.params.k_to_center[j - 1])
            throw InvalidParameters("duplicate k_to_center values; peripheral compartments cannot be ordered");
    }
    validate(out.params);
    return out;
}

/// The seven parameters of the three-compartment PK model with an
/// effect-site compartment. k1e_over_V1 is the effect-site input gain.
template <typename Scalar = double>
struct PkPdParams {
    Scalar k10 = Scalar(0);
    Scalar k12 = Scalar(0);
    Scalar k13 = Scalar(0);
    Scalar k21 = Scalar(0);
    Scalar k31 = Scalar(0);
    Scalar k1e_over_V1 = Scalar(0);
    Scalar ke0 = Scalar(0);

    bool all_positive() const {
        return k10 > 0 && k12 > 0 && k13 > 0 && k21 > 0 && k31 > 0 && k1e_over_V1 > 0 && ke0 > 0;
    }

    template <typename Other>
    PkPdParams<Other> cast() const {
        return {Other(k10), Other(k12), Other(k13), Other(k21), Other(k31), Other(k1e_over_V1), Other(ke0)};
    }

    friend bool operator==(const PkPdParams&, const PkPdParams&) = default;
};

using PkPdParamsd = PkPdParams<double>;

template <typename Scalar>
void validate(const PkPdParams<Scalar>& p) {
    using std::isfinite;
    for (Scalar v : {p.k10, p.k12, p.k13, p.k21, p.k31, p.k1e_over_V1, p.ke0})
        if (!isfinite(v)) throw InvalidParameters("rates must be finite");
    if (p.k21 == p.k31) throw InvalidParameters("k21 and k31 must differ");
}

}  // namespace mamreal
