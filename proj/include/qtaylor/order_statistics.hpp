#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "qtaylor/errors.hpp"

namespace qtaylor {

// Left-continuous generalized inverse of the empirical CDF:
//   Q(tau) = inf { x : F_n(x) >= tau },  F_n(x(k)) = k / n.
// No interpolation between order statistics.

inline void check_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::invalid_argument("quantile index must lie in (0,1)");
    }
}

/// 1-based rank of the order statistic selected at `tau`: the smallest k with
/// k/n >= tau, evaluated in floating point exactly as the CDF is.
inline std::size_t quantile_rank(std::size_t n, double tau) {
    check_tau(tau);
    if (n == 0) throw DataError("empirical quantile of an empty sample");
    const double dn = static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::ceil(tau * dn));
    k = std::clamp<std::size_t>(k, 1, n);
    // ceil(tau*n) can be off by one when tau*n rounds across an integer.
    while (k > 1 && static_cast<double>(k - 1) / dn >= tau) --k;
    while (k < n && static_cast<double>(k) / dn < tau) ++k;
    return k;
}

/// Quantile of an already sorted (ascending) sample.
template <typename Scalar>
Scalar quantile_of_sorted(std::span<const Scalar> sorted, double tau) {
    return sorted[quantile_rank(sorted.size(), tau) - 1];
}

/// Quantile of an arbitrary sample; the scratch buffer is reordered.
template <typename Scalar>
Scalar quantile_in_place(std::span<Scalar> scratch, double tau) {
    const std::size_t k = quantile_rank(scratch.size(), tau) - 1;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                     scratch.end());
    return scratch[k];
}

template <typename Scalar>
Scalar empirical_quantile(std::span<const Scalar> sample, double tau) {
    std::vector<Scalar> scratch(sample.begin(), sample.end());
    return quantile_in_place(std::span<Scalar>(scratch), tau);
}

template <typename Derived>
typename Derived::Scalar empirical_quantile(const Eigen::DenseBase<Derived>& sample, double tau) {
    using Scalar = typename Derived::Scalar;
    std::vector<Scalar> scratch(static_cast<std::size_t>(sample.size()));
    for (Eigen::Index j = 0; j < sample.size(); ++j) {
        scratch[static_cast<std::size_t>(j)] = sample.derived().coeff(j);
    }
    return quantile_in_place(std::span<Scalar>(scratch), tau);
}

}  // namespace qtaylor
