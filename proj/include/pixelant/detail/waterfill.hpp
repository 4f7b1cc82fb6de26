// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_DETAIL_WATERFILL_HPP
#define PIXELANT_DETAIL_WATERFILL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "pixelant/errors.hpp"

namespace pixelant::detail {

// Closed-form water level over the positive-gain subcarriers: with levels
// n_k = N0/g_k sorted ascending, mu_m = (P + sum of the m lowest levels)/m,
// and the active-set size is the largest m with mu_m above its mth level
// (the feasible set of m is a prefix, so the scan stops at the first
// violation). Every public and hot-path capacity evaluation funnels through
// these helpers so repeated evaluations agree bit for bit.
inline double water_level(const double* gains, int k, double total_power, double noise_power,
                          std::vector<double>& levels) {
    levels.clear();
    for (int i = 0; i < k; ++i)
        if (gains[i] > 0.0) levels.push_back(noise_power / gains[i]);
    if (levels.empty()) throw AllGainsZero("all subcarrier gains are zero");
    std::sort(levels.begin(), levels.end());

    double mu = 0.0;
    double prefix = 0.0;
    for (std::size_t m = 1; m <= levels.size(); ++m) {
        prefix += levels[m - 1];
        const double candidate = (total_power + prefix) / static_cast<double>(m);
        if (candidate > levels[m - 1])
            mu = candidate;
        else
            break;
    }
    return mu;
}

inline void fill_powers(const double* gains, int k, double mu, double noise_power,
                        double* powers) {
    for (int i = 0; i < k; ++i) {
        if (gains[i] > 0.0) {
            const double p = mu - noise_power / gains[i];
            powers[i] = p > 0.0 ? p : 0.0;
        } else {
            powers[i] = 0.0;
        }
    }
}

// sum_k log2(1 + P_k g_k / N0), evaluated as the log2 of a running product
// with overflow renormalization: one or two log calls instead of K.
inline double sum_log2_capacity(const double* gains, const double* powers, int k,
                                double noise_power) {
    double prod = 1.0;
    long exponent = 0;
    for (int i = 0; i < k; ++i) {
        prod *= 1.0 + powers[i] * gains[i] / noise_power;
        if (prod > 0x1.0p512) {
            int e = 0;
            prod = std::frexp(prod, &e);
            exponent += e;
        }
    }
    return std::log2(prod) + static_cast<double>(exponent);
}

}  // namespace pixelant::detail

#endif
