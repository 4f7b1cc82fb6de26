// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems
//
// Water-filling power allocation and the end-to-end coder capacity
// objective.

#include "pixelant/allocation.hpp"

#include <cmath>
#include <string>

#include "pixelant/detail/waterfill.hpp"

namespace pixelant {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw InvalidConfig(std::string(what) + " must be positive and finite");
}

Eigen::VectorXcd weights_from_parts(const Eigen::MatrixXcd& right_t,
                                    const Eigen::VectorXd& singular_values,
                                    const Eigen::VectorXcd& stacked_currents) {
    const Eigen::VectorXcd transformed = right_t * stacked_currents.conjugate();
    const Eigen::VectorXcd raw =
        singular_values.cast<std::complex<double>>().cwiseProduct(transformed);
    const double norm = raw.norm();
    if (norm < 1e-12)
        throw DegeneratePattern("pattern coder has vanishing norm, cannot normalize");
    return raw / norm;
}

}  // namespace

PowerAllocation water_fill(const Eigen::VectorXd& gains, double total_power, double noise_power) {
    require_positive(total_power, "total power");
    require_positive(noise_power, "noise power");
    const int k = static_cast<int>(gains.size());
    if (k == 0) throw InvalidConfig("empty gain vector");
    for (int i = 0; i < k; ++i)
        if (!(gains(i) >= 0.0) || !std::isfinite(gains(i)))
            throw InvalidConfig("gains must be nonnegative and finite");

    std::vector<double> levels;
    PowerAllocation out;
    out.water_level = detail::water_level(gains.data(), k, total_power, noise_power, levels);
    out.powers.resize(k);
    detail::fill_powers(gains.data(), k, out.water_level, noise_power, out.powers.data());
    return out;
}

double average_capacity(const Eigen::VectorXd& gains, const PowerAllocation& allocation,
                        double noise_power, int k) {
    if (gains.size() != k || allocation.powers.size() != k)
        throw DimensionMismatch("gain and power vectors must both have length K");
    require_positive(noise_power, "noise power");
    return detail::sum_log2_capacity(gains.data(), allocation.powers.data(), k, noise_power) /
           static_cast<double>(k);
}

double waterfill_capacity(const Eigen::VectorXd& gains, double total_power, double noise_power) {
    try {
        const PowerAllocation allocation = water_fill(gains, total_power, noise_power);
        return average_capacity(gains, allocation, noise_power, static_cast<int>(gains.size()));
    } catch (const AllGainsZero&) {
        return 0.0;
    }
}

CoderContext::CoderContext(const PixelAntennaModel& m, const BeamspaceBasis& b)
    : model(&m), basis(&b) {
    if (b.right_basis.rows() != m.num_switches + 1)
        throw DimensionMismatch("basis right factor does not match the model port count");
    right_t = b.right_basis.transpose();
}

Eigen::VectorXcd pattern_weights(const CoderContext& ctx, const AntennaCoder& coder) {
    const PortCurrents currents = compute_port_currents(*ctx.model, coder);
    return weights_from_parts(ctx.right_t, ctx.basis->singular_values, currents.stacked());
}

Eigen::VectorXcd PatternCache::weights(const CoderContext& ctx, const AntennaCoder& coder) {
    auto it = map_.find(coder);
    if (it != map_.end()) {
        ++hits_;
        order_.splice(order_.begin(), order_, it->second);
        return it->second->second;
    }
    ++misses_;
    Eigen::VectorXcd w = pattern_weights(ctx, coder);
    order_.emplace_front(coder, w);
    map_[coder] = order_.begin();
    if (map_.size() > capacity_) {
        map_.erase(order_.back().first);
        order_.pop_back();
    }
    return w;
}

namespace detail {

// Un-normalized sum capacity sum_k log2(1 + P_k g_k / N0) under
// water-filling for fixed pattern-coder weights; 0 when every gain is zero.
double sum_capacity_for_weights(const Eigen::VectorXcd& weights, const BeamspaceChannel& channel,
                                const OfdmConfig& config, std::vector<double>& levels,
                                std::vector<double>& powers) {
    if (weights.size() != channel.matrix.rows())
        throw DimensionMismatch("pattern coder and channel rank disagree");
    const int k = static_cast<int>(channel.matrix.cols());
    const Eigen::VectorXd gains = (weights.adjoint() * channel.matrix).cwiseAbs2().transpose();
    double mu = 0.0;
    try {
        mu = water_level(gains.data(), k, config.total_power, config.noise_power, levels);
    } catch (const AllGainsZero&) {
        return 0.0;
    }
    powers.resize(static_cast<std::size_t>(k));
    fill_powers(gains.data(), k, mu, config.noise_power, powers.data());
    return sum_log2_capacity(gains.data(), powers.data(), k, config.noise_power);
}

}  // namespace detail

double capacity_for_weights(const Eigen::VectorXcd& weights, const BeamspaceChannel& channel,
                            const OfdmConfig& config) {
    std::vector<double> levels, powers;
    return detail::sum_capacity_for_weights(weights, channel, config, levels, powers) /
           static_cast<double>(channel.matrix.cols());
}

double coder_capacity(const AntennaCoder& coder, const CoderContext& ctx,
                      const BeamspaceChannel& channel, const OfdmConfig& config,
                      PatternCache* cache) {
    const Eigen::VectorXcd w =
        cache != nullptr ? cache->weights(ctx, coder) : pattern_weights(ctx, coder);
    return capacity_for_weights(w, channel, config);
}

}  // namespace pixelant
