// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#include "pixelant/objective.hpp"

#include <limits>

#include "pixelant/detail/waterfill.hpp"

namespace pixelant {

namespace {
constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
}

CapacityObjective::CapacityObjective(const CoderContext& ctx,
                                     std::vector<const BeamspaceChannel*> channels,
                                     const OfdmConfig& config)
    : ctx_(&ctx), config_(config), num_realizations_(static_cast<int>(channels.size())) {
    if (channels.empty()) throw InvalidConfig("capacity objective needs at least one realization");
    const Eigen::Index r = channels[0]->matrix.rows();
    const Eigen::Index k = channels[0]->matrix.cols();
    if (k != config.num_subcarriers)
        throw DimensionMismatch("channel subcarrier count does not match the OFDM config");
    stacked_.resize(r, k * static_cast<Eigen::Index>(channels.size()));
    for (std::size_t d = 0; d < channels.size(); ++d) {
        if (channels[d]->matrix.rows() != r || channels[d]->matrix.cols() != k)
            throw DimensionMismatch("channel realizations differ in shape");
        stacked_.middleCols(static_cast<Eigen::Index>(d) * k, k) = channels[d]->matrix;
    }
}

CapacityObjective::CapacityObjective(const CoderContext& ctx, const BeamspaceChannel& channel,
                                     const OfdmConfig& config)
    : CapacityObjective(ctx, std::vector<const BeamspaceChannel*>{&channel}, config) {}

double CapacityObjective::eval(const AntennaCoder& coder) {
    Eigen::VectorXcd stacked_currents;
    try {
        const PortCurrents currents = block_solver_ ? block_solver_->currents(coder)
                                                    : compute_port_currents(*ctx_->model, coder);
        stacked_currents = currents.stacked();
    } catch (const SingularNetwork&) {
        return kMinusInf;
    }

    const Eigen::VectorXcd transformed = ctx_->right_t * stacked_currents.conjugate();
    const Eigen::VectorXcd raw =
        ctx_->basis->singular_values.cast<std::complex<double>>().cwiseProduct(transformed);
    const double norm = raw.norm();
    if (norm < 1e-12) return kMinusInf;
    const Eigen::VectorXcd w = raw / norm;

    const Eigen::RowVectorXcd response = w.adjoint() * stacked_;
    const int k = config_.num_subcarriers;
    power_scratch_.resize(static_cast<std::size_t>(k));
    double total = 0.0;
    for (int d = 0; d < num_realizations_; ++d) {
        const Eigen::VectorXd gains =
            response.segment(static_cast<Eigen::Index>(d) * k, k).cwiseAbs2().transpose();
        double mu = 0.0;
        try {
            mu = detail::water_level(gains.data(), k, config_.total_power, config_.noise_power,
                                     level_scratch_);
        } catch (const AllGainsZero&) {
            continue;
        }
        detail::fill_powers(gains.data(), k, mu, config_.noise_power, power_scratch_.data());
        total +=
            detail::sum_log2_capacity(gains.data(), power_scratch_.data(), k, config_.noise_power);
    }
    return total;
}

void CapacityObjective::begin_block(const AntennaCoder& base, std::size_t block_start,
                                    std::size_t block_len) {
    try {
        block_solver_.emplace(*ctx_->model, base, block_start, block_len);
    } catch (const SingularNetwork&) {
        block_solver_.reset();  // fall back to direct solves for this block
    }
}

void CapacityObjective::end_block() { block_solver_.reset(); }

}  // namespace pixelant
