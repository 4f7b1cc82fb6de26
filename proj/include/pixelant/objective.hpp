// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_OBJECTIVE_HPP
#define PIXELANT_OBJECTIVE_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pixelant/allocation.hpp"
#include "pixelant/optimizer.hpp"

namespace pixelant {

// Water-filled capacity objective over one or more channel realizations:
// value(b) = sum over realizations of sum_k log2(1 + P_k g_k / N0), the
// un-normalized form whose argmax coincides with the average capacity.
// Coders whose restricted port solve is singular or whose pattern cannot
// be normalized evaluate to -infinity. Amortizes block enumeration through
// BlockPortSolver when driven by sebo_optimize.
class CapacityObjective : public Objective {
   public:
    CapacityObjective(const CoderContext& ctx, std::vector<const BeamspaceChannel*> channels,
                      const OfdmConfig& config);
    CapacityObjective(const CoderContext& ctx, const BeamspaceChannel& channel,
                      const OfdmConfig& config);

    double eval(const AntennaCoder& coder) override;
    void begin_block(const AntennaCoder& base, std::size_t block_start,
                     std::size_t block_len) override;
    void end_block() override;

    int num_realizations() const { return num_realizations_; }
    // Divides an eval value down to per-realization, per-subcarrier-averaged
    // capacity in bits/s/Hz.
    double to_average_capacity(double value) const {
        return value / (static_cast<double>(num_realizations_) * config_.num_subcarriers);
    }

   private:
    const CoderContext* ctx_;
    Eigen::MatrixXcd stacked_;  // r x (K * num_realizations)
    OfdmConfig config_;
    int num_realizations_;
    std::optional<BlockPortSolver> block_solver_;
    std::vector<double> level_scratch_;
    std::vector<double> power_scratch_;
};

}  // namespace pixelant

#endif
