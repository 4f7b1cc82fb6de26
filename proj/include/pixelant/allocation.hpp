// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_ALLOCATION_HPP
#define PIXELANT_ALLOCATION_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <list>
#include <unordered_map>
#include <utility>

#include "pixelant/antenna.hpp"
#include "pixelant/channel.hpp"
#include "pixelant/coder.hpp"

namespace pixelant {

struct PowerAllocation {
    Eigen::VectorXd powers;   // watts per subcarrier, nonnegative, sums to P
    double water_level = 0.0;  // mu
};

// Water-filling over subcarrier gains: sorts the inverse-gain levels
// N0/g_k, finds the largest active set whose closed-form water level sits
// above its highest level, and assigns P_k = max(0, mu - N0/g_k).
// Zero-gain subcarriers always receive zero power.
PowerAllocation water_fill(const Eigen::VectorXd& gains, double total_power, double noise_power);

// (1/K) sum_k log2(1 + P_k g_k / N0).
double average_capacity(const Eigen::VectorXd& gains, const PowerAllocation& allocation,
                        double noise_power, int k);

// water_fill followed by average_capacity in one call; zero everywhere
// (AllGainsZero) yields capacity 0 instead of an error.
double waterfill_capacity(const Eigen::VectorXd& gains, double total_power, double noise_power);

// Immutable bundle of an antenna model with its beamspace basis. Stores
// the transposed right basis so pattern-coder evaluation applies the same
// operation order as compute_pattern_coder (transform first, then scale by
// the singular values) and the two paths agree bit for bit.
struct CoderContext {
    const PixelAntennaModel* model = nullptr;
    const BeamspaceBasis* basis = nullptr;
    Eigen::MatrixXcd right_t;  // right_basis transposed, r x (Q+1)

    CoderContext() = default;
    CoderContext(const PixelAntennaModel& m, const BeamspaceBasis& b);
};

// Bounded LRU cache of normalized pattern-coder weights keyed by coder.
// Not thread-safe; use one instance per worker thread.
class PatternCache {
   public:
    explicit PatternCache(std::size_t capacity = 4096) : capacity_(capacity) {}

    Eigen::VectorXcd weights(const CoderContext& ctx, const AntennaCoder& coder);

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

   private:
    std::size_t capacity_;
    std::list<std::pair<AntennaCoder, Eigen::VectorXcd>> order_;
    std::unordered_map<AntennaCoder, decltype(order_)::iterator, CoderHash> map_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

// Normalized pattern-coder weights for a coder (no caching).
Eigen::VectorXcd pattern_weights(const CoderContext& ctx, const AntennaCoder& coder);

// Average water-filled capacity achieved by fixed pattern-coder weights on
// one channel realization.
double capacity_for_weights(const Eigen::VectorXcd& weights, const BeamspaceChannel& channel,
                            const OfdmConfig& config);

// The end-to-end objective C(b): port currents, pattern coder, effective
// gains, water-filling, average capacity. Returns 0 when every gain is zero;
// propagates SingularNetwork / DegeneratePattern.
double coder_capacity(const AntennaCoder& coder, const CoderContext& ctx,
                      const BeamspaceChannel& channel, const OfdmConfig& config,
                      PatternCache* cache = nullptr);

namespace detail {
// Un-normalized (summed over subcarriers, not averaged) water-filled
// capacity for fixed weights, with caller-owned scratch. All capacity
// comparisons in the library reduce to this routine so that paired values
// are bitwise comparable.
double sum_capacity_for_weights(const Eigen::VectorXcd& weights, const BeamspaceChannel& channel,
                                const OfdmConfig& config, std::vector<double>& levels,
                                std::vector<double>& powers);
}  // namespace detail

}  // namespace pixelant

#endif
