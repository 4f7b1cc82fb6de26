// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_EXPERIMENTS_HPP
#define PIXELANT_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pixelant/allocation.hpp"
#include "pixelant/codebook.hpp"
#include "pixelant/optimizer.hpp"

namespace pixelant {

enum class Method { sebo, codebook, fixed_baseline, random_coder };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// Which trained codebook serves which SNR regime: the low-SNR book below
// the threshold, the high-SNR book at or above it.
struct RegimeCodebooks {
    const Codebook* low = nullptr;
    const Codebook* high = nullptr;
    double threshold_db = 15.0;

    const Codebook* pick(double snr_db) const { return snr_db < threshold_db ? low : high; }
    bool any() const { return low != nullptr || high != nullptr; }
};

struct SweepSpec {
    std::vector<double> snr_points_db;
    int num_realizations = 500;
    std::vector<Method> methods;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
    SeboConfig sebo;
    bool keep_per_realization = false;
};

struct SweepRow {
    std::string method;
    double snr_db = 0.0;
    int codebook_size = 0;  // 0 for methods without a codebook
    double mean_capacity = 0.0;
    double standard_error = 0.0;
    int n_realizations = 0;
};

// Per-realization capacities backing one row, kept when requested so tests
// can check paired (common-random-number) inequalities exactly.
struct SweepSeries {
    std::string method;
    double snr_db = 0.0;
    int codebook_size = 0;
    std::vector<double> values;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepSeries> series;  // populated when keep_per_realization
    std::uint64_t master_seed = 0;
};

// The evaluation channel for realization index d: one channel set is shared
// by every method and every SNR point (common random numbers).
BeamspaceChannel evaluation_channel(std::uint64_t master_seed, int d, const OfdmConfig& config,
                                    const BeamspaceBasis& basis,
                                    const Eigen::VectorXcd& transmit_pattern);

// The per-realization random coder shared by the random_coder method and
// SEBO's candidate pool.
AntennaCoder evaluation_random_coder(std::uint64_t master_seed, int d, int q);

// Capacity-vs-SNR sweep. For each realization SEBO's candidate pool is
// seeded with the shared random coder, the fixed baseline, and the codebook
// pick, which makes sebo >= codebook and sebo >= baseline hold exactly per
// realization.
SweepResult run_snr_sweep(const SweepSpec& spec, const CoderContext& ctx,
                          const OfdmConfig& config, const RegimeCodebooks& books,
                          const AntennaCoder& baseline);

// Capacity-vs-codebook-size sweep at one SNR point on a fresh evaluation
// set. books must be ordered by size; when they are nested the per-size
// means are nondecreasing by construction. The SEBO reference pool uses the
// largest book's pick so it dominates every size per realization.
SweepResult run_codebook_size_sweep(const std::vector<const Codebook*>& books, double snr_db,
                                    const SweepSpec& spec, const CoderContext& ctx,
                                    const OfdmConfig& config, const AntennaCoder& baseline);

}  // namespace pixelant

#endif
