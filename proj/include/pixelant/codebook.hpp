// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_CODEBOOK_HPP
#define PIXELANT_CODEBOOK_HPP

#include <cstdint>
#include <vector>

#include "pixelant/allocation.hpp"
#include "pixelant/channel.hpp"
#include "pixelant/coder.hpp"
#include "pixelant/optimizer.hpp"

namespace pixelant {

struct CodebookMetadata {
    std::uint64_t training_size = 0;  // D
    std::uint64_t seed = 0;
    int lloyd_iterations = 0;
    double final_objective = 0.0;  // training-set sum capacity of the returned iterate
    bool has_duplicates = false;
    int pinned_count = 0;  // leading coders frozen during training
};

struct Codebook {
    std::vector<AntennaCoder> coders;
    double design_snr_db = 0.0;
    CodebookMetadata metadata;

    int size() const { return static_cast<int>(coders.size()); }
};

struct TrainingSet {
    std::vector<BeamspaceChannel> realizations;

    int size() const { return static_cast<int>(realizations.size()); }
};

// Cell assignment of each training realization plus the sum capacity its
// assigned coder achieves on it (the per-realization served value).
struct Partition {
    std::vector<std::size_t> assignment;  // 0-based cell indices
    std::vector<double> served_value;     // sum_k log2(...) of the winning coder
};

// D independent beamspace realizations; realization d uses a seed derived
// from (master_seed, d), so any prefix of a larger set is reproducible.
TrainingSet build_training_set(std::uint64_t master_seed, int d, const OfdmConfig& config,
                               const BeamspaceBasis& basis,
                               const Eigen::VectorXcd& transmit_pattern, unsigned threads = 1);

// Nearest-neighbor step: realization d goes to the coder with the highest
// sum capacity on it; ties to the smallest codebook index.
Partition partition_step(const Codebook& codebook, const TrainingSet& training,
                         const OfdmConfig& config, const CoderContext& ctx, unsigned threads = 1);

// Centroid step: each non-empty, non-pinned cell re-optimizes its coder by
// SEBO over the cell's summed objective, warm-started from the previous
// coder. A cell that lost all its realizations is re-seeded with the
// worst-served realization as a singleton cell. step_seed feeds the
// per-cell SEBO seeds.
Codebook centroid_step(const Codebook& previous, const Partition& partition,
                       const TrainingSet& training, const OfdmConfig& config,
                       const CoderContext& ctx, const SeboConfig& sebo,
                       std::uint64_t step_seed, unsigned threads = 1);

struct TrainOptions {
    SeboConfig sebo;
    int max_lloyd_iterations = 50;
    unsigned threads = 1;
    // Coders occupying the leading slots, frozen through training. Used to
    // nest codebooks (freeze a smaller trained book inside a larger one)
    // and to pin a known coder such as the fixed baseline.
    std::vector<AntennaCoder> pinned_coders;
};

// Generalized Lloyd training: random (plus pinned) initial coders, then
// alternating partition/centroid steps until the coder list repeats or the
// iteration cap is hit; returns the iterate with the highest training
// objective. The design SNR is taken from config.
Codebook train_codebook(int m, const TrainingSet& training, const OfdmConfig& config,
                        const CoderContext& ctx, std::uint64_t lloyd_seed,
                        const TrainOptions& options);

struct Selection {
    std::size_t index = 0;
    double average_capacity = 0.0;  // bits/s/Hz of the selected coder
};

// Runtime codebook lookup: exactly M capacity evaluations, argmax with
// smallest-index tie-break.
Selection select_coder(const Codebook& codebook, const BeamspaceChannel& channel,
                       const OfdmConfig& config, const CoderContext& ctx,
                       PatternCache* cache = nullptr);

// Precomputed pattern-coder weights for every codebook entry, for repeated
// selection against many channels.
std::vector<Eigen::VectorXcd> codebook_weights(const Codebook& codebook, const CoderContext& ctx);

// select_coder against precomputed weights.
Selection select_with_weights(const std::vector<Eigen::VectorXcd>& weights,
                              const BeamspaceChannel& channel, const OfdmConfig& config);

// Shape/structure checks for a loaded codebook file; returns violation
// messages, empty when valid.
std::vector<std::string> check_codebook(const Codebook& codebook, int expected_q = -1);

}  // namespace pixelant

#endif
