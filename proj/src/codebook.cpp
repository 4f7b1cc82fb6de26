// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems
//
// Generalized Lloyd codebook training over a Monte-Carlo channel training
// set, and runtime codebook selection.

#include "pixelant/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "pixelant/objective.hpp"
#include "pixelant/parallel.hpp"
#include "pixelant/rng.hpp"

namespace pixelant {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

// Weights per codebook entry; an entry whose port solve or pattern fails
// gets an empty vector and never wins a comparison.
std::vector<Eigen::VectorXcd> weights_or_empty(const std::vector<AntennaCoder>& coders,
                                               const CoderContext& ctx) {
    std::vector<Eigen::VectorXcd> out(coders.size());
    for (std::size_t m = 0; m < coders.size(); ++m) {
        try {
            out[m] = pattern_weights(ctx, coders[m]);
        } catch (const Error&) {
            out[m].resize(0);
        }
    }
    return out;
}

AntennaCoder random_init_coder(std::uint64_t lloyd_seed, std::size_t slot, std::size_t q) {
    Rng rng(derive_seed(lloyd_seed, {seed_tag::lloyd_init, slot}));
    std::vector<std::uint8_t> bits(q);
    for (std::size_t i = 0; i < q; ++i) bits[i] = rng.bernoulli(0.5) ? 1 : 0;
    return AntennaCoder(std::move(bits));
}

bool has_duplicate_coders(const std::vector<AntennaCoder>& coders) {
    std::unordered_set<AntennaCoder, CoderHash> seen;
    for (const auto& c : coders)
        if (!seen.insert(c).second) return true;
    return false;
}

}  // namespace

TrainingSet build_training_set(std::uint64_t master_seed, int d, const OfdmConfig& config,
                               const BeamspaceBasis& basis,
                               const Eigen::VectorXcd& transmit_pattern, unsigned threads) {
    if (d < 1) throw InvalidConfig("training set needs at least one realization");
    config.validate();
    const int v = static_cast<int>(basis.left_basis.rows()) / 2;
    TrainingSet out;
    out.realizations = parallel_map<BeamspaceChannel>(
        static_cast<std::size_t>(d), threads, [&](std::size_t idx) {
            const std::uint64_t seed = derive_seed(master_seed, {seed_tag::training, idx});
            const TapSet taps = generate_taps(seed, config.num_taps, v);
            return beamspace_from_taps(taps, config.num_subcarriers, basis, transmit_pattern);
        });
    return out;
}

Partition partition_step(const Codebook& codebook, const TrainingSet& training,
                         const OfdmConfig& config, const CoderContext& ctx, unsigned threads) {
    if (codebook.coders.empty()) throw InvalidConfig("empty codebook");
    if (training.realizations.empty()) throw InvalidConfig("empty training set");
    const auto weights = weights_or_empty(codebook.coders, ctx);

    Partition out;
    out.assignment.resize(training.realizations.size());
    out.served_value.resize(training.realizations.size());
    parallel_for(training.realizations.size(), threads, [&](std::size_t d) {
        std::vector<double> levels, powers;
        std::size_t best_m = 0;
        double best_v = kMinusInf;
        bool any = false;
        for (std::size_t m = 0; m < weights.size(); ++m) {
            double v = kMinusInf;
            if (weights[m].size() > 0)
                v = detail::sum_capacity_for_weights(weights[m], training.realizations[d], config,
                                                     levels, powers);
            if (!any || v > best_v) {
                any = true;
                best_m = m;
                best_v = v;
            }
        }
        out.assignment[d] = best_m;
        out.served_value[d] = best_v;
    });
    return out;
}

Codebook centroid_step(const Codebook& previous, const Partition& partition,
                       const TrainingSet& training, const OfdmConfig& config,
                       const CoderContext& ctx, const SeboConfig& sebo, std::uint64_t step_seed,
                       unsigned threads) {
    const std::size_t m_total = previous.coders.size();
    const std::size_t d_total = training.realizations.size();
    if (partition.assignment.size() != d_total)
        throw DimensionMismatch("partition does not match the training set");
    const std::size_t q = static_cast<std::size_t>(ctx.model->num_switches);
    const int pinned = previous.metadata.pinned_count;

    std::vector<std::vector<const BeamspaceChannel*>> cells(m_total);
    for (std::size_t d = 0; d < d_total; ++d) {
        if (partition.assignment[d] >= m_total) throw InvalidConfig("partition cell out of range");
        cells[partition.assignment[d]].push_back(&training.realizations[d]);
    }

    // Re-seed empty trainable cells with the worst-served realizations.
    std::vector<std::size_t> worst_order(d_total);
    std::iota(worst_order.begin(), worst_order.end(), std::size_t{0});
    std::sort(worst_order.begin(), worst_order.end(), [&](std::size_t a, std::size_t b) {
        if (partition.served_value[a] != partition.served_value[b])
            return partition.served_value[a] < partition.served_value[b];
        return a < b;
    });
    std::size_t next_worst = 0;
    for (std::size_t m = static_cast<std::size_t>(std::max(pinned, 0)); m < m_total; ++m) {
        if (!cells[m].empty()) continue;
        if (next_worst < worst_order.size()) {
            cells[m].push_back(&training.realizations[worst_order[next_worst]]);
            ++next_worst;
        }
    }

    Codebook out = previous;
    parallel_for(m_total, threads, [&](std::size_t m) {
        if (static_cast<int>(m) < pinned) return;
        if (cells[m].empty()) return;
        CapacityObjective objective(ctx, cells[m], config);
        SeboConfig cell_cfg = sebo.clamped(q);
        cell_cfg.seed = derive_seed(step_seed, {m});
        const OptimizationTrace trace =
            sebo_optimize(objective, q, cell_cfg, {previous.coders[m]});
        out.coders[m] = trace.best_coder;
    });
    return out;
}

Codebook train_codebook(int m, const TrainingSet& training, const OfdmConfig& config,
                        const CoderContext& ctx, std::uint64_t lloyd_seed,
                        const TrainOptions& options) {
    if (m < 1) throw InvalidConfig("codebook size must be at least 1");
    if (m > training.size()) throw InvalidConfig("codebook size cannot exceed the training size");
    if (static_cast<int>(options.pinned_coders.size()) > m)
        throw InvalidConfig("more pinned coders than codebook slots");
    if (options.max_lloyd_iterations < 1) throw InvalidConfig("need at least one Lloyd iteration");
    config.validate();
    const std::size_t q = static_cast<std::size_t>(ctx.model->num_switches);
    options.sebo.clamped(q).validate(q);

    Codebook book;
    book.design_snr_db = config.snr_db();
    book.metadata.training_size = static_cast<std::uint64_t>(training.size());
    book.metadata.seed = lloyd_seed;
    book.metadata.pinned_count = static_cast<int>(options.pinned_coders.size());
    for (const AntennaCoder& pin : options.pinned_coders) {
        if (pin.size() != q) throw DimensionMismatch("pinned coder length does not match Q");
        book.coders.push_back(pin);
    }
    for (std::size_t slot = book.coders.size(); slot < static_cast<std::size_t>(m); ++slot)
        book.coders.push_back(random_init_coder(lloyd_seed, slot, q));

    Partition part = partition_step(book, training, config, ctx, options.threads);
    auto objective_of = [](const Partition& p) {
        double total = 0.0;
        for (double v : p.served_value) total += v;
        return total;
    };

    Codebook best_book = book;
    double best_objective = objective_of(part);
    int iterations = 0;
    std::vector<AntennaCoder> previous_coders = book.coders;
    for (int iter = 1; iter <= options.max_lloyd_iterations; ++iter) {
        iterations = iter;
        const std::uint64_t step_seed =
            derive_seed(lloyd_seed, {seed_tag::lloyd_cell, static_cast<std::uint64_t>(iter)});
        book = centroid_step(book, part, training, config, ctx, options.sebo, step_seed,
                             options.threads);
        part = partition_step(book, training, config, ctx, options.threads);
        const double objective = objective_of(part);
        if (objective > best_objective) {
            best_objective = objective;
            best_book = book;
        }
        if (book.coders == previous_coders) break;
        previous_coders = book.coders;
    }

    best_book.metadata.lloyd_iterations = iterations;
    best_book.metadata.final_objective = best_objective;
    best_book.metadata.has_duplicates = has_duplicate_coders(best_book.coders);
    return best_book;
}

Selection select_coder(const Codebook& codebook, const BeamspaceChannel& channel,
                       const OfdmConfig& config, const CoderContext& ctx, PatternCache* cache) {
    if (codebook.coders.empty()) throw InvalidConfig("empty codebook");
    std::vector<double> levels, powers;
    Selection out;
    double best_sum = kMinusInf;
    bool any = false;
    for (std::size_t m = 0; m < codebook.coders.size(); ++m) {
        double v = kMinusInf;
        try {
            const Eigen::VectorXcd w = cache != nullptr ? cache->weights(ctx, codebook.coders[m])
                                                        : pattern_weights(ctx, codebook.coders[m]);
            v = detail::sum_capacity_for_weights(w, channel, config, levels, powers);
        } catch (const Error&) {
        }
        if (!any || v > best_sum) {
            any = true;
            best_sum = v;
            out.index = m;
        }
    }
    out.average_capacity = best_sum == kMinusInf
                               ? best_sum
                               : best_sum / static_cast<double>(config.num_subcarriers);
    return out;
}

std::vector<Eigen::VectorXcd> codebook_weights(const Codebook& codebook, const CoderContext& ctx) {
    return weights_or_empty(codebook.coders, ctx);
}

Selection select_with_weights(const std::vector<Eigen::VectorXcd>& weights,
                              const BeamspaceChannel& channel, const OfdmConfig& config) {
    if (weights.empty()) throw InvalidConfig("empty codebook");
    std::vector<double> levels, powers;
    Selection out;
    double best_sum = kMinusInf;
    bool any = false;
    for (std::size_t m = 0; m < weights.size(); ++m) {
        double v = kMinusInf;
        if (weights[m].size() > 0)
            v = detail::sum_capacity_for_weights(weights[m], channel, config, levels, powers);
        if (!any || v > best_sum) {
            any = true;
            best_sum = v;
            out.index = m;
        }
    }
    out.average_capacity = best_sum == kMinusInf
                               ? best_sum
                               : best_sum / static_cast<double>(config.num_subcarriers);
    return out;
}

std::vector<std::string> check_codebook(const Codebook& codebook, int expected_q) {
    std::vector<std::string> violations;
    if (codebook.coders.empty()) violations.push_back("codebook holds no coders");
    std::size_t q = expected_q >= 0 ? static_cast<std::size_t>(expected_q)
                                    : (codebook.coders.empty() ? 0 : codebook.coders[0].size());
    for (std::size_t m = 0; m < codebook.coders.size(); ++m)
        if (codebook.coders[m].size() != q) {
            violations.push_back("coder " + std::to_string(m) + " has length " +
                                 std::to_string(codebook.coders[m].size()) + ", expected " +
                                 std::to_string(q));
            break;
        }
    if (!std::isfinite(codebook.design_snr_db))
        violations.push_back("design SNR is not finite");
    if (!codebook.coders.empty() &&
        codebook.metadata.has_duplicates != has_duplicate_coders(codebook.coders))
        violations.push_back("duplicate-coder metadata flag does not match the coder list");
    if (codebook.metadata.pinned_count < 0 ||
        codebook.metadata.pinned_count > static_cast<int>(codebook.coders.size()))
        violations.push_back("pinned-coder count is out of range");
    if (codebook.metadata.training_size > 0 &&
        codebook.metadata.training_size < codebook.coders.size())
        violations.push_back("training size is smaller than the codebook");
    return violations;
}

}  // namespace pixelant
