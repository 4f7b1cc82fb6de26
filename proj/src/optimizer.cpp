// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems
//
// Successive exhaustive Boolean optimization over antenna coders, plus the
// exhaustive-search oracle used for small problem sizes.

#include "pixelant/optimizer.hpp"

#include <limits>
#include <string>

#include "pixelant/rng.hpp"

namespace pixelant {

namespace {

constexpr std::size_t kExhaustiveCap = 24;

double checked_eval(Objective& objective, const AntennaCoder& coder) {
    try {
        return objective.eval(coder);
    } catch (const std::exception& e) {
        throw Error("objective evaluation failed for coder " + coder.to_string() + ": " +
                    e.what());
    }
}

AntennaCoder random_coder(Rng& rng, std::size_t q) {
    std::vector<std::uint8_t> bits(q);
    for (std::size_t i = 0; i < q; ++i) bits[i] = rng.bernoulli(0.5) ? 1 : 0;
    return AntennaCoder(std::move(bits));
}

// Shared best-so-far bookkeeping with the lowest-little-endian tie-break.
struct BestTracker {
    AntennaCoder coder;
    double value = -std::numeric_limits<double>::infinity();
    bool any = false;

    bool consider(const AntennaCoder& c, double v) {
        if (!any || v > value || (v == value && coder_index_less(c, coder))) {
            const bool improved = !any || v > value;
            coder = c;
            value = v;
            any = true;
            return improved;
        }
        return false;
    }
};

}  // namespace

double MemoizedObjective::eval(const AntennaCoder& coder) {
    auto it = map_.find(coder);
    if (it != map_.end()) {
        ++hits_;
        order_.splice(order_.begin(), order_, it->second);
        return it->second->second;
    }
    ++misses_;
    const double value = inner_->eval(coder);
    order_.emplace_front(coder, value);
    map_[coder] = order_.begin();
    if (map_.size() > capacity_) {
        map_.erase(order_.back().first);
        order_.pop_back();
    }
    return value;
}

SeboConfig SeboConfig::clamped(std::size_t q) const {
    SeboConfig out = *this;
    if (out.block_size > static_cast<int>(q)) out.block_size = static_cast<int>(q);
    return out;
}

void SeboConfig::validate(std::size_t q) const {
    if (block_size < 1 || block_size > static_cast<int>(q))
        throw InvalidConfig("block size must lie in [1, Q]");
    if (block_size > static_cast<int>(kExhaustiveCap))
        throw TooLarge("block size above " + std::to_string(kExhaustiveCap) +
                       " is not enumerable");
    if (!(flip_probability > 0.0) || flip_probability > 0.5)
        throw InvalidConfig("flip probability must lie in (0, 0.5]");
    if (max_sweeps < 1) throw InvalidConfig("need at least one sweep");
    if (stall_rounds < 0) throw InvalidConfig("stall rounds must be nonnegative");
}

OptimizationTrace sebo_optimize(Objective& objective, std::size_t q, const SeboConfig& config,
                                const std::vector<AntennaCoder>& initial_candidates) {
    if (q == 0) throw InvalidConfig("need at least one switch");
    config.validate(q);
    MemoizedObjective memo(objective);
    Rng rng(config.seed);

    OptimizationTrace trace;
    BestTracker global;
    auto track_global = [&](const AntennaCoder& c, double v) {
        if (global.consider(c, v)) trace.value_history.push_back(global.value);
    };

    AntennaCoder current;
    double current_value = 0.0;
    if (initial_candidates.empty()) {
        current = random_coder(rng, q);
        current_value = checked_eval(memo, current);
        track_global(current, current_value);
    } else {
        for (const AntennaCoder& cand : initial_candidates) {
            if (cand.size() != q)
                throw DimensionMismatch("initial candidate length does not match Q");
            track_global(cand, checked_eval(memo, cand));
        }
        current = global.coder;
        current_value = global.value;
    }

    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // (start, len)
    for (std::size_t start = 0; start < q; start += config.block_size)
        blocks.emplace_back(start, std::min<std::size_t>(config.block_size, q - start));

    int sweeps_done = 0;
    auto run_sweeps = [&] {
        while (sweeps_done < config.max_sweeps) {
            ++sweeps_done;
            bool improved = false;
            for (const auto& [start, len] : blocks) {
                memo.begin_block(current, start, len);
                BestTracker block_best;
                block_best.consider(current, current_value);
                const std::uint64_t settings = std::uint64_t{1} << len;
                for (std::uint64_t idx = 0; idx < settings; ++idx) {
                    AntennaCoder cand = current;
                    for (std::size_t j = 0; j < len; ++j)
                        cand.set_bit(start + j, static_cast<std::uint8_t>((idx >> j) & 1u));
                    block_best.consider(cand, checked_eval(memo, cand));
                }
                memo.end_block();
                if (block_best.value > current_value ||
                    (block_best.value == current_value &&
                     coder_index_less(block_best.coder, current))) {
                    if (block_best.value > current_value) improved = true;
                    current = block_best.coder;
                    current_value = block_best.value;
                    track_global(current, current_value);
                }
            }
            if (!improved) break;
        }
    };

    run_sweeps();
    int stall = 0;
    while (stall < config.stall_rounds && sweeps_done < config.max_sweeps) {
        AntennaCoder perturbed = global.coder;
        for (std::size_t i = 0; i < q; ++i)
            if (rng.bernoulli(config.flip_probability)) perturbed.flip_bit(i);
        const double before = global.value;
        current = perturbed;
        current_value = checked_eval(memo, perturbed);
        track_global(current, current_value);
        run_sweeps();
        stall = global.value > before ? 0 : stall + 1;
    }

    trace.best_coder = global.coder;
    trace.best_value = global.value;
    trace.objective_evaluations = memo.misses();
    return trace;
}

OptimizationTrace sebo_optimize(const std::function<double(const AntennaCoder&)>& objective,
                                std::size_t q, const SeboConfig& config,
                                const std::vector<AntennaCoder>& initial_candidates) {
    FunctionObjective wrapped(objective);
    return sebo_optimize(wrapped, q, config, initial_candidates);
}

OptimizationTrace exhaustive_search(Objective& objective, std::size_t q) {
    if (q == 0) throw InvalidConfig("need at least one switch");
    if (q > kExhaustiveCap)
        throw TooLarge("exhaustive search over Q > " + std::to_string(kExhaustiveCap) +
                       " switches is not enumerable");
    OptimizationTrace trace;
    BestTracker best;
    const std::uint64_t total = std::uint64_t{1} << q;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const AntennaCoder coder = AntennaCoder::from_index(idx, q);
        if (best.consider(coder, checked_eval(objective, coder)))
            trace.value_history.push_back(best.value);
    }
    trace.best_coder = best.coder;
    trace.best_value = best.value;
    trace.objective_evaluations = total;
    return trace;
}

OptimizationTrace exhaustive_search(const std::function<double(const AntennaCoder&)>& objective,
                                    std::size_t q) {
    FunctionObjective wrapped(objective);
    return exhaustive_search(wrapped, q);
}

}  // namespace pixelant
