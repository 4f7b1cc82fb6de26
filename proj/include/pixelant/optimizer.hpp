// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_OPTIMIZER_HPP
#define PIXELANT_OPTIMIZER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <list>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pixelant/coder.hpp"
#include "pixelant/errors.hpp"

namespace pixelant {

// Maximization objective over antenna coders. begin_block announces that
// the following eval calls vary only the block_len bits starting at
// block_start, with all other bits equal to base; implementations may use
// this to amortize work across the block enumeration (the capacity
// objective factorizes the frozen part of the port solve once per block).
class Objective {
   public:
    virtual ~Objective() = default;
    virtual double eval(const AntennaCoder& coder) = 0;
    virtual void begin_block(const AntennaCoder& base, std::size_t block_start,
                             std::size_t block_len) {
        (void)base;
        (void)block_start;
        (void)block_len;
    }
    virtual void end_block() {}
};

class FunctionObjective : public Objective {
   public:
    explicit FunctionObjective(std::function<double(const AntennaCoder&)> fn) : fn_(std::move(fn)) {}
    double eval(const AntennaCoder& coder) override { return fn_(coder); }

   private:
    std::function<double(const AntennaCoder&)> fn_;
};

// LRU-evicting value memo in front of another objective. Block hints pass
// straight through (cached values do not depend on them).
class MemoizedObjective : public Objective {
   public:
    explicit MemoizedObjective(Objective& inner, std::size_t capacity = std::size_t{1} << 20)
        : inner_(&inner), capacity_(capacity) {}

    double eval(const AntennaCoder& coder) override;
    void begin_block(const AntennaCoder& base, std::size_t block_start,
                     std::size_t block_len) override {
        inner_->begin_block(base, block_start, block_len);
    }
    void end_block() override { inner_->end_block(); }

    std::size_t misses() const { return misses_; }
    std::size_t hits() const { return hits_; }

   private:
    Objective* inner_;
    std::size_t capacity_;
    std::list<std::pair<AntennaCoder, double>> order_;
    std::unordered_map<AntennaCoder, decltype(order_)::iterator, CoderHash> map_;
    std::size_t misses_ = 0;
    std::size_t hits_ = 0;
};

struct SeboConfig {
    int block_size = 10;
    int max_sweeps = 200;
    int stall_rounds = 5;          // perturbation rounds without improvement before stopping
    double flip_probability = 0.1;  // per-bit Bernoulli flip in a perturbation
    std::uint64_t seed = 0;

    // Copy with block_size reduced to q where needed.
    SeboConfig clamped(std::size_t q) const;
    void validate(std::size_t q) const;
};

struct OptimizationTrace {
    AntennaCoder best_coder;
    double best_value = 0.0;
    std::size_t objective_evaluations = 0;  // distinct coders evaluated
    std::vector<double> value_history;      // best-so-far after each improvement
};

// Successive exhaustive Boolean optimization: sweeps of contiguous
// block-exhaustive passes until a sweep brings no improvement, then random
// bit-flip perturbations of the global best, stopping after stall_rounds
// fruitless perturbation rounds or max_sweeps sweeps in total. When
// initial_candidates are given they are all evaluated first and the best
// of them replaces the random starting coder. Ties always resolve to the
// coder with the lowest little-endian integer value.
OptimizationTrace sebo_optimize(Objective& objective, std::size_t q, const SeboConfig& config,
                                const std::vector<AntennaCoder>& initial_candidates = {});
OptimizationTrace sebo_optimize(const std::function<double(const AntennaCoder&)>& objective,
                                std::size_t q, const SeboConfig& config,
                                const std::vector<AntennaCoder>& initial_candidates = {});

// Evaluates all 2^q coders; q capped at 24.
OptimizationTrace exhaustive_search(Objective& objective, std::size_t q);
OptimizationTrace exhaustive_search(const std::function<double(const AntennaCoder&)>& objective,
                                    std::size_t q);

}  // namespace pixelant

#endif
