// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems
//
// Monte-Carlo sweep drivers. One evaluation channel set is shared by every
// method and SNR point (common random numbers), and each realization's SEBO
// candidate pool is seeded with the shared random coder, the baseline, and
// the codebook pick, so the dominance chain holds exactly per realization.

#include "pixelant/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pixelant/objective.hpp"
#include "pixelant/parallel.hpp"
#include "pixelant/rng.hpp"

namespace pixelant {

namespace {

struct Aggregate {
    double mean = 0.0;
    double standard_error = 0.0;
};

// Sequential two-pass mean and standard error; identical for any thread
// count because the values arrive indexed by realization.
Aggregate aggregate(const std::vector<double>& values) {
    Aggregate out;
    const std::size_t n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.standard_error =
            std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
    }
    return out;
}

void validate_spec(const SweepSpec& spec) {
    if (spec.num_realizations < 1) throw InvalidConfig("need at least one realization");
    if (spec.methods.empty()) throw InvalidConfig("no methods requested");
    for (double s : spec.snr_points_db)
        if (!std::isfinite(s)) throw InvalidConfig("SNR points must be finite");
}

std::vector<BeamspaceChannel> evaluation_channels(const SweepSpec& spec, const CoderContext& ctx,
                                                  const OfdmConfig& config) {
    const Eigen::VectorXcd e_t = canonical_transmit_pattern(ctx.model->num_angles);
    return parallel_map<BeamspaceChannel>(
        static_cast<std::size_t>(spec.num_realizations), spec.threads, [&](std::size_t d) {
            return evaluation_channel(spec.master_seed, static_cast<int>(d), config, *ctx.basis,
                                      e_t);
        });
}

void append_rows(SweepResult& result, const SweepSpec& spec, const std::string& method,
                 double snr_db, int codebook_size, const std::vector<double>& values) {
    const Aggregate agg = aggregate(values);
    result.rows.push_back({method, snr_db, codebook_size, agg.mean, agg.standard_error,
                           static_cast<int>(values.size())});
    if (spec.keep_per_realization)
        result.series.push_back({method, snr_db, codebook_size, values});
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::sebo: return "sebo";
        case Method::codebook: return "codebook";
        case Method::fixed_baseline: return "fixed_baseline";
        case Method::random_coder: return "random_coder";
    }
    throw InvalidConfig("unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "sebo") return Method::sebo;
    if (name == "codebook") return Method::codebook;
    if (name == "fixed_baseline") return Method::fixed_baseline;
    if (name == "random_coder") return Method::random_coder;
    throw InvalidConfig("unknown method name: " + name);
}

BeamspaceChannel evaluation_channel(std::uint64_t master_seed, int d, const OfdmConfig& config,
                                    const BeamspaceBasis& basis,
                                    const Eigen::VectorXcd& transmit_pattern) {
    const std::uint64_t seed =
        derive_seed(master_seed, {seed_tag::eval_channel, static_cast<std::uint64_t>(d)});
    const int v = static_cast<int>(basis.left_basis.rows()) / 2;
    const TapSet taps = generate_taps(seed, config.num_taps, v);
    return beamspace_from_taps(taps, config.num_subcarriers, basis, transmit_pattern);
}

AntennaCoder evaluation_random_coder(std::uint64_t master_seed, int d, int q) {
    Rng rng(derive_seed(master_seed, {seed_tag::random_coder, static_cast<std::uint64_t>(d)}));
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(q));
    for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    return AntennaCoder(std::move(bits));
}

SweepResult run_snr_sweep(const SweepSpec& spec, const CoderContext& ctx,
                          const OfdmConfig& config, const RegimeCodebooks& books,
                          const AntennaCoder& baseline) {
    validate_spec(spec);
    config.validate();
    const bool wants_codebook =
        std::find(spec.methods.begin(), spec.methods.end(), Method::codebook) !=
        spec.methods.end();
    if (wants_codebook && !books.any())
        throw MissingCodebook("codebook method requested but no codebook is loaded");

    const int q = ctx.model->num_switches;
    const int n = spec.num_realizations;
    const std::vector<BeamspaceChannel> channels = evaluation_channels(spec, ctx, config);
    const Eigen::VectorXcd baseline_weights = pattern_weights(ctx, baseline);
    std::vector<Eigen::VectorXcd> low_weights, high_weights;
    if (books.low != nullptr) low_weights = codebook_weights(*books.low, ctx);
    if (books.high != nullptr) high_weights = codebook_weights(*books.high, ctx);

    const bool wants_sebo = std::find(spec.methods.begin(), spec.methods.end(), Method::sebo) !=
                            spec.methods.end();
    const bool wants_random =
        std::find(spec.methods.begin(), spec.methods.end(), Method::random_coder) !=
        spec.methods.end();

    // values[snr][method][d]
    std::vector<std::vector<std::vector<double>>> values(
        spec.snr_points_db.size(),
        std::vector<std::vector<double>>(spec.methods.size(), std::vector<double>(n)));
    std::vector<int> row_sizes(spec.snr_points_db.size(), 0);

    for (std::size_t s = 0; s < spec.snr_points_db.size(); ++s) {
        const OfdmConfig cfg = config.with_snr_db(spec.snr_points_db[s]);
        const Codebook* book = books.pick(spec.snr_points_db[s]);
        const std::vector<Eigen::VectorXcd>* book_w =
            book == nullptr ? nullptr : (book == books.low ? &low_weights : &high_weights);
        row_sizes[s] = book == nullptr ? 0 : book->size();

        parallel_for(static_cast<std::size_t>(n), spec.threads, [&](std::size_t d) {
            const BeamspaceChannel& ch = channels[d];
            Selection pick;
            bool have_pick = false;
            if (book != nullptr && (wants_codebook || wants_sebo)) {
                pick = select_with_weights(*book_w, ch, cfg);
                have_pick = true;
            }
            AntennaCoder rc;
            if (wants_sebo || wants_random)
                rc = evaluation_random_coder(spec.master_seed, static_cast<int>(d), q);

            for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
                double value = 0.0;
                switch (spec.methods[mi]) {
                    case Method::fixed_baseline:
                        value = capacity_for_weights(baseline_weights, ch, cfg);
                        break;
                    case Method::codebook:
                        value = pick.average_capacity;
                        break;
                    case Method::random_coder:
                        value = coder_capacity(rc, ctx, ch, cfg);
                        break;
                    case Method::sebo: {
                        CapacityObjective objective(ctx, ch, cfg);
                        SeboConfig sc = spec.sebo.clamped(static_cast<std::size_t>(q));
                        sc.seed = derive_seed(spec.master_seed,
                                              {seed_tag::sebo_run, s, d});
                        std::vector<AntennaCoder> pool{rc, baseline};
                        if (have_pick) pool.push_back(book->coders[pick.index]);
                        const OptimizationTrace trace =
                            sebo_optimize(objective, static_cast<std::size_t>(q), sc, pool);
                        value = objective.to_average_capacity(trace.best_value);
                        break;
                    }
                }
                values[s][mi][d] = value;
            }
        });
    }

    SweepResult result;
    result.master_seed = spec.master_seed;
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
        for (std::size_t s = 0; s < spec.snr_points_db.size(); ++s)
            append_rows(result, spec, method_name(spec.methods[mi]), spec.snr_points_db[s],
                        spec.methods[mi] == Method::codebook ? row_sizes[s] : 0, values[s][mi]);
    return result;
}

SweepResult run_codebook_size_sweep(const std::vector<const Codebook*>& books, double snr_db,
                                    const SweepSpec& spec, const CoderContext& ctx,
                                    const OfdmConfig& config, const AntennaCoder& baseline) {
    validate_spec(spec);
    config.validate();
    if (books.empty()) throw MissingCodebook("codebook size sweep needs at least one codebook");
    for (const Codebook* b : books)
        if (b == nullptr || b->coders.empty())
            throw MissingCodebook("codebook size sweep received an empty codebook");
    for (std::size_t i = 1; i < books.size(); ++i)
        if (books[i]->size() < books[i - 1]->size())
            throw InvalidConfig("codebooks must be ordered by nondecreasing size");

    const int q = ctx.model->num_switches;
    const int n = spec.num_realizations;
    const OfdmConfig cfg = config.with_snr_db(snr_db);
    const std::vector<BeamspaceChannel> channels = evaluation_channels(spec, ctx, config);
    const Eigen::VectorXcd baseline_weights = pattern_weights(ctx, baseline);
    std::vector<std::vector<Eigen::VectorXcd>> all_weights;
    all_weights.reserve(books.size());
    for (const Codebook* b : books) all_weights.push_back(codebook_weights(*b, ctx));

    const bool wants_sebo = std::find(spec.methods.begin(), spec.methods.end(), Method::sebo) !=
                            spec.methods.end();
    const bool wants_random =
        std::find(spec.methods.begin(), spec.methods.end(), Method::random_coder) !=
        spec.methods.end();

    std::vector<std::vector<double>> book_values(books.size(), std::vector<double>(n));
    std::vector<double> sebo_values(n), baseline_values(n), random_values(n);

    parallel_for(static_cast<std::size_t>(n), spec.threads, [&](std::size_t d) {
        const BeamspaceChannel& ch = channels[d];
        std::vector<Selection> picks(books.size());
        for (std::size_t b = 0; b < books.size(); ++b) {
            picks[b] = select_with_weights(all_weights[b], ch, cfg);
            book_values[b][d] = picks[b].average_capacity;
        }
        baseline_values[d] = capacity_for_weights(baseline_weights, ch, cfg);
        AntennaCoder rc;
        if (wants_sebo || wants_random)
            rc = evaluation_random_coder(spec.master_seed, static_cast<int>(d), q);
        if (wants_random) random_values[d] = coder_capacity(rc, ctx, ch, cfg);
        if (wants_sebo) {
            CapacityObjective objective(ctx, ch, cfg);
            SeboConfig sc = spec.sebo.clamped(static_cast<std::size_t>(q));
            sc.seed = derive_seed(spec.master_seed, {seed_tag::sebo_run, std::uint64_t{0}, d});
            const Codebook* largest = books.back();
            std::vector<AntennaCoder> pool{rc, baseline,
                                           largest->coders[picks.back().index]};
            const OptimizationTrace trace =
                sebo_optimize(objective, static_cast<std::size_t>(q), sc, pool);
            sebo_values[d] = objective.to_average_capacity(trace.best_value);
        }
    });

    SweepResult result;
    result.master_seed = spec.master_seed;
    for (Method m : spec.methods) {
        switch (m) {
            case Method::codebook:
                for (std::size_t b = 0; b < books.size(); ++b)
                    append_rows(result, spec, "codebook", snr_db, books[b]->size(),
                                book_values[b]);
                break;
            case Method::sebo:
                append_rows(result, spec, "sebo", snr_db, 0, sebo_values);
                break;
            case Method::fixed_baseline:
                append_rows(result, spec, "fixed_baseline", snr_db, 0, baseline_values);
                break;
            case Method::random_coder:
                append_rows(result, spec, "random_coder", snr_db, 0, random_values);
                break;
        }
    }
    return result;
}

}  // namespace pixelant
