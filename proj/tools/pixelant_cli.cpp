// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems
//
// Command-line front end: generate synthetic antennas, train codebooks, run
// capacity sweeps, validate artifact files. Every command is deterministic
// given its arguments and referenced files; flags override config-file
// values, which override built-in defaults.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pixelant/experiments.hpp"
#include "pixelant/io.hpp"
#include "pixelant/objective.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pixelant;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitMissingFile = 3;
constexpr int kExitValidation = 4;

json load_config_json(const std::string& path) {
    if (path.empty()) return json::object();
    std::string bytes;
    try {
        bytes = read_file(path);
    } catch (const IoFailure& e) {
        throw InvalidConfig(std::string("cannot read config file: ") + e.what());
    }
    try {
        json j = json::parse(bytes);
        if (!j.is_object()) throw InvalidConfig("config file must hold a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("malformed config file ") + path + ": " + e.what());
    }
}

// Flag > config file > built-in default: a config value only lands when the
// flag was not given on the command line.
template <typename T>
void overlay(const CLI::App& cmd, const json& cfg, const std::string& flag, const char* key,
             T& value) {
    if (cmd.count(flag) > 0) return;
    if (!cfg.contains(key)) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidConfig(std::string("config key '") + key + "' has the wrong type");
    }
}

PixelAntennaModel load_checked_antenna(const std::string& path) {
    PixelAntennaModel model = load_antenna_model(path);
    const std::vector<std::string> violations = check_antenna_model(model);
    if (!violations.empty()) throw ValidationFailed(violations);
    return model;
}

Codebook load_checked_codebook(const std::string& path, int expected_q) {
    Codebook book = load_codebook(path);
    const std::vector<std::string> violations = check_codebook(book, expected_q);
    if (!violations.empty()) throw ValidationFailed(violations);
    return book;
}

json file_record(const fs::path& path) {
    return json{{"path", path.string()}, {"fnv1a64", hex64(fnv1a64_file(path))}};
}

// Output files live next to the manifest, so they are recorded by name only
// and manifests from runs in different directories stay comparable.
json output_record(const fs::path& path) {
    return json{{"path", path.filename().string()}, {"fnv1a64", hex64(fnv1a64_file(path))}};
}

json sebo_json(const SeboConfig& sc) {
    return json{{"block_size", sc.block_size},
                {"max_sweeps", sc.max_sweeps},
                {"stall_rounds", sc.stall_rounds},
                {"flip_probability", sc.flip_probability}};
}

// ---------------------------------------------------------------- gen-antenna

struct GenAntennaArgs {
    int q = 39;
    int v = 72;
    int eadof = 7;
    std::uint64_t seed = 1;
    std::string out = "antenna.pxant";
    std::string config_path;
};

int run_gen_antenna(const CLI::App& cmd, GenAntennaArgs a) {
    const json cfg = load_config_json(a.config_path);
    overlay(cmd, cfg, "--q", "q", a.q);
    overlay(cmd, cfg, "--v", "v", a.v);
    overlay(cmd, cfg, "--eadof", "eadof", a.eadof);
    overlay(cmd, cfg, "--seed", "seed", a.seed);
    overlay(cmd, cfg, "--out", "out", a.out);

    const PixelAntennaModel model = generate_synthetic_antenna(a.seed, a.q, a.v, a.eadof);
    const BeamspaceBasis basis = compute_basis(model, model.calibration.knee_threshold);
    save_antenna_model(a.out, model);
    std::printf("wrote %s\n", a.out.c_str());
    std::printf("switches: %d, angles: %d, seed: %llu\n", model.num_switches, model.num_angles,
                static_cast<unsigned long long>(model.seed));
    std::printf("achieved eadof: %d (target %d), energy fraction: %s\n", basis.eadof, a.eadof,
                format_double(basis.energy_fraction).c_str());
    return kExitOk;
}

// ------------------------------------------------------------- train-codebook

struct TrainArgs {
    std::string antenna = "antenna.pxant";
    int m = 16;
    int d = 2000;
    double design_snr_db = 0.0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = "codebook.json";
    std::string init_from;
    bool pin_baseline = false;
    int lloyd_iterations = 50;
    int k = 64;
    int l = 4;
    double noise_power = 1.0;
    SeboConfig sebo;
    std::string config_path;
};

void overlay_common(const CLI::App& cmd, const json& cfg, int& k, int& l, double& noise,
                    SeboConfig& sebo) {
    overlay(cmd, cfg, "--k", "k", k);
    overlay(cmd, cfg, "--l", "l", l);
    overlay(cmd, cfg, "--noise", "noise_power", noise);
    overlay(cmd, cfg, "--block", "block_size", sebo.block_size);
    overlay(cmd, cfg, "--sweeps", "max_sweeps", sebo.max_sweeps);
    overlay(cmd, cfg, "--stall", "stall_rounds", sebo.stall_rounds);
    overlay(cmd, cfg, "--flip", "flip_probability", sebo.flip_probability);
}

OfdmConfig make_ofdm(int k, int l, double noise_power, double snr_db) {
    OfdmConfig config;
    config.num_subcarriers = k;
    config.num_taps = l;
    config.noise_power = noise_power;
    config.total_power = noise_power * k;  // 0 dB reference, rescaled next
    config = config.with_snr_db(snr_db);
    config.validate();
    return config;
}

int run_train_codebook(const CLI::App& cmd, TrainArgs a) {
    const json cfg = load_config_json(a.config_path);
    overlay(cmd, cfg, "--antenna", "antenna", a.antenna);
    overlay(cmd, cfg, "--m", "m", a.m);
    overlay(cmd, cfg, "--d", "d", a.d);
    overlay(cmd, cfg, "--design-snr", "design_snr_db", a.design_snr_db);
    overlay(cmd, cfg, "--seed", "seed", a.seed);
    overlay(cmd, cfg, "--out", "out", a.out);
    overlay(cmd, cfg, "--init-from", "init_from", a.init_from);
    overlay(cmd, cfg, "--pin-baseline", "pin_baseline", a.pin_baseline);
    overlay(cmd, cfg, "--lloyd-iters", "lloyd_iterations", a.lloyd_iterations);
    overlay_common(cmd, cfg, a.k, a.l, a.noise_power, a.sebo);

    const PixelAntennaModel model = load_checked_antenna(a.antenna);
    const BeamspaceBasis basis = compute_basis(model, model.calibration.knee_threshold);
    const CoderContext ctx(model, basis);
    const OfdmConfig config = make_ofdm(a.k, a.l, a.noise_power, a.design_snr_db);

    TrainOptions options;
    options.sebo = a.sebo;
    options.threads = a.threads;
    options.max_lloyd_iterations = a.lloyd_iterations;
    if (a.pin_baseline)
        options.pinned_coders.push_back(AntennaCoder::ones(model.num_switches));
    if (!a.init_from.empty()) {
        const Codebook parent = load_checked_codebook(a.init_from, model.num_switches);
        for (const AntennaCoder& c : parent.coders) options.pinned_coders.push_back(c);
    }

    const Eigen::VectorXcd e_t = canonical_transmit_pattern(model.num_angles);
    const TrainingSet training =
        build_training_set(a.seed, a.d, config, basis, e_t, a.threads);
    const Codebook book = train_codebook(a.m, training, config, ctx, a.seed, options);
    save_codebook(a.out, book);
    std::printf("wrote %s\n", a.out.c_str());
    std::printf("m: %d, design snr: %s dB, lloyd iterations: %d\n", book.size(),
                format_double(book.design_snr_db).c_str(), book.metadata.lloyd_iterations);
    std::printf("training objective: %s, pinned: %d, duplicates: %s\n",
                format_double(book.metadata.final_objective).c_str(),
                book.metadata.pinned_count, book.metadata.has_duplicates ? "yes" : "no");
    return kExitOk;
}

// ----------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string antenna = "antenna.pxant";
    std::string mode = "snr";
    std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0};
    int n = 500;
    std::vector<std::string> methods{"sebo", "codebook", "fixed_baseline"};
    std::string codebook_low;
    std::string codebook_high;
    std::vector<std::string> codebooks;
    double regime_threshold_db = 15.0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out_dir = ".";
    bool dump_first_channel = false;
    int k = 64;
    int l = 4;
    double noise_power = 1.0;
    SeboConfig sebo;
    std::string config_path;
};

int run_sweep(const CLI::App& cmd, SweepArgs a) {
    const json cfg = load_config_json(a.config_path);
    overlay(cmd, cfg, "--antenna", "antenna", a.antenna);
    overlay(cmd, cfg, "--mode", "mode", a.mode);
    overlay(cmd, cfg, "--snr", "snr_db", a.snr_db);
    overlay(cmd, cfg, "--n", "n", a.n);
    overlay(cmd, cfg, "--methods", "methods", a.methods);
    overlay(cmd, cfg, "--codebook-low", "codebook_low", a.codebook_low);
    overlay(cmd, cfg, "--codebook-high", "codebook_high", a.codebook_high);
    overlay(cmd, cfg, "--codebooks", "codebooks", a.codebooks);
    overlay(cmd, cfg, "--regime-threshold", "regime_threshold_db", a.regime_threshold_db);
    overlay(cmd, cfg, "--seed", "seed", a.seed);
    overlay(cmd, cfg, "--out-dir", "out_dir", a.out_dir);
    overlay(cmd, cfg, "--dump-first-channel", "dump_first_channel", a.dump_first_channel);
    overlay_common(cmd, cfg, a.k, a.l, a.noise_power, a.sebo);

    if (a.mode != "snr" && a.mode != "codebook-size")
        throw InvalidConfig("mode must be 'snr' or 'codebook-size'");
    if (a.snr_db.empty()) throw InvalidConfig("at least one SNR point is required");

    const PixelAntennaModel model = load_checked_antenna(a.antenna);
    const BeamspaceBasis basis = compute_basis(model, model.calibration.knee_threshold);
    const CoderContext ctx(model, basis);
    const OfdmConfig config = make_ofdm(a.k, a.l, a.noise_power, 0.0);
    const AntennaCoder baseline = AntennaCoder::ones(model.num_switches);

    SweepSpec spec;
    spec.snr_points_db = a.snr_db;
    spec.num_realizations = a.n;
    for (const std::string& name : a.methods) spec.methods.push_back(method_from_name(name));
    spec.master_seed = a.seed;
    spec.threads = a.threads;
    spec.sebo = a.sebo;

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);

    json manifest{{"command", "sweep"},
                  {"mode", a.mode},
                  {"seed", a.seed},
                  {"antenna", file_record(a.antenna)},
                  {"ofdm", json{{"k", a.k},
                                {"l", a.l},
                                {"noise_power", a.noise_power},
                                {"subcarrier_spacing_hz", config.subcarrier_spacing},
                                {"center_frequency_hz", config.center_frequency}}},
                  {"snr_points_db", a.snr_db},
                  {"n_realizations", a.n},
                  {"methods", a.methods},
                  {"sebo", sebo_json(spec.sebo)}};

    SweepResult result;
    if (a.mode == "snr") {
        Codebook low_book, high_book;
        RegimeCodebooks books;
        books.threshold_db = a.regime_threshold_db;
        if (!a.codebook_low.empty()) {
            low_book = load_checked_codebook(a.codebook_low, model.num_switches);
            books.low = &low_book;
        }
        if (!a.codebook_high.empty()) {
            high_book = load_checked_codebook(a.codebook_high, model.num_switches);
            books.high = &high_book;
        }
        if (books.low == nullptr) books.low = books.high;
        if (books.high == nullptr) books.high = books.low;
        json book_files = json::array();
        if (!a.codebook_low.empty()) book_files.push_back(file_record(a.codebook_low));
        if (!a.codebook_high.empty()) book_files.push_back(file_record(a.codebook_high));
        manifest["codebooks"] = std::move(book_files);
        manifest["regime_threshold_db"] = a.regime_threshold_db;
        result = run_snr_sweep(spec, ctx, config, books, baseline);
    } else {
        if (a.codebooks.empty())
            throw MissingCodebook("codebook-size mode needs at least one --codebooks entry");
        std::vector<Codebook> loaded;
        loaded.reserve(a.codebooks.size());
        json book_files = json::array();
        for (const std::string& path : a.codebooks) {
            loaded.push_back(load_checked_codebook(path, model.num_switches));
            book_files.push_back(file_record(path));
        }
        manifest["codebooks"] = std::move(book_files);
        std::vector<const Codebook*> books;
        for (const Codebook& b : loaded) books.push_back(&b);
        result = run_codebook_size_sweep(books, a.snr_db.front(), spec, ctx, config, baseline);
    }

    const fs::path csv_path = fs::path(a.out_dir) / "sweep.csv";
    save_sweep_csv(csv_path, result);
    manifest["outputs"] = json{{"csv", output_record(csv_path)}};

    if (a.dump_first_channel) {
        const Eigen::VectorXcd e_t = canonical_transmit_pattern(model.num_angles);
        const BeamspaceChannel ch = evaluation_channel(a.seed, 0, config, basis, e_t);
        ChannelDump dump;
        dump.num_subcarriers = config.num_subcarriers;
        dump.num_taps = config.num_taps;
        dump.num_angles = model.num_angles;
        dump.rank = basis.eadof;
        dump.seed = a.seed;
        dump.matrix = ch.matrix;
        const fs::path dump_path = fs::path(a.out_dir) / "channel0.pxch";
        save_channel_dump(dump_path, dump);
        manifest["outputs"]["channel_dump"] = output_record(dump_path);
    }

    const fs::path manifest_path = fs::path(a.out_dir) / "manifest.json";
    atomic_write_file(manifest_path, manifest.dump(2) + "\n");
    std::printf("wrote %s and %s\n", csv_path.string().c_str(), manifest_path.string().c_str());
    for (const SweepRow& row : result.rows)
        std::printf("%s snr=%s dB m=%d mean=%s stderr=%s n=%d\n", row.method.c_str(),
                    format_double(row.snr_db).c_str(), row.codebook_size,
                    format_double(row.mean_capacity).c_str(),
                    format_double(row.standard_error).c_str(), row.n_realizations);
    return kExitOk;
}

// -------------------------------------------------------------------- validate

int run_validate(const std::string& path) {
    const std::string bytes = read_file(path);
    std::string kind;
    std::vector<std::string> violations;
    if (bytes.rfind("PXANTMDL", 0) == 0) {
        kind = "antenna model";
        violations = check_antenna_model(load_antenna_model(path));
    } else if (bytes.rfind("PXCHDUMP", 0) == 0) {
        kind = "channel dump";
        violations = check_channel_dump(load_channel_dump(path));
    } else {
        json j;
        try {
            j = json::parse(bytes);
        } catch (const json::exception&) {
            throw IoFailure(path + " is not a recognized artifact file");
        }
        const std::string format = j.is_object() ? j.value("format", "") : "";
        if (format == "pixelant-antenna") {
            kind = "antenna model";
            violations = check_antenna_model(load_antenna_model(path));
        } else if (format == "pixelant-codebook") {
            kind = "codebook";
            violations = check_codebook(load_codebook(path));
        } else {
            throw IoFailure(path + " is not a recognized artifact file");
        }
    }
    if (!violations.empty()) throw ValidationFailed(violations);
    std::printf("ok: %s %s\n", kind.c_str(), path.c_str());
    return kExitOk;
}

void add_sebo_flags(CLI::App* cmd, SeboConfig& sebo) {
    cmd->add_option("--block", sebo.block_size, "SEBO block size");
    cmd->add_option("--sweeps", sebo.max_sweeps, "SEBO sweep budget");
    cmd->add_option("--stall", sebo.stall_rounds, "fruitless perturbation rounds before stop");
    cmd->add_option("--flip", sebo.flip_probability, "per-bit perturbation flip probability");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pixel-antenna coding toolkit"};
    app.require_subcommand(1);

    GenAntennaArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-antenna", "generate a synthetic antenna model");
    gen_cmd->add_option("--q", gen.q, "number of pixel switches");
    gen_cmd->add_option("--v", gen.v, "number of pattern sample angles");
    gen_cmd->add_option("--eadof", gen.eadof, "target effective aerial degrees of freedom");
    gen_cmd->add_option("--seed", gen.seed, "generator seed");
    gen_cmd->add_option("--out", gen.out, "output file (.json for JSON, binary otherwise)");
    gen_cmd->add_option("--config", gen.config_path, "JSON config file");

    TrainArgs train;
    CLI::App* train_cmd = app.add_subcommand("train-codebook", "train a codebook");
    train_cmd->add_option("--antenna", train.antenna, "antenna model file");
    train_cmd->add_option("--m", train.m, "codebook size");
    train_cmd->add_option("--d", train.d, "training set size");
    train_cmd->add_option("--design-snr", train.design_snr_db, "design SNR in dB");
    train_cmd->add_option("--seed", train.seed, "master seed");
    train_cmd->add_option("--threads", train.threads, "worker thread cap");
    train_cmd->add_option("--out", train.out, "output codebook file");
    train_cmd->add_option("--init-from", train.init_from,
                          "existing codebook whose coders are pinned as a frozen prefix");
    train_cmd->add_flag("--pin-baseline", train.pin_baseline,
                        "pin the all-open baseline coder as the first entry");
    train_cmd->add_option("--lloyd-iters", train.lloyd_iterations, "Lloyd iteration cap");
    train_cmd->add_option("--k", train.k, "subcarrier count");
    train_cmd->add_option("--l", train.l, "channel tap count");
    train_cmd->add_option("--noise", train.noise_power, "per-subcarrier noise power");
    add_sebo_flags(train_cmd, train.sebo);
    train_cmd->add_option("--config", train.config_path, "JSON config file");

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a Monte-Carlo capacity sweep");
    sweep_cmd->add_option("--antenna", sweep.antenna, "antenna model file");
    sweep_cmd->add_option("--mode", sweep.mode, "'snr' or 'codebook-size'");
    sweep_cmd->add_option("--snr", sweep.snr_db, "SNR points in dB (first one for codebook-size)");
    sweep_cmd->add_option("--n", sweep.n, "Monte-Carlo realizations");
    sweep_cmd->add_option("--methods", sweep.methods,
                          "sebo, codebook, fixed_baseline, random_coder");
    sweep_cmd->add_option("--codebook-low", sweep.codebook_low, "codebook for the low-SNR regime");
    sweep_cmd->add_option("--codebook-high", sweep.codebook_high,
                          "codebook for the high-SNR regime");
    sweep_cmd->add_option("--codebooks", sweep.codebooks,
                          "codebooks by nondecreasing size (codebook-size mode)");
    sweep_cmd->add_option("--regime-threshold", sweep.regime_threshold_db,
                          "SNR in dB at which the high-SNR codebook takes over");
    sweep_cmd->add_option("--seed", sweep.seed, "master seed");
    sweep_cmd->add_option("--threads", sweep.threads, "worker thread cap");
    sweep_cmd->add_option("--out-dir", sweep.out_dir, "output directory");
    sweep_cmd->add_flag("--dump-first-channel", sweep.dump_first_channel,
                        "also write realization 0's beamspace channel");
    sweep_cmd->add_option("--k", sweep.k, "subcarrier count");
    sweep_cmd->add_option("--l", sweep.l, "channel tap count");
    sweep_cmd->add_option("--noise", sweep.noise_power, "per-subcarrier noise power");
    add_sebo_flags(sweep_cmd, sweep.sebo);
    sweep_cmd->add_option("--config", sweep.config_path, "JSON config file");

    std::string validate_path;
    CLI::App* validate_cmd = app.add_subcommand("validate", "check an artifact file's invariants");
    validate_cmd->add_option("file", validate_path, "artifact file to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    try {
        if (gen_cmd->parsed()) return run_gen_antenna(*gen_cmd, gen);
        if (train_cmd->parsed()) return run_train_codebook(*train_cmd, train);
        if (sweep_cmd->parsed()) return run_sweep(*sweep_cmd, sweep);
        if (validate_cmd->parsed()) return run_validate(validate_path);
    } catch (const ValidationFailed& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const MissingFile& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMissingFile;
    } catch (const MissingCodebook& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMissingFile;
    } catch (const InvalidConfig& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidConfig;
    } catch (const DimensionMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidConfig;
    } catch (const TooLarge& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
