// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems
//
// Artifact file formats. Binary containers are magic + header + dense
// complex matrices (row-major, interleaved re/im 64-bit floats, little
// endian, shape-prefixed); codebooks and small antenna fixtures use JSON.

#include "pixelant/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary artifact files assume a little-endian host");

namespace pixelant {

namespace {

using nlohmann::json;

constexpr char kAntennaMagic[8] = {'P', 'X', 'A', 'N', 'T', 'M', 'D', 'L'};
constexpr char kChannelMagic[8] = {'P', 'X', 'C', 'H', 'D', 'U', 'M', 'P'};
constexpr std::uint64_t kMaxMatrixBytes = std::uint64_t{1} << 33;  // 8 GiB sanity cap

void put_bytes(std::string& out, const void* p, std::size_t n) {
    out.append(static_cast<const char*>(p), n);
}
void put_u32(std::string& out, std::uint32_t v) { put_bytes(out, &v, sizeof v); }
void put_u64(std::string& out, std::uint64_t v) { put_bytes(out, &v, sizeof v); }
void put_f64(std::string& out, double v) { put_bytes(out, &v, sizeof v); }

struct Cursor {
    const char* data;
    std::size_t size;
    std::size_t offset = 0;

    void take(void* dst, std::size_t n) {
        if (offset + n > size) throw IoFailure("truncated file");
        std::memcpy(dst, data + offset, n);
        offset += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        take(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        take(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        take(&v, sizeof v);
        return v;
    }
    void expect_magic(const char (&magic)[8], const char* what) {
        char buf[8];
        take(buf, 8);
        if (std::memcmp(buf, magic, 8) != 0)
            throw IoFailure(std::string("bad magic, not a ") + what + " file");
    }
};

void put_matrix(std::string& out, const Eigen::MatrixXcd& m) {
    put_u64(out, static_cast<std::uint64_t>(m.rows()));
    put_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            put_f64(out, m(i, j).real());
            put_f64(out, m(i, j).imag());
        }
}

Eigen::MatrixXcd take_matrix(Cursor& c) {
    const std::uint64_t rows = c.u64();
    const std::uint64_t cols = c.u64();
    if (rows == 0 || cols == 0 || rows * cols > kMaxMatrixBytes / 16)
        throw IoFailure("implausible matrix shape");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = c.f64();
            const double im = c.f64();
            m(i, j) = {re, im};
        }
    return m;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            data.push_back(m(i, j).real());
            data.push_back(m(i, j).imag());
        }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    const std::uint64_t rows = j.at("rows").get<std::uint64_t>();
    const std::uint64_t cols = j.at("cols").get<std::uint64_t>();
    const auto& data = j.at("data");
    if (rows == 0 || cols == 0 || rows * cols > kMaxMatrixBytes / 16)
        throw IoFailure("implausible matrix shape");
    if (data.size() != 2 * rows * cols)
        throw IoFailure("matrix data length does not match its shape");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j2 = 0; j2 < m.cols(); ++j2) {
            const double re = data.at(idx++).get<double>();
            const double im = data.at(idx++).get<double>();
            m(i, j2) = {re, im};
        }
    return m;
}

bool looks_like_json(const std::string& bytes) {
    for (char ch : bytes) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        return ch == '{';
    }
    return false;
}

json parse_json(const std::string& bytes, const char* what) {
    try {
        return json::parse(bytes);
    } catch (const json::exception& e) {
        throw IoFailure(std::string("malformed ") + what + " file: " + e.what());
    }
}

void require_exists(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        throw MissingFile("no such file: " + path.string());
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    return fnv1a64(bytes.data(), bytes.size());
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void atomic_write_file(const std::filesystem::path& path, std::string_view bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoFailure("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoFailure("failed to move " + tmp.string() + " into place");
    }
}

std::string read_file(const std::filesystem::path& path) {
    require_exists(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string() + " for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoFailure("failed reading " + path.string());
    return bytes;
}

void save_antenna_model(const std::filesystem::path& path, const PixelAntennaModel& model) {
    if (path.extension() == ".json") {
        json j{{"format", "pixelant-antenna"},
               {"format_version", kAntennaFormatVersion},
               {"q", model.num_switches},
               {"v", model.num_angles},
               {"seed", model.seed},
               {"calibration",
                {{"target_eadof", model.calibration.target_eadof},
                 {"knee_threshold", model.calibration.knee_threshold},
                 {"head_ratio", model.calibration.head_ratio},
                 {"head_energy_share", model.calibration.head_energy_share}}},
               {"impedance", matrix_to_json(model.impedance)},
               {"patterns", matrix_to_json(model.open_circuit_patterns)}};
        atomic_write_file(path, j.dump(2) + "\n");
        return;
    }
    std::string out;
    put_bytes(out, kAntennaMagic, 8);
    put_u32(out, kAntennaFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(model.num_switches));
    put_u32(out, static_cast<std::uint32_t>(model.num_angles));
    put_u64(out, model.seed);
    put_u32(out, static_cast<std::uint32_t>(model.calibration.target_eadof));
    put_f64(out, model.calibration.knee_threshold);
    put_f64(out, model.calibration.head_ratio);
    put_f64(out, model.calibration.head_energy_share);
    put_matrix(out, model.impedance);
    put_matrix(out, model.open_circuit_patterns);
    atomic_write_file(path, out);
}

PixelAntennaModel load_antenna_model(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    PixelAntennaModel model;
    if (looks_like_json(bytes)) {
        const json j = parse_json(bytes, "antenna model");
        try {
            if (j.at("format").get<std::string>() != "pixelant-antenna")
                throw IoFailure("not an antenna model file");
            if (j.at("format_version").get<int>() != kAntennaFormatVersion)
                throw IoFailure("unsupported antenna model format version");
            model.num_switches = j.at("q").get<int>();
            model.num_angles = j.at("v").get<int>();
            model.seed = j.at("seed").get<std::uint64_t>();
            const json& cal = j.at("calibration");
            model.calibration.target_eadof = cal.at("target_eadof").get<int>();
            model.calibration.knee_threshold = cal.at("knee_threshold").get<double>();
            model.calibration.head_ratio = cal.at("head_ratio").get<double>();
            model.calibration.head_energy_share = cal.at("head_energy_share").get<double>();
            model.impedance = matrix_from_json(j.at("impedance"));
            model.open_circuit_patterns = matrix_from_json(j.at("patterns"));
        } catch (const json::exception& e) {
            throw IoFailure(std::string("malformed antenna model file: ") + e.what());
        }
    } else {
        Cursor c{bytes.data(), bytes.size()};
        c.expect_magic(kAntennaMagic, "antenna model");
        if (c.u32() != kAntennaFormatVersion)
            throw IoFailure("unsupported antenna model format version");
        model.num_switches = static_cast<int>(c.u32());
        model.num_angles = static_cast<int>(c.u32());
        model.seed = c.u64();
        model.calibration.target_eadof = static_cast<int>(c.u32());
        model.calibration.knee_threshold = c.f64();
        model.calibration.head_ratio = c.f64();
        model.calibration.head_energy_share = c.f64();
        model.impedance = take_matrix(c);
        model.open_circuit_patterns = take_matrix(c);
        if (c.offset != c.size) throw IoFailure("trailing bytes after antenna model data");
    }
    if (model.impedance.rows() != model.num_switches + 1 ||
        model.impedance.cols() != model.num_switches + 1 ||
        model.open_circuit_patterns.rows() != 2 * model.num_angles ||
        model.open_circuit_patterns.cols() != model.num_switches + 1)
        throw IoFailure("antenna model matrices do not match the declared Q and V");
    return model;
}

void save_codebook(const std::filesystem::path& path, const Codebook& codebook) {
    json coders = json::array();
    for (const AntennaCoder& c : codebook.coders) {
        json bits = json::array();
        for (std::size_t i = 0; i < c.size(); ++i) bits.push_back(static_cast<int>(c.bit(i)));
        coders.push_back(std::move(bits));
    }
    const json j{{"format", "pixelant-codebook"},
                 {"format_version", kCodebookFormatVersion},
                 {"q", codebook.coders.empty() ? 0 : codebook.coders[0].size()},
                 {"m", codebook.coders.size()},
                 {"design_snr_db", codebook.design_snr_db},
                 {"seed", codebook.metadata.seed},
                 {"training_size", codebook.metadata.training_size},
                 {"lloyd_iterations", codebook.metadata.lloyd_iterations},
                 {"training_objective", codebook.metadata.final_objective},
                 {"has_duplicates", codebook.metadata.has_duplicates},
                 {"pinned_count", codebook.metadata.pinned_count},
                 {"coders", std::move(coders)}};
    atomic_write_file(path, j.dump(2) + "\n");
}

Codebook load_codebook(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const json j = parse_json(bytes, "codebook");
    Codebook book;
    try {
        if (j.at("format").get<std::string>() != "pixelant-codebook")
            throw IoFailure("not a codebook file");
        if (j.at("format_version").get<int>() != kCodebookFormatVersion)
            throw IoFailure("unsupported codebook format version");
        const std::size_t q = j.at("q").get<std::size_t>();
        book.design_snr_db = j.at("design_snr_db").get<double>();
        book.metadata.seed = j.at("seed").get<std::uint64_t>();
        book.metadata.training_size = j.at("training_size").get<std::uint64_t>();
        book.metadata.lloyd_iterations = j.at("lloyd_iterations").get<int>();
        book.metadata.final_objective = j.at("training_objective").get<double>();
        book.metadata.has_duplicates = j.at("has_duplicates").get<bool>();
        book.metadata.pinned_count = j.at("pinned_count").get<int>();
        for (const json& bits : j.at("coders")) {
            std::vector<std::uint8_t> b;
            b.reserve(bits.size());
            for (const json& bit : bits) {
                const int v = bit.get<int>();
                if (v != 0 && v != 1) throw IoFailure("codebook bits must be 0 or 1");
                b.push_back(static_cast<std::uint8_t>(v));
            }
            if (b.size() != q) throw IoFailure("coder length does not match declared Q");
            book.coders.emplace_back(std::move(b));
        }
        if (book.coders.size() != j.at("m").get<std::size_t>())
            throw IoFailure("coder count does not match declared M");
    } catch (const json::exception& e) {
        throw IoFailure(std::string("malformed codebook file: ") + e.what());
    }
    return book;
}

void save_channel_dump(const std::filesystem::path& path, const ChannelDump& dump) {
    std::string out;
    put_bytes(out, kChannelMagic, 8);
    put_u32(out, kChannelDumpFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(dump.num_subcarriers));
    put_u32(out, static_cast<std::uint32_t>(dump.num_taps));
    put_u32(out, static_cast<std::uint32_t>(dump.num_angles));
    put_u32(out, static_cast<std::uint32_t>(dump.rank));
    put_u64(out, dump.seed);
    put_matrix(out, dump.matrix);
    atomic_write_file(path, out);
}

ChannelDump load_channel_dump(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    Cursor c{bytes.data(), bytes.size()};
    c.expect_magic(kChannelMagic, "channel dump");
    if (c.u32() != kChannelDumpFormatVersion)
        throw IoFailure("unsupported channel dump format version");
    ChannelDump dump;
    dump.num_subcarriers = static_cast<int>(c.u32());
    dump.num_taps = static_cast<int>(c.u32());
    dump.num_angles = static_cast<int>(c.u32());
    dump.rank = static_cast<int>(c.u32());
    dump.seed = c.u64();
    dump.matrix = take_matrix(c);
    if (c.offset != c.size) throw IoFailure("trailing bytes after channel dump data");
    return dump;
}

std::vector<std::string> check_channel_dump(const ChannelDump& dump) {
    std::vector<std::string> violations;
    if (dump.num_subcarriers < 1) violations.push_back("subcarrier count must be positive");
    if (dump.num_taps < 1 || dump.num_taps > dump.num_subcarriers)
        violations.push_back("tap count must satisfy 1 <= L <= K");
    if (dump.rank < 1) violations.push_back("beamspace rank must be positive");
    if (dump.num_angles >= 1 && dump.rank > 2 * dump.num_angles)
        violations.push_back("beamspace rank exceeds 2V");
    if (dump.matrix.rows() != dump.rank || dump.matrix.cols() != dump.num_subcarriers)
        violations.push_back("matrix shape does not match the declared rank and K");
    if (!dump.matrix.allFinite()) violations.push_back("matrix has non-finite entries");
    const Eigen::Index entries = dump.matrix.size();
    if (!violations.empty() || entries == 0) return violations;
    if (entries >= 100) {
        const double mean_sq = dump.matrix.cwiseAbs2().mean();
        if (mean_sq < 0.5 || mean_sq > 1.5)
            violations.push_back("per-entry second moment " + format_double(mean_sq) +
                                 " is outside [0.5, 1.5]; beamspace entries should be CN(0,1)");
    }
    return violations;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = "method,snr_db,codebook_size,mean_capacity_bps_hz,stderr,n_realizations\n";
    for (const SweepRow& row : result.rows) {
        out += row.method;
        out += ',';
        out += format_double(row.snr_db);
        out += ',';
        out += std::to_string(row.codebook_size);
        out += ',';
        out += format_double(row.mean_capacity);
        out += ',';
        out += format_double(row.standard_error);
        out += ',';
        out += std::to_string(row.n_realizations);
        out += '\n';
    }
    return out;
}

void save_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    atomic_write_file(path, sweep_csv(result));
}

}  // namespace pixelant
