// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_IO_HPP
#define PIXELANT_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pixelant/antenna.hpp"
#include "pixelant/codebook.hpp"
#include "pixelant/experiments.hpp"

namespace pixelant {

inline constexpr int kAntennaFormatVersion = 1;
inline constexpr int kCodebookFormatVersion = 1;
inline constexpr int kChannelDumpFormatVersion = 1;

// FNV-1a 64-bit.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

// Shortest-width fixed formatting used for CSV fields.
std::string format_double(double value);

// Writes to a temporary sibling then renames, so failures never leave a
// partial file behind.
void atomic_write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// Antenna model container. The binary layout is magic + header + two dense
// complex matrices (row-major, interleaved re/im doubles, little-endian);
// paths ending in .json use an equivalent JSON-text layout instead. Loading
// detects the variant from the content.
void save_antenna_model(const std::filesystem::path& path, const PixelAntennaModel& model);
PixelAntennaModel load_antenna_model(const std::filesystem::path& path);

// Codebook JSON files.
void save_codebook(const std::filesystem::path& path, const Codebook& codebook);
Codebook load_codebook(const std::filesystem::path& path);

// Single-realization beamspace channel dump, binary only.
struct ChannelDump {
    int num_subcarriers = 0;  // K
    int num_taps = 0;         // L
    int num_angles = 0;       // V
    int rank = 0;             // r
    std::uint64_t seed = 0;
    Eigen::MatrixXcd matrix;  // r x K
};
void save_channel_dump(const std::filesystem::path& path, const ChannelDump& dump);
ChannelDump load_channel_dump(const std::filesystem::path& path);
std::vector<std::string> check_channel_dump(const ChannelDump& dump);

// CSV rendering of sweep rows with the fixed column set
// method,snr_db,codebook_size,mean_capacity_bps_hz,stderr,n_realizations.
std::string sweep_csv(const SweepResult& result);
void save_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

}  // namespace pixelant

#endif
