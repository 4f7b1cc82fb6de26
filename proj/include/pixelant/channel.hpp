// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_CHANNEL_HPP
#define PIXELANT_CHANNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pixelant/antenna.hpp"
#include "pixelant/errors.hpp"

namespace pixelant {

// OFDM system parameters. The bandwidth is derived as K * subcarrier
// spacing; the center frequency is carried as metadata only (the channel
// statistics are frequency-flat per tap).
struct OfdmConfig {
    int num_subcarriers = 64;           // K
    int num_taps = 4;                   // L
    double subcarrier_spacing = 312.5e3;  // Hz
    double center_frequency = 2.4e9;      // Hz
    double noise_power = 1.0;             // N0, watts per subcarrier
    double total_power = 64.0;            // P, watts across all subcarriers

    double bandwidth() const { return num_subcarriers * subcarrier_spacing; }
    double snr() const { return total_power / (num_subcarriers * noise_power); }
    double snr_db() const;
    // Returns a copy with total_power set so that P/(K N0) equals the
    // requested SNR.
    OfdmConfig with_snr_db(double snr_db) const;
    // Absolute frequency of subcarrier k (1-based), metadata only.
    double subcarrier_frequency(int k) const {
        return center_frequency + subcarrier_spacing * (k - 1 - (num_subcarriers - 1) / 2.0);
    }
    // Throws InvalidConfig on any violated field constraint.
    void validate() const;
};

// L time-domain virtual channel taps, each 2V x 2V.
struct TapSet {
    std::vector<Eigen::MatrixXcd> taps;

    int num_taps() const { return static_cast<int>(taps.size()); }
};

// Beamspace channel: column k holds the r-dimensional projected channel of
// subcarrier k.
struct BeamspaceChannel {
    Eigen::MatrixXcd matrix;  // r x K

    int rank() const { return static_cast<int>(matrix.rows()); }
    int num_subcarriers() const { return static_cast<int>(matrix.cols()); }
};

// I.i.d. CN(0, 1/L) entries, deterministic in the seed.
TapSet generate_taps(std::uint64_t seed, int l, int v);

// Per-entry DFT across taps: output k (1-based) is
// sum_l taps[l] * exp(-j 2 pi (k-1)(l-1) / K), evaluated directly.
std::vector<Eigen::MatrixXcd> taps_to_subcarriers(const TapSet& taps, int k);

// Column k = U^T H_k e_T.
BeamspaceChannel project_to_beamspace(const std::vector<Eigen::MatrixXcd>& freq_channels,
                                      const BeamspaceBasis& basis,
                                      const Eigen::VectorXcd& transmit_pattern);

// Same result as taps_to_subcarriers followed by project_to_beamspace, but
// the taps are projected to r-vectors first and the DFT runs on those, so
// the 2V x 2V subcarrier matrices are never materialized.
BeamspaceChannel beamspace_from_taps(const TapSet& taps, int k, const BeamspaceBasis& basis,
                                     const Eigen::VectorXcd& transmit_pattern);

// Per-subcarrier effective power gains g_k = |w^H hbar_k|^2.
Eigen::VectorXd effective_gain(const PatternCoder& coder_weights, const BeamspaceChannel& channel);

// Default transmit pattern: the first canonical unit vector of length 2V.
Eigen::VectorXcd canonical_transmit_pattern(int v);

}  // namespace pixelant

#endif
