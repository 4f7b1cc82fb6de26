// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems
//
// Frequency-selective Rayleigh virtual channels: i.i.d. CN(0, 1/L) taps,
// direct per-entry DFT to subcarrier responses, and beamspace projection.

#include "pixelant/channel.hpp"

#include <cmath>
#include <numbers>

#include "pixelant/rng.hpp"

namespace pixelant {

namespace {

// exp(-j 2 pi (k-1)(l-1) / K) for k, l counted from 1.
std::complex<double> dft_phase(int k, int l, int num_subcarriers) {
    const double angle =
        -2.0 * std::numbers::pi * static_cast<double>(k - 1) * static_cast<double>(l - 1) /
        static_cast<double>(num_subcarriers);
    return {std::cos(angle), std::sin(angle)};
}

void require_transmit_pattern(const Eigen::VectorXcd& transmit_pattern, Eigen::Index rows) {
    if (transmit_pattern.size() != rows)
        throw DimensionMismatch("transmit pattern length does not match the channel dimension");
    if (std::abs(transmit_pattern.norm() - 1.0) > 1e-10)
        throw InvalidConfig("transmit pattern must have unit norm");
}

}  // namespace

double OfdmConfig::snr_db() const { return 10.0 * std::log10(snr()); }

OfdmConfig OfdmConfig::with_snr_db(double snr_db) const {
    OfdmConfig out = *this;
    out.total_power = std::pow(10.0, snr_db / 10.0) * num_subcarriers * noise_power;
    return out;
}

void OfdmConfig::validate() const {
    if (num_subcarriers < 1) throw InvalidConfig("K must be at least 1");
    if (num_taps < 1 || num_taps > num_subcarriers)
        throw InvalidConfig("L must satisfy 1 <= L <= K");
    if (!(subcarrier_spacing > 0.0)) throw InvalidConfig("subcarrier spacing must be positive");
    if (!(noise_power > 0.0)) throw InvalidConfig("noise power must be positive");
    if (!(total_power > 0.0)) throw InvalidConfig("total power must be positive");
    if (!std::isfinite(center_frequency) || center_frequency < 0.0)
        throw InvalidConfig("center frequency must be finite and nonnegative");
}

TapSet generate_taps(std::uint64_t seed, int l, int v) {
    if (l < 1) throw InvalidConfig("need at least one tap");
    if (v < 1) throw InvalidConfig("need at least one spatial sample");
    Rng rng(seed);
    const int dim = 2 * v;
    const double component_sigma = std::sqrt(1.0 / (2.0 * l));
    TapSet out;
    out.taps.reserve(l);
    for (int tap = 0; tap < l; ++tap) {
        Eigen::MatrixXcd m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = rng.complex_normal(component_sigma);
        out.taps.push_back(std::move(m));
    }
    return out;
}

std::vector<Eigen::MatrixXcd> taps_to_subcarriers(const TapSet& taps, int k) {
    const int l = taps.num_taps();
    if (l == 0) throw InvalidConfig("empty tap set");
    if (l > k) throw InvalidConfig("L must not exceed K");
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(k);
    for (int sub = 1; sub <= k; ++sub) {
        Eigen::MatrixXcd acc = taps.taps[0];
        for (int tap = 2; tap <= l; ++tap) acc += taps.taps[tap - 1] * dft_phase(sub, tap, k);
        out.push_back(std::move(acc));
    }
    return out;
}

BeamspaceChannel project_to_beamspace(const std::vector<Eigen::MatrixXcd>& freq_channels,
                                      const BeamspaceBasis& basis,
                                      const Eigen::VectorXcd& transmit_pattern) {
    if (freq_channels.empty()) throw InvalidConfig("no subcarrier channels");
    require_transmit_pattern(transmit_pattern, freq_channels[0].cols());
    if (basis.left_basis.rows() != freq_channels[0].rows())
        throw DimensionMismatch("basis and channel dimensions disagree");

    BeamspaceChannel out;
    out.matrix.resize(basis.eadof, static_cast<Eigen::Index>(freq_channels.size()));
    for (std::size_t k = 0; k < freq_channels.size(); ++k) {
        if (freq_channels[k].rows() != freq_channels[0].rows() ||
            freq_channels[k].cols() != freq_channels[0].cols())
            throw DimensionMismatch("subcarrier channel matrices differ in shape");
        out.matrix.col(static_cast<Eigen::Index>(k)) =
            basis.left_basis.transpose() * (freq_channels[k] * transmit_pattern);
    }
    return out;
}

BeamspaceChannel beamspace_from_taps(const TapSet& taps, int k, const BeamspaceBasis& basis,
                                     const Eigen::VectorXcd& transmit_pattern) {
    const int l = taps.num_taps();
    if (l == 0) throw InvalidConfig("empty tap set");
    if (l > k) throw InvalidConfig("L must not exceed K");
    require_transmit_pattern(transmit_pattern, taps.taps[0].cols());
    if (basis.left_basis.rows() != taps.taps[0].rows())
        throw DimensionMismatch("basis and tap dimensions disagree");

    // Project each tap first; the DFT then runs over r-vectors.
    Eigen::MatrixXcd projected(basis.eadof, l);
    for (int tap = 0; tap < l; ++tap)
        projected.col(tap) = basis.left_basis.transpose() * (taps.taps[tap] * transmit_pattern);

    BeamspaceChannel out;
    out.matrix.resize(basis.eadof, k);
    for (int sub = 1; sub <= k; ++sub) {
        Eigen::VectorXcd acc = projected.col(0);
        for (int tap = 2; tap <= l; ++tap) acc += projected.col(tap - 1) * dft_phase(sub, tap, k);
        out.matrix.col(sub - 1) = acc;
    }
    return out;
}

Eigen::VectorXd effective_gain(const PatternCoder& coder_weights, const BeamspaceChannel& channel) {
    if (coder_weights.weights.size() != channel.matrix.rows())
        throw DimensionMismatch("pattern coder and channel rank disagree");
    return (coder_weights.weights.adjoint() * channel.matrix).cwiseAbs2().transpose();
}

Eigen::VectorXcd canonical_transmit_pattern(int v) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(2 * v);
    e(0) = {1.0, 0.0};
    return e;
}

}  // namespace pixelant
