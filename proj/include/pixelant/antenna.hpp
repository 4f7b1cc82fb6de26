// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_ANTENNA_HPP
#define PIXELANT_ANTENNA_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pixelant/coder.hpp"
#include "pixelant/errors.hpp"

namespace pixelant {

// Calibration record carried with synthetic models so a file is
// self-describing: which knee the spectrum was shaped for and the
// geometric decay ratio the calibration solved for.
struct AntennaCalibration {
    int target_eadof = 0;
    double knee_threshold = 0.0;   // cumulative-energy fraction the knee is placed at
    double head_ratio = 0.0;       // geometric ratio of the leading squared singular values
    double head_energy_share = 0.0;  // head energy / total energy actually realized
};

// (Q+1)-port network model of a pixel antenna. Port 0 is the driven antenna
// port; ports 1..Q are the parasitic pixel ports closed or opened by the
// switches. Immutable in normal use; all member matrices are dense.
struct PixelAntennaModel {
    int num_switches = 0;  // Q
    int num_angles = 0;    // V; patterns stack theta and phi components, 2V rows
    std::uint64_t seed = 0;
    AntennaCalibration calibration;
    Eigen::MatrixXcd impedance;             // (Q+1) x (Q+1), ohms
    Eigen::MatrixXcd open_circuit_patterns;  // 2V x (Q+1)

    // Views of the impedance blocks [z_AA, z_AP; z_PA, Z_PP].
    std::complex<double> z_AA() const { return impedance(0, 0); }
    Eigen::VectorXcd z_PA() const { return impedance.block(1, 0, num_switches, 1); }
    Eigen::MatrixXcd Z_PP() const { return impedance.block(1, 1, num_switches, num_switches); }
};

struct PortCurrents {
    std::complex<double> antenna_current{1.0, 0.0};
    Eigen::VectorXcd pixel_currents;

    // The full (Q+1)-port current vector [i_A; i_P].
    Eigen::VectorXcd stacked() const {
        Eigen::VectorXcd v(pixel_currents.size() + 1);
        v(0) = antenna_current;
        v.tail(pixel_currents.size()) = pixel_currents;
        return v;
    }
};

struct BeamspaceBasis {
    Eigen::MatrixXcd left_basis;      // U, 2V x r, orthonormal columns
    Eigen::VectorXd singular_values;  // length r, positive, non-increasing
    Eigen::MatrixXcd right_basis;     // V factor, (Q+1) x r, orthonormal columns
    int eadof = 0;                    // r
    double energy_fraction = 0.0;     // fraction of total pattern energy captured
};

struct PatternCoder {
    Eigen::VectorXcd weights;  // length r, unit norm
};

// Reciprocal-of-condition threshold below which a restricted impedance
// solve is rejected as numerically singular.
inline constexpr double kConditionFloor = 1e-12;

// Minimum eigenvalue required of Re(Z) for a model to count as passive
// with margin; also the diagonal loading used by the synthetic generator.
inline constexpr double kPassivityFloor = 1.0;

// Switch-state port elimination: open ports carry no current, shorted ports
// solve the restricted system Z_PP[S,S] i_S = -z_PA[S] with unit drive.
PortCurrents compute_port_currents(const PixelAntennaModel& model, const AntennaCoder& coder);

// Coded radiation pattern e(b) = E_oc [1; i_P], normalized to unit l2 norm.
Eigen::VectorXcd synthesize_pattern(const PixelAntennaModel& model, const AntennaCoder& coder);

// Truncated SVD of the open-circuit pattern matrix. r is the smallest rank
// whose cumulative squared singular values reach energy_threshold of the
// total; singular values at the numerical-rank floor are never included.
BeamspaceBasis compute_basis(const PixelAntennaModel& model, double energy_threshold);

// Pattern coder w(b): the coded pattern expressed in the left singular
// basis, w = S V^T conj([1; i_P]) normalized. e(b) = U conj(w) up to the
// truncation residual.
PatternCoder compute_pattern_coder(const BeamspaceBasis& basis, const PortCurrents& currents);

// Deterministic synthetic antenna with reciprocity and passivity by
// construction and a singular-value spectrum calibrated so the cumulative
// 99.8% energy knee of E_oc lands exactly at target_eadof.
PixelAntennaModel generate_synthetic_antenna(std::uint64_t seed, int q, int v, int target_eadof);

// Checks every structural invariant of a model; returns human-readable
// violation messages (empty when the model is valid).
std::vector<std::string> check_antenna_model(const PixelAntennaModel& model,
                                             double passivity_floor = kPassivityFloor);

// Port-current solver specialized for enumerating every switch setting of
// one contiguous bit block while all other bits stay frozen. The frozen
// shorted ports are factorized once; each candidate then costs only a
// Schur-complement solve of the block's shorted subset. Results match
// compute_port_currents exactly up to floating-point solver order.
class BlockPortSolver {
   public:
    BlockPortSolver(const PixelAntennaModel& model, const AntennaCoder& base,
                    std::size_t block_start, std::size_t block_len);

    // coder must agree with the base coder outside the block.
    PortCurrents currents(const AntennaCoder& coder) const;

   private:
    const PixelAntennaModel* model_;
    std::size_t block_start_;
    std::size_t block_len_;
    std::vector<int> outside_shorted_;       // frozen shorted port indices
    Eigen::VectorXcd base_solution_;         // A^{-1} u over outside_shorted_
    Eigen::MatrixXcd coupling_;              // A^{-1} Z_PP[S_out, B]
    Eigen::MatrixXcd block_schur_;           // Z_PP[B, S_out] A^{-1} Z_PP[S_out, B]
    Eigen::VectorXcd block_offset_;          // Z_PP[B, S_out] A^{-1} u
    Eigen::MatrixXcd block_impedance_;       // Z_PP[B, B]
    Eigen::VectorXcd block_drive_;           // -z_PA[B]
};

}  // namespace pixelant

#endif
