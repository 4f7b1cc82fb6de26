// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "pixelant/antenna.hpp"
#include "pixelant/rng.hpp"

using namespace pixelant;

namespace {

// Independent port-current oracle: model the switches as lumped loads
// (0 ohm closed, z_load ohm open) and solve the full unreduced system
// (Z_PP + diag(loads)) i_P = -z_PA with unit drive. As z_load grows this
// converges to the ideal open-circuit elimination.
Eigen::VectorXcd finite_load_currents(const PixelAntennaModel& model, const AntennaCoder& coder,
                                      double z_load) {
    const int q = model.num_switches;
    Eigen::MatrixXcd sys = model.Z_PP();
    for (int i = 0; i < q; ++i)
        if (coder.bit(i) == 1) sys(i, i) += z_load;
    return sys.colPivHouseholderQr().solve(Eigen::VectorXcd(-model.z_PA()));
}

bool contains(const std::vector<std::string>& messages, const std::string& needle) {
    return std::any_of(messages.begin(), messages.end(), [&](const std::string& m) {
        return m.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_CASE("port currents agree with a finite-load oracle") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const PixelAntennaModel model = generate_synthetic_antenna(seed, 6, 12, 4);
        for (std::uint64_t idx = 0; idx < 64; ++idx) {
            const AntennaCoder coder = AntennaCoder::from_index(idx, 6);
            const PortCurrents currents = compute_port_currents(model, coder);
            REQUIRE(currents.pixel_currents.size() == 6);
            CHECK(currents.antenna_current == std::complex<double>(1.0, 0.0));

            // Open switches must carry exactly zero current in the reduced solve.
            for (int i = 0; i < 6; ++i)
                if (coder.bit(i) == 1) CHECK(currents.pixel_currents(i) == 0.0);

            const Eigen::VectorXcd oracle = finite_load_currents(model, coder, 1e9);
            const double scale = std::max(1.0, oracle.norm());
            CHECK((currents.pixel_currents - oracle).norm() <= 1e-6 * scale);
        }
    }
}

TEST_CASE("finite-load currents converge to the eliminated-port solution") {
    const PixelAntennaModel model = generate_synthetic_antenna(11, 6, 12, 4);
    const AntennaCoder coder = AntennaCoder::from_string("010110");
    const PortCurrents exact = compute_port_currents(model, coder);

    double previous = std::numeric_limits<double>::infinity();
    for (int t : {6, 8, 10}) {
        const Eigen::VectorXcd approx = finite_load_currents(model, coder, std::pow(10.0, t));
        const double rel =
            (approx - exact.pixel_currents).norm() / std::max(1.0, exact.pixel_currents.norm());
        // Error falls like 1/z_load; the envelope leaves two orders of slack.
        CHECK(rel <= 10.0 * std::pow(10.0, -t + 6));
        CHECK(rel < previous);
        previous = rel;
    }
}

TEST_CASE("coder length must match the switch count") {
    const PixelAntennaModel model = generate_synthetic_antenna(9, 5, 10, 3);
    CHECK_THROWS_AS(compute_port_currents(model, AntennaCoder::zeros(4)), DimensionMismatch);
    CHECK_THROWS_AS(synthesize_pattern(model, AntennaCoder::zeros(6)), DimensionMismatch);
}

TEST_CASE("synthesized patterns compose pattern matrix and currents") {
    const PixelAntennaModel model = generate_synthetic_antenna(4, 6, 12, 4);
    for (std::uint64_t idx : {0ull, 9ull, 33ull, 63ull}) {
        const AntennaCoder coder = AntennaCoder::from_index(idx, 6);
        const Eigen::VectorXcd pattern = synthesize_pattern(model, coder);
        CHECK(pattern.size() == 2 * model.num_angles);
        CHECK(pattern.norm() == doctest::Approx(1.0).epsilon(1e-12));

        Eigen::VectorXcd stacked(7);
        stacked(0) = 1.0;
        stacked.tail(6) = finite_load_currents(model, coder, 1e9);
        Eigen::VectorXcd oracle = model.open_circuit_patterns * stacked;
        oracle /= oracle.norm();
        CHECK((pattern - oracle).norm() <= 1e-6);
    }
}

TEST_CASE("beamspace basis matches an independent singular value decomposition") {
    const PixelAntennaModel model = generate_synthetic_antenna(21, 8, 16, 5);
    const BeamspaceBasis basis = compute_basis(model, 0.998);
    const int r = basis.eadof;
    REQUIRE(r >= 1);
    REQUIRE(basis.left_basis.cols() == r);
    REQUIRE(basis.right_basis.cols() == r);
    REQUIRE(basis.singular_values.size() == r);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(model.open_circuit_patterns);
    const Eigen::VectorXd all = svd.singularValues();

    for (int i = 0; i < r; ++i) {
        CHECK(basis.singular_values(i) ==
              doctest::Approx(all(i)).epsilon(1e-9));
        if (i > 0) CHECK(basis.singular_values(i) <= basis.singular_values(i - 1));
        CHECK(basis.singular_values(i) > 0.0);
    }

    // r is the smallest rank reaching the energy threshold.
    const double total = all.squaredNorm();
    double head = 0.0;
    for (int i = 0; i < r - 1; ++i) head += all(i) * all(i);
    CHECK(head / total < 0.998);
    head += all(r - 1) * all(r - 1);
    CHECK(head / total >= 0.998 - 1e-12);
    CHECK(basis.energy_fraction == doctest::Approx(head / total).epsilon(1e-9));

    // Orthonormal factors.
    const Eigen::MatrixXcd ugram = basis.left_basis.adjoint() * basis.left_basis;
    const Eigen::MatrixXcd vgram = basis.right_basis.adjoint() * basis.right_basis;
    CHECK((ugram - Eigen::MatrixXcd::Identity(r, r)).norm() <= 1e-10);
    CHECK((vgram - Eigen::MatrixXcd::Identity(r, r)).norm() <= 1e-10);

    CHECK_THROWS_AS(compute_basis(model, 0.0), InvalidConfig);
    CHECK_THROWS_AS(compute_basis(model, 1.5), InvalidConfig);
}

TEST_CASE("pattern coder reconstructs the coded pattern up to truncation") {
    const PixelAntennaModel model = generate_synthetic_antenna(33, 8, 16, 4);
    const BeamspaceBasis basis = compute_basis(model, 0.998);
    const int r = basis.eadof;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(model.open_circuit_patterns);
    const double sigma_tail = svd.singularValues().size() > r ? svd.singularValues()(r) : 0.0;

    for (std::uint64_t idx : {0ull, 7ull, 100ull, 255ull}) {
        const AntennaCoder coder = AntennaCoder::from_index(idx, 8);
        const PortCurrents currents = compute_port_currents(model, coder);
        const PatternCoder w = compute_pattern_coder(basis, currents);
        CHECK(w.weights.size() == r);
        CHECK(w.weights.norm() == doctest::Approx(1.0).epsilon(1e-12));

        // E x = U conj(w_raw) + residual with residual norm at most
        // sigma_{r+1} ||x||; w_raw is the unnormalized weight vector.
        const Eigen::VectorXcd x = currents.stacked();
        const Eigen::VectorXcd raw =
            basis.singular_values.cast<std::complex<double>>().cwiseProduct(
                basis.right_basis.transpose() * x.conjugate());
        const Eigen::VectorXcd reconstructed = basis.left_basis * raw.conjugate();
        const double residual = (model.open_circuit_patterns * x - reconstructed).norm();
        CHECK(residual <= sigma_tail * x.norm() * (1.0 + 1e-9) + 1e-12);

        // The normalized weights are raw up to its scalar norm.
        CHECK((w.weights * raw.norm() - raw).norm() <= 1e-12 * raw.norm());
    }

    PortCurrents short_currents;
    short_currents.pixel_currents = Eigen::VectorXcd::Zero(3);
    CHECK_THROWS_AS(compute_pattern_coder(basis, short_currents), DimensionMismatch);
}

TEST_CASE("synthetic spectrum places the energy knee at the target") {
    const PixelAntennaModel model = generate_synthetic_antenna(1, 39, 72, 7);
    CHECK(model.num_switches == 39);
    CHECK(model.num_angles == 72);
    CHECK(model.calibration.target_eadof == 7);
    CHECK(model.calibration.knee_threshold == doctest::Approx(0.998));
    CHECK(model.calibration.head_ratio > 0.0);
    CHECK(model.calibration.head_ratio < 1.0);

    const BeamspaceBasis basis = compute_basis(model, 0.998);
    CHECK(basis.eadof == 7);
    CHECK(basis.energy_fraction >= 0.998);

    // Independent knee check on the full spectrum.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(model.open_circuit_patterns);
    const Eigen::VectorXd sv = svd.singularValues();
    const double total = sv.squaredNorm();
    double cum = 0.0;
    int knee = 0;
    for (int i = 0; i < sv.size(); ++i) {
        cum += sv(i) * sv(i);
        if (cum / total >= 0.998) {
            knee = i + 1;
            break;
        }
    }
    CHECK(knee == 7);

    for (int t : {2, 3, 5}) {
        CHECK(compute_basis(generate_synthetic_antenna(5, 10, 24, t), 0.998).eadof == t);
    }
}

TEST_CASE("synthetic models satisfy every structural invariant") {
    for (std::uint64_t seed : {1ull, 17ull, 123456789ull}) {
        const PixelAntennaModel model = generate_synthetic_antenna(seed, 8, 16, 4);
        CHECK(check_antenna_model(model).empty());
    }
}

TEST_CASE("synthetic generation is deterministic in the seed") {
    const PixelAntennaModel a = generate_synthetic_antenna(42, 7, 14, 4);
    const PixelAntennaModel b = generate_synthetic_antenna(42, 7, 14, 4);
    CHECK((a.impedance.array() == b.impedance.array()).all());
    CHECK((a.open_circuit_patterns.array() == b.open_circuit_patterns.array()).all());
    CHECK(a.calibration.head_ratio == b.calibration.head_ratio);

    const PixelAntennaModel c = generate_synthetic_antenna(43, 7, 14, 4);
    CHECK(!(a.impedance.array() == c.impedance.array()).all());
}

TEST_CASE("synthetic generation rejects infeasible parameters") {
    CHECK_THROWS_AS(generate_synthetic_antenna(1, 0, 8, 2), InvalidConfig);
    CHECK_THROWS_AS(generate_synthetic_antenna(1, 4, 0, 2), InvalidConfig);
    CHECK_THROWS_AS(generate_synthetic_antenna(1, 4, 8, 0), InvalidConfig);
    // EADoF cannot exceed min(2V, Q+1).
    CHECK_THROWS_AS(generate_synthetic_antenna(1, 4, 8, 6), InvalidConfig);
    CHECK_THROWS_AS(generate_synthetic_antenna(1, 8, 2, 5), InvalidConfig);
}

TEST_CASE("model checks flag corrupted structure") {
    PixelAntennaModel model = generate_synthetic_antenna(3, 5, 10, 3);
    REQUIRE(check_antenna_model(model).empty());

    SUBCASE("asymmetric impedance") {
        model.impedance(1, 2) += std::complex<double>(1.0, 0.0);
        CHECK(contains(check_antenna_model(model), "reciprocity"));
    }
    SUBCASE("active network") {
        model.impedance -= Eigen::MatrixXcd::Identity(6, 6) * std::complex<double>(1000.0, 0.0);
        CHECK(contains(check_antenna_model(model), "passivity"));
    }
    SUBCASE("non-finite entries") {
        model.impedance(0, 0) = std::nan("");
        CHECK(contains(check_antenna_model(model), "non-finite"));
        model = generate_synthetic_antenna(3, 5, 10, 3);
        model.open_circuit_patterns(1, 1) = std::complex<double>(0.0, std::nan(""));
        CHECK(contains(check_antenna_model(model), "non-finite"));
    }
    SUBCASE("wrong shapes") {
        model.impedance.conservativeResize(5, 6);
        CHECK(contains(check_antenna_model(model), "impedance matrix is not"));
        model = generate_synthetic_antenna(3, 5, 10, 3);
        model.open_circuit_patterns.conservativeResize(9, 6);
        CHECK(contains(check_antenna_model(model), "pattern matrix is not"));
    }
    SUBCASE("dead pattern column") {
        model.open_circuit_patterns.col(2).setZero();
        CHECK(contains(check_antenna_model(model), "column"));
    }
}

TEST_CASE("singular restricted blocks are rejected") {
    PixelAntennaModel model;
    model.num_switches = 2;
    model.num_angles = 2;
    model.impedance = Eigen::MatrixXcd::Zero(3, 3);
    // Z_PP = [[1,1],[1,1]] is exactly singular when both switches close.
    model.impedance(0, 0) = 50.0;
    model.impedance(1, 1) = 1.0;
    model.impedance(2, 2) = 1.0;
    model.impedance(1, 2) = 1.0;
    model.impedance(2, 1) = 1.0;
    model.impedance(0, 1) = model.impedance(1, 0) = 0.5;
    model.impedance(0, 2) = model.impedance(2, 0) = 0.5;
    model.open_circuit_patterns = Eigen::MatrixXcd::Ones(4, 3);

    CHECK_THROWS_AS(compute_port_currents(model, AntennaCoder::from_string("00")),
                    SingularNetwork);
    // A single closed switch leaves a well-conditioned 1x1 block.
    CHECK_NOTHROW(compute_port_currents(model, AntennaCoder::from_string("01")));
    CHECK_NOTHROW(compute_port_currents(model, AntennaCoder::from_string("10")));
    CHECK_NOTHROW(compute_port_currents(model, AntennaCoder::from_string("11")));

    // A pattern with no energy cannot be normalized.
    model.open_circuit_patterns = Eigen::MatrixXcd::Zero(4, 3);
    CHECK_THROWS_AS(synthesize_pattern(model, AntennaCoder::from_string("11")),
                    DegeneratePattern);
}

TEST_CASE("block solver reproduces the direct port solve") {
    const PixelAntennaModel model = generate_synthetic_antenna(14, 8, 16, 5);
    Rng rng(99);

    for (int trial = 0; trial < 8; ++trial) {
        AntennaCoder base = AntennaCoder::zeros(8);
        for (int i = 0; i < 8; ++i) base.set_bit(i, rng.bernoulli(0.5) ? 1 : 0);

        for (std::size_t start = 0; start < 8; ++start) {
            for (std::size_t len = 1; len <= 4 && start + len <= 8; ++len) {
                const BlockPortSolver solver(model, base, start, len);
                for (std::uint64_t setting = 0; setting < (1ull << len); ++setting) {
                    AntennaCoder coder = base;
                    for (std::size_t j = 0; j < len; ++j)
                        coder.set_bit(start + j, static_cast<std::uint8_t>((setting >> j) & 1u));
                    const PortCurrents fast = solver.currents(coder);
                    const PortCurrents direct = compute_port_currents(model, coder);
                    const double scale = std::max(1.0, direct.stacked().norm());
                    CHECK((fast.stacked() - direct.stacked()).norm() <= 1e-10 * scale);
                }
            }
        }
    }

    SUBCASE("whole-coder block") {
        const BlockPortSolver solver(model, AntennaCoder::zeros(8), 0, 8);
        for (std::uint64_t idx : {0ull, 17ull, 255ull}) {
            const AntennaCoder coder = AntennaCoder::from_index(idx, 8);
            const PortCurrents fast = solver.currents(coder);
            const PortCurrents direct = compute_port_currents(model, coder);
            CHECK((fast.stacked() - direct.stacked()).norm() <=
                  1e-10 * std::max(1.0, direct.stacked().norm()));
        }
    }

    SUBCASE("all-open base leaves no frozen shorted ports") {
        const BlockPortSolver solver(model, AntennaCoder::ones(8), 2, 3);
        AntennaCoder coder = AntennaCoder::ones(8);
        coder.set_bit(3, 0);
        const PortCurrents fast = solver.currents(coder);
        const PortCurrents direct = compute_port_currents(model, coder);
        CHECK((fast.stacked() - direct.stacked()).norm() <= 1e-10);
    }

    SUBCASE("invalid blocks are rejected") {
        CHECK_THROWS_AS(BlockPortSolver(model, AntennaCoder::zeros(8), 6, 4), InvalidConfig);
    }
}
