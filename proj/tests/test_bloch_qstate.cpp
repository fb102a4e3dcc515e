#include <doctest.h>

#include <cmath>

#include "qd/montecarlo.hpp"
#include "qd/qstate.hpp"
#include "test_helpers.hpp"

using namespace qd;
using qdtest::bell_phi_plus;
using qdtest::max_abs_diff;

namespace {

BlochTensor diag2(double d1, double d2, double d3) {
    BlochTensor n(2);
    n.set_coeff(5, d1);  // xx
    n.set_coeff(10, d2); // yy
    n.set_coeff(15, d3); // zz
    return n;
}

} // namespace

TEST_CASE("pauli word string round trip") {
    CHECK(index_to_string(5, 2) == "11");
    CHECK(index_to_string(15, 2) == "33");
    CHECK(index_from_string("203", 3) == 0x23); // 2*16 + 0*4 + 3
    CHECK_THROWS_AS(index_from_string("12", 3), argument_error);
    CHECK_THROWS_AS(index_from_string("4", 1), argument_error);
}

TEST_CASE("bloch tensor basics") {
    BlochTensor n(2);
    CHECK(n.size() == 16);
    CHECK_THROWS_AS(n.set_coeff(0, 1.0), argument_error);
    CHECK_THROWS_AS(n.coeff(0), argument_error);
    n.set_coeff(5, 0.5);
    CHECK(n.coeff(5) == 0.5);
    CHECK(n.sum_squares() == doctest::Approx(0.25));
    CHECK(n.is_restricted());
    n.set_coeff(4, 0.1); // word "10": identity on qubit 1
    CHECK(!n.is_restricted());
}

TEST_CASE("bloch_from_density on reference states") {
    SUBCASE("maximally mixed") {
        const auto rho = DensityMatrix::from_matrix(2, Eigen::MatrixXcd::Identity(4, 4) / 4.0);
        const BlochTensor n = bloch_from_density(rho);
        for (std::size_t a = 1; a < n.size(); ++a) CHECK(n.raw()[a] == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("bell state") {
        const auto rho = DensityMatrix::from_matrix(2, bell_phi_plus());
        const BlochTensor n = bloch_from_density(rho);
        CHECK(n.coeff(5) == doctest::Approx(1.0));   // xx
        CHECK(n.coeff(10) == doctest::Approx(-1.0)); // yy
        CHECK(n.coeff(15) == doctest::Approx(1.0));  // zz
        double off = 0.0;
        for (std::size_t a = 1; a < n.size(); ++a)
            if (a != 5 && a != 10 && a != 15) off = std::max(off, std::abs(n.raw()[a]));
        CHECK(off <= 1e-13);
    }
    SUBCASE("single qubit |0><0|") {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        m(0, 0) = 1.0;
        const BlochTensor n = bloch_from_density(DensityMatrix::from_matrix(1, m));
        CHECK(n.coeff(3) == doctest::Approx(1.0));
        CHECK(n.coeff(1) == doctest::Approx(0.0));
        CHECK(n.coeff(2) == doctest::Approx(0.0));
    }
    SUBCASE("non-hermitian input is rejected") {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        m(0, 1) = 1.0;
        m(0, 0) = m(1, 1) = 0.5;
        CHECK_THROWS_AS(DensityMatrix::from_matrix(1, m), invalid_state_error);
    }
}

TEST_CASE("density_from_bloch reference values and round trip") {
    SUBCASE("zero tensor gives the maximally mixed state") {
        const DensityMatrix rho = density_from_bloch(BlochTensor(3));
        CHECK(max_abs_diff(rho.matrix(), Eigen::MatrixXcd::Identity(8, 8) / 8.0) <= 1e-15);
    }
    SUBCASE("(1,-1,1) reconstructs the bell projector") {
        const DensityMatrix rho = density_from_bloch(diag2(1.0, -1.0, 1.0));
        CHECK(max_abs_diff(rho.matrix(), bell_phi_plus()) <= 1e-14);
        const auto lam = rho.eigenvalues();
        CHECK(lam.back() == doctest::Approx(1.0));
        CHECK(std::abs(lam.front()) <= 1e-12);
    }
    SUBCASE("round trip on random tensors") {
        Rng rng(11);
        for (int n_qubits = 1; n_qubits <= 3; ++n_qubits) {
            for (int rep = 0; rep < 350; ++rep) {
                const BlochTensor n = qdtest::random_general_tensor(n_qubits, rng);
                const BlochTensor back = bloch_from_density(density_from_bloch(n));
                double dev = 0.0;
                for (std::size_t a = 1; a < n.size(); ++a)
                    dev = std::max(dev, std::abs(n.raw()[a] - back.raw()[a]));
                REQUIRE(dev <= 1e-12);
            }
        }
    }
}

TEST_CASE("physicality on diagonal two-qubit states") {
    {
        const auto [ok, lam] = physicality(BlochTensor(2));
        CHECK(ok);
        CHECK(lam == doctest::Approx(0.25));
    }
    {
        const auto [ok, lam] = physicality(diag2(1.0, 1.0, 1.0));
        CHECK(!ok);
        CHECK(lam == doctest::Approx(-0.5));
    }
    {
        const auto [ok, lam] = physicality(diag2(0.5, 0.3, 0.2));
        CHECK(ok);
        CHECK(lam >= -1e-12);
    }
}

TEST_CASE("marginals") {
    SUBCASE("single-qubit marginals of restricted states are maximally mixed") {
        Rng rng(7);
        for (int rep = 0; rep < 20; ++rep) {
            const BlochTensor n = qdtest::random_physical_restricted(3, rng);
            const DensityMatrix rho = density_from_bloch(n);
            for (int q = 0; q < 3; ++q) {
                const DensityMatrix m = marginal(rho, {q});
                CHECK(max_abs_diff(m.matrix(), Eigen::MatrixXcd::Identity(2, 2) / 2.0) <= 1e-12);
            }
        }
    }
    SUBCASE("product state marginal") {
        Rng rng(8);
        const Eigen::MatrixXcd r1 = qdtest::random_density_matrix(1, rng);
        const Eigen::MatrixXcd r2 = qdtest::random_density_matrix(1, rng);
        Eigen::MatrixXcd prod(4, 4);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) prod.block(2 * a, 2 * b, 2, 2) = r1(a, b) * r2;
        const DensityMatrix rho = DensityMatrix::from_matrix(2, prod);
        CHECK(max_abs_diff(marginal(rho, {0}).matrix(), r1) <= 1e-12);
        CHECK(max_abs_diff(marginal(rho, {1}).matrix(), r2) <= 1e-12);
    }
    SUBCASE("bell marginal is maximally mixed") {
        const DensityMatrix rho = DensityMatrix::from_matrix(2, bell_phi_plus());
        CHECK(max_abs_diff(marginal(rho, {1}).matrix(), Eigen::MatrixXcd::Identity(2, 2) / 2.0) <=
              1e-14);
    }
    SUBCASE("empty keep set is an error") {
        const DensityMatrix rho = DensityMatrix::from_matrix(2, bell_phi_plus());
        CHECK_THROWS_AS(marginal(rho, {}), argument_error);
    }
}

TEST_CASE("von neumann entropy") {
    SUBCASE("pure state") {
        CHECK(von_neumann_entropy(DensityMatrix::from_matrix(2, bell_phi_plus())) ==
              doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("maximally mixed") {
        const auto rho = DensityMatrix::from_matrix(2, Eigen::MatrixXcd::Identity(4, 4) / 4.0);
        CHECK(von_neumann_entropy(rho) == doctest::Approx(2.0));
    }
    SUBCASE("werner mixture against its eigenvalue spectrum") {
        const Eigen::MatrixXcd m = 0.5 * bell_phi_plus() + 0.125 * Eigen::MatrixXcd::Identity(4, 4);
        const auto rho = DensityMatrix::from_matrix(2, m);
        // eigenvalues are 5/8 and a triple 1/8
        double expected = 0.0;
        for (const double lam : {5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0})
            expected -= lam * std::log2(lam);
        CHECK(von_neumann_entropy(rho) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("rejects states with a clearly negative spectrum") {
        const DensityMatrix bad = density_from_bloch(diag2(1.0, 1.0, 1.0));
        CHECK_THROWS_AS(von_neumann_entropy(bad), invalid_state_error);
    }
    SUBCASE("invariant under local rotations of the bloch coefficients") {
        Rng rng(21);
        for (int rep = 0; rep < 25; ++rep) {
            const BlochTensor n = qdtest::random_physical_restricted(2, rng);
            BlochTensor rot = rotate_site(n, 0, sample_rotation(rng));
            rot = rotate_site(rot, 1, sample_rotation(rng));
            const double s0 = von_neumann_entropy(density_from_bloch(n));
            const double s1 = von_neumann_entropy(density_from_bloch(rot));
            CHECK(s0 == doctest::Approx(s1).epsilon(1e-10));
        }
    }
}

TEST_CASE("mutual information") {
    SUBCASE("product of single-qubit states") {
        Rng rng(9);
        const Eigen::MatrixXcd r1 = qdtest::random_density_matrix(1, rng);
        const Eigen::MatrixXcd r2 = qdtest::random_density_matrix(1, rng);
        Eigen::MatrixXcd prod(4, 4);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) prod.block(2 * a, 2 * b, 2, 2) = r1(a, b) * r2;
        CHECK(mutual_information(DensityMatrix::from_matrix(2, prod)) ==
              doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("bell state") {
        CHECK(mutual_information(DensityMatrix::from_matrix(2, bell_phi_plus())) ==
              doctest::Approx(2.0));
    }
    SUBCASE("restricted states satisfy I = N - S") {
        Rng rng(10);
        for (int rep = 0; rep < 10; ++rep) {
            const BlochTensor n = qdtest::random_physical_restricted(3, rng);
            const DensityMatrix rho = density_from_bloch(n);
            CHECK(mutual_information(rho) ==
                  doctest::Approx(3.0 - von_neumann_entropy(rho)).epsilon(1e-10));
        }
    }
}

TEST_CASE("apply_measurement") {
    SUBCASE("state already diagonal in the frame is unchanged") {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
        m.diagonal() << 0.4, 0.3, 0.2, 0.1;
        const DensityMatrix rho = DensityMatrix::from_matrix(2, m);
        MeasurementFrame f{{Vec3{0, 0, 1}, Vec3{0, 0, 1}}};
        CHECK(max_abs_diff(apply_measurement(rho, f).matrix(), m) <= 1e-13);
    }
    SUBCASE("bell state measured along z on both qubits") {
        const DensityMatrix rho = DensityMatrix::from_matrix(2, bell_phi_plus());
        MeasurementFrame f{{Vec3{0, 0, 1}, Vec3{0, 0, 1}}};
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
        expected(0, 0) = expected(3, 3) = 0.5;
        CHECK(max_abs_diff(apply_measurement(rho, f).matrix(), expected) <= 1e-13);
    }
    SUBCASE("spectrum of the measured state matches the closed form") {
        Rng rng(12);
        for (int n_qubits = 2; n_qubits <= 3; ++n_qubits) {
            for (int rep = 0; rep < 30; ++rep) {
                const BlochTensor n = qdtest::random_physical_restricted(n_qubits, rng);
                const MeasurementFrame f = qdtest::random_frame(n_qubits, rng);
                const auto spec = post_measurement_spectrum(n, f);
                const DensityMatrix measured = apply_measurement(density_from_bloch(n), f);
                const auto lam = measured.eigenvalues(); // ascending
                const long half = spec.degeneracy;
                REQUIRE(static_cast<long>(lam.size()) == 2 * half);
                for (long i = 0; i < half; ++i) {
                    CHECK(std::abs(lam[static_cast<std::size_t>(i)] -
                                   std::min(spec.lambda_plus, spec.lambda_minus)) <= 1e-10);
                    CHECK(std::abs(lam[static_cast<std::size_t>(half + i)] -
                                   std::max(spec.lambda_plus, spec.lambda_minus)) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("post_measurement_spectrum") {
    SUBCASE("zero tensor gives a flat spectrum") {
        MeasurementFrame f{{Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0, 1, 0}}};
        const auto s = post_measurement_spectrum(BlochTensor(3), f);
        CHECK(s.lambda_plus == doctest::Approx(0.125));
        CHECK(s.lambda_minus == doctest::Approx(0.125));
        CHECK(s.degeneracy == 4);
    }
    SUBCASE("bell tensor along z") {
        MeasurementFrame f{{Vec3{0, 0, 1}, Vec3{0, 0, 1}}};
        const auto s = post_measurement_spectrum(diag2(1.0, -1.0, 1.0), f);
        CHECK(s.lambda_plus == doctest::Approx(0.5));
        CHECK(s.lambda_minus == doctest::Approx(0.0));
        CHECK(s.degeneracy == 2);
    }
    SUBCASE("non-restricted tensors are rejected") {
        BlochTensor n(2);
        n.set_coeff(4, 0.2);
        MeasurementFrame f{{Vec3{0, 0, 1}, Vec3{0, 0, 1}}};
        CHECK_THROWS_AS(post_measurement_spectrum(n, f), precondition_error);
    }
}

TEST_CASE("make_physical shrinks onto the physical set") {
    Rng rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        const BlochTensor raw = qdtest::random_restricted_tensor(3, rng, 1.5);
        double t = 0.0;
        const BlochTensor phys = make_physical(raw, &t);
        CHECK(t > 0.0);
        CHECK(t <= 1.0);
        CHECK(physicality(phys).first);
        CHECK(phys.is_restricted());
        // the shrink is a uniform scale of the coefficients
        for (std::size_t a = 1; a < raw.size(); ++a)
            CHECK(phys.raw()[a] == doctest::Approx(t * raw.raw()[a]).epsilon(1e-12));
    }
}
