#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qd/bloch.hpp"
#include "qd/montecarlo.hpp"
#include "qd/qstate.hpp"
#include "qd/rng.hpp"

namespace qdtest {

inline qd::BlochTensor random_general_tensor(int n_qubits, qd::Rng& rng, double amp = 1.0) {
    qd::BlochTensor n(n_qubits);
    for (std::size_t a = 1; a < n.size(); ++a) n.set_coeff(a, rng.uniform(-amp, amp));
    return n;
}

inline qd::BlochTensor random_restricted_tensor(int n_qubits, qd::Rng& rng, double amp = 1.0) {
    std::vector<double> cube(qd::pow3(n_qubits));
    for (double& x : cube) x = rng.uniform(-amp, amp);
    return qd::BlochTensor::from_cube(n_qubits, cube);
}

inline qd::BlochTensor random_physical_restricted(int n_qubits, qd::Rng& rng,
                                                  double* shrink = nullptr) {
    return qd::make_physical(random_restricted_tensor(n_qubits, rng), shrink);
}

inline Eigen::MatrixXcd random_density_matrix(int n_qubits, qd::Rng& rng) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd g(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            g(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint().eval()); // scrub rounding asymmetry
    return rho;
}

inline qd::MeasurementFrame random_frame(int n_sites, qd::Rng& rng) {
    qd::MeasurementFrame f;
    for (int i = 0; i < n_sites; ++i) f.axes.push_back(rng.unit_vector());
    return f;
}

inline qd::Mat3 mat3_from_eigen(const Eigen::Matrix3d& m) {
    qd::Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

inline Eigen::Matrix3d eigen_from_mat3(const qd::Mat3& m) {
    Eigen::Matrix3d out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

// |Phi+> = (|00> + |11>)/sqrt(2)
inline Eigen::MatrixXcd bell_phi_plus() {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
    return rho;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace qdtest
