#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qd/bloch.hpp"
#include "qd/errors.hpp"

namespace qd {

// Density operator of an N-qubit register. Hermiticity and unit trace are
// enforced on construction from raw matrices; positivity is the caller's
// concern (density_from_bloch legitimately produces indefinite matrices,
// see physicality()).
class DensityMatrix {
public:
    DensityMatrix() = default;

    static DensityMatrix from_matrix(int n_qubits, Eigen::MatrixXcd m);

    // Trusted constructor for matrices Hermitian by construction.
    static DensityMatrix unchecked(int n_qubits, Eigen::MatrixXcd m);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return m_.rows(); }
    const Eigen::MatrixXcd& matrix() const { return m_; }

    std::vector<double> eigenvalues() const; // ascending
    double min_eigenvalue() const;

private:
    int n_qubits_ = 0;
    Eigen::MatrixXcd m_;
};

// n_a = Tr(rho O_a) over all non-identity Pauli words. The traces of a
// Hermitian matrix against Hermitian words are real; residual imaginary
// parts above 1e-12 indicate a broken input.
BlochTensor bloch_from_density(const DensityMatrix& rho);

// rho = 2^-N (I + sum_a n_a O_a). Exact inverse of bloch_from_density.
DensityMatrix density_from_bloch(const BlochTensor& n);

// Smallest eigenvalue of the reconstructed density matrix and whether it
// clears the -1e-10 tolerance.
std::pair<bool, double> physicality(const BlochTensor& n);

// Partial trace onto the kept qubits (0-based, qubit 0 = most significant).
DensityMatrix marginal(const DensityMatrix& rho, const std::vector<int>& keep);

double von_neumann_entropy(const DensityMatrix& rho); // bits

// sum_i S(rho_i) - S(rho); equals N - S(rho) on the restricted subspace.
double mutual_information(const DensityMatrix& rho);

// Full local projective measurement: sum over the 2^N product projectors
// built from the frame. Result is diagonal in the frame product basis.
DensityMatrix apply_measurement(const DensityMatrix& rho, const MeasurementFrame& frame);

struct PostMeasurementSpectrum {
    double lambda_plus;
    double lambda_minus;
    long degeneracy; // 2^(N-1) for each eigenvalue
};

// Closed-form spectrum of the measured state for restricted tensors:
// 2^-N (1 +/- C(frame)), each 2^(N-1)-fold degenerate.
PostMeasurementSpectrum post_measurement_spectrum(const BlochTensor& n,
                                                  const MeasurementFrame& frame);

// Largest t in (0,1] with density_from_bloch(t*n) positive semidefinite,
// located by bisection. Scaling toward the maximally mixed state keeps the
// singular-vector structure of the tensor intact.
double physical_shrink_factor(const BlochTensor& n);

BlochTensor make_physical(const BlochTensor& n, double* shrink_factor = nullptr);

} // namespace qd
