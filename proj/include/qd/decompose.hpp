#pragma once

#include <cstddef>
#include <vector>

#include "qd/bloch.hpp"

namespace qd {

// Signed SVD of a real 3x3 matrix: input = left * diag * right^T with both
// factors proper rotations. Reflections are absorbed into the signs of the
// diagonal, so entries of `diag` may be negative; they are ordered by
// descending magnitude. Local unitaries act on Bloch coefficients as SO(3)
// elements, which is why the factors are constrained to det = +1.
struct SignedSvd3 {
    Mat3 left;
    Vec3 diag;
    Mat3 right;
};

SignedSvd3 svd3(const Mat3& m);

// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
// Eigenvalues descending; eigenvector matrix proper with deterministic
// column signs.
struct SymEig3 {
    Vec3 values;
    Mat3 vectors; // columns are eigenvectors
};

SymEig3 eig_sym3(const Mat3& m);

// Tucker form of an N-index cube tensor (each index of size 3):
//   n_{i1..iN} = sum_{a1..aN} core_{a1..aN} prod_k factors[k](a_k, i_k)
// with every factor a proper rotation. Factors come from the signed left
// singular bases of the mode-k unfoldings, so the core satisfies the usual
// all-orthogonality property; it is superdiagonal only for special tensors.
struct TuckerDecomposition {
    int order = 0;
    std::vector<double> core;  // 3^N, site 0 slowest index
    std::vector<Mat3> factors; // factors[k](a, i), row = core index

    Vec3 superdiagonal() const;
};

TuckerDecomposition hosvd(int order, const std::vector<double>& cube);
TuckerDecomposition hosvd(const BlochTensor& n); // restricted tensors

// Reconstructs the cube from a Tucker decomposition.
std::vector<double> tucker_reconstruct(const TuckerDecomposition& t);

// True when every core entry off the superdiagonal has magnitude <= tol.
bool is_hosvd_diagonal(const TuckerDecomposition& t, double tol);

// out[.. r ..] = sum_c T(r, c) in[.. c ..] along the given mode of a 3^N cube.
std::vector<double> cube_mode_transform(int order, const std::vector<double>& in, int mode,
                                        const Mat3& t);

// Mode-k unfolding Gram matrix: rows indexed by the mode-k digit.
Mat3 mode_gram(int order, const std::vector<double>& cube, int mode);

// Singular values of the mode-k unfolding, descending.
Vec3 mode_singular_values(int order, const std::vector<double>& cube, int mode);

} // namespace qd
