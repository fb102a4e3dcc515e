#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qd/errors.hpp"

namespace qd {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Multi-index convention: a Pauli word on N qubits is an N-digit base-4
// number, most significant digit = qubit 0. Digit values: 0 = I, 1 = x,
// 2 = y, 3 = z. The flat index of a word is sum_k digit_k * 4^(N-1-k).

inline std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }
inline std::size_t pow3(int n) {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i) r *= 3;
    return r;
}
inline std::size_t pow2(int n) { return std::size_t{1} << n; }

inline int pauli_digit(std::size_t a, int site, int n_qubits) {
    return static_cast<int>((a >> (2 * (n_qubits - 1 - site))) & 3u);
}

std::string index_to_string(std::size_t a, int n_qubits);
std::size_t index_from_string(const std::string& s, int n_qubits);

// Real coefficients of a density matrix in the tensor-product Pauli basis.
// The all-identity coefficient is fixed at 1 by the trace condition and is
// not stored; coeff(0) is rejected.
class BlochTensor {
public:
    BlochTensor() = default;
    explicit BlochTensor(int n_qubits);

    // Builds a tensor supported on the all-digits-nonzero block from a
    // 3^N cube laid out with site 0 as the slowest index.
    static BlochTensor from_cube(int n_qubits, const std::vector<double>& cube);

    // 2-qubit convenience: coefficient matrix over the {x,y,z}^2 block,
    // rows = qubit 0.
    static BlochTensor from_matrix3(const Mat3& m);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return c_.size(); }

    double coeff(std::size_t a) const;
    void set_coeff(std::size_t a, double value);

    const std::vector<double>& raw() const { return c_; }
    std::vector<double>& raw() { return c_; }

    // True when every coefficient with an identity digit vanishes. Such
    // states have all marginals maximally mixed.
    bool is_restricted(double tol = 1e-12) const;

    // Extracts the 3^N all-digits-nonzero block.
    std::vector<double> cube() const;
    Mat3 matrix3() const; // n_qubits == 2 only

    double sum_squares() const;
    double max_abs() const;

    BlochTensor& operator*=(double t);
    friend BlochTensor operator*(double t, BlochTensor n) { n *= t; return n; }

private:
    int n_qubits_ = 0;
    std::vector<double> c_; // flat, size 4^N, c_[0] kept at 0
};

// One measurement direction per qubit; all unit vectors.
struct MeasurementFrame {
    std::vector<Vec3> axes;

    MeasurementFrame() = default;
    explicit MeasurementFrame(std::vector<Vec3> a) : axes(std::move(a)) {}

    int n_sites() const { return static_cast<int>(axes.size()); }
    void validate(double tol = 1e-12) const; // throws argument_error
};

// Applies a proper rotation to the x/y/z digits of one site; identity
// digits are untouched. Corresponds to a local unitary on the state.
BlochTensor rotate_site(const BlochTensor& n, int site, const Mat3& rot);

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);
Vec3 cross(const Vec3& a, const Vec3& b);
Mat3 mat3_identity();
Mat3 mat3_mul(const Mat3& a, const Mat3& b);
Vec3 mat3_apply(const Mat3& m, const Vec3& v);
double mat3_det(const Mat3& m);

} // namespace qd
