#include "qd/bloch.hpp"

#include <cmath>

namespace qd {

std::string index_to_string(std::size_t a, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int k = 0; k < n_qubits; ++k)
        s[static_cast<std::size_t>(k)] = static_cast<char>('0' + pauli_digit(a, k, n_qubits));
    return s;
}

std::size_t index_from_string(const std::string& s, int n_qubits) {
    if (static_cast<int>(s.size()) != n_qubits)
        throw argument_error("pauli index '" + s + "' must have exactly " +
                             std::to_string(n_qubits) + " base-4 digits");
    std::size_t a = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '3')
            throw argument_error("pauli index '" + s + "' contains a digit outside 0..3");
        a = a * 4 + static_cast<std::size_t>(ch - '0');
    }
    return a;
}

BlochTensor::BlochTensor(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw argument_error("n_qubits must be positive");
    if (n_qubits > 12) throw resource_limit_error("dense coefficient table limited to 12 qubits");
    c_.assign(pow4(n_qubits), 0.0);
}

BlochTensor BlochTensor::from_cube(int n_qubits, const std::vector<double>& cube) {
    BlochTensor n(n_qubits);
    if (cube.size() != pow3(n_qubits))
        throw argument_error("cube must have 3^N entries");
    for (std::size_t c = 0; c < cube.size(); ++c) {
        // decode base-3 digits, map 0..2 -> pauli digits 1..3
        std::size_t a = 0, rest = c;
        std::size_t scale = cube.size() / 3;
        for (int k = 0; k < n_qubits; ++k) {
            a = a * 4 + (rest / scale + 1);
            rest %= scale;
            scale /= 3;
        }
        n.c_[a] = cube[c];
    }
    return n;
}

BlochTensor BlochTensor::from_matrix3(const Mat3& m) {
    BlochTensor n(2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            n.c_[static_cast<std::size_t>(4 * (i + 1) + (j + 1))] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return n;
}

double BlochTensor::coeff(std::size_t a) const {
    if (a == 0 || a >= c_.size())
        throw argument_error("pauli index out of range (the all-identity word is implicit)");
    return c_[a];
}

void BlochTensor::set_coeff(std::size_t a, double value) {
    if (a == 0)
        throw argument_error("the all-identity coefficient is fixed at 1 and cannot be set");
    if (a >= c_.size()) throw argument_error("pauli index out of range");
    if (!std::isfinite(value)) throw argument_error("coefficients must be finite");
    c_[a] = value;
}

bool BlochTensor::is_restricted(double tol) const {
    for (std::size_t a = 1; a < c_.size(); ++a) {
        if (c_[a] == 0.0) continue;
        for (int k = 0; k < n_qubits_; ++k) {
            if (pauli_digit(a, k, n_qubits_) == 0) {
                if (std::abs(c_[a]) > tol) return false;
                break;
            }
        }
    }
    return true;
}

std::vector<double> BlochTensor::cube() const {
    std::vector<double> out(pow3(n_qubits_), 0.0);
    for (std::size_t c = 0; c < out.size(); ++c) {
        std::size_t a = 0, rest = c;
        std::size_t scale = out.size() / 3;
        for (int k = 0; k < n_qubits_; ++k) {
            a = a * 4 + (rest / scale + 1);
            rest %= scale;
            scale /= 3;
        }
        out[c] = c_[a];
    }
    return out;
}

Mat3 BlochTensor::matrix3() const {
    if (n_qubits_ != 2) throw precondition_error("matrix3 requires a 2-qubit tensor");
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c_[static_cast<std::size_t>(4 * (i + 1) + (j + 1))];
    return m;
}

double BlochTensor::sum_squares() const {
    double s = 0.0;
    for (std::size_t a = 1; a < c_.size(); ++a) s += c_[a] * c_[a];
    return s;
}

double BlochTensor::max_abs() const {
    double s = 0.0;
    for (std::size_t a = 1; a < c_.size(); ++a) s = std::max(s, std::abs(c_[a]));
    return s;
}

BlochTensor& BlochTensor::operator*=(double t) {
    for (std::size_t a = 1; a < c_.size(); ++a) c_[a] *= t;
    return *this;
}

void MeasurementFrame::validate(double tol) const {
    if (axes.empty()) throw argument_error("measurement frame has no sites");
    for (const auto& v : axes) {
        if (std::abs(norm(v) - 1.0) > tol)
            throw argument_error("measurement directions must be unit vectors");
    }
}

BlochTensor rotate_site(const BlochTensor& n, int site, const Mat3& rot) {
    const int N = n.n_qubits();
    if (site < 0 || site >= N) throw argument_error("site index out of range");
    BlochTensor out(N);
    const auto& in = n.raw();
    auto& oc = out.raw();
    const int shift = 2 * (N - 1 - site);
    const std::size_t mask = ~(std::size_t{3} << shift);
    for (std::size_t a = 1; a < in.size(); ++a) {
        if (in[a] == 0.0) continue;
        const int d = static_cast<int>((a >> shift) & 3u);
        if (d == 0) {
            oc[a] += in[a];
            continue;
        }
        const std::size_t base = a & mask;
        for (int r = 1; r <= 3; ++r) {
            const double w = rot[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(d - 1)];
            if (w != 0.0) oc[base | (std::size_t(r) << shift)] += w * in[a];
        }
    }
    return out;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
    const double r = norm(a);
    if (r == 0.0) throw argument_error("cannot normalize the zero vector");
    return {a[0] / r, a[1] / r, a[2] / r};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Mat3 mat3_identity() {
    Mat3 m{};
    m[0][0] = m[1][1] = m[2][2] = 1.0;
    return m;
}

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
    return r;
}

Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        r[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)][0] * v[0] + m[static_cast<std::size_t>(i)][1] * v[1] + m[static_cast<std::size_t>(i)][2] * v[2];
    return r;
}

double mat3_det(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

} // namespace qd
