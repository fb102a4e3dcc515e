#include "qd/qstate.hpp"

#include <algorithm>
#include <cmath>

namespace qd {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = -1e-10;

using cplx = std::complex<double>;

int qubits_for_dim(Eigen::Index d) {
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    if ((Eigen::Index{1} << n) != d) return -1;
    return n;
}

// Action of the Pauli word a on basis column k: the word has exactly one
// nonzero entry per column, at row `flip(k)` with a unit-modulus phase.
struct PauliColumn {
    std::size_t row;
    cplx phase;
};

PauliColumn pauli_column(std::size_t a, std::size_t k, int n_qubits) {
    std::size_t row = k;
    cplx phase(1.0, 0.0);
    for (int q = 0; q < n_qubits; ++q) {
        const int d = pauli_digit(a, q, n_qubits);
        if (d == 0) continue;
        const std::size_t bit = std::size_t{1} << (n_qubits - 1 - q);
        const bool one = (k & bit) != 0;
        switch (d) {
        case 1: row ^= bit; break;
        case 2: row ^= bit; phase *= one ? cplx(0, -1) : cplx(0, 1); break;
        case 3: if (one) phase = -phase; break;
        default: break;
        }
    }
    return {row, phase};
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_spectrum(const Eigen::MatrixXcd& m,
                                                               bool vectors = false) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    es.compute(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw invalid_state_error("eigendecomposition failed");
    return es;
}

double entropy_from_eigenvalues(const std::vector<double>& lam, int n_qubits) {
    double s = 0.0;
    for (double l : lam) {
        if (l < -1e-8)
            throw invalid_state_error("state has eigenvalue " + std::to_string(l) +
                                      " below tolerance; not a physical state");
        if (l > 1e-15) s -= l * std::log2(l);
    }
    return std::clamp(s, 0.0, static_cast<double>(n_qubits));
}

} // namespace

DensityMatrix DensityMatrix::from_matrix(int n_qubits, Eigen::MatrixXcd m) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    if (n_qubits < 1 || m.rows() != d || m.cols() != d)
        throw invalid_state_error("density matrix must be 2^N x 2^N");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermTol)
        throw invalid_state_error("matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    const double tr_err = std::abs(m.trace() - cplx(1.0, 0.0));
    if (tr_err > kHermTol)
        throw invalid_state_error("matrix trace differs from 1 by " + std::to_string(tr_err));
    DensityMatrix rho;
    rho.n_qubits_ = n_qubits;
    rho.m_ = std::move(m);
    return rho;
}

DensityMatrix DensityMatrix::unchecked(int n_qubits, Eigen::MatrixXcd m) {
    DensityMatrix rho;
    rho.n_qubits_ = n_qubits;
    rho.m_ = std::move(m);
    return rho;
}

std::vector<double> DensityMatrix::eigenvalues() const {
    auto es = solve_spectrum(m_);
    std::vector<double> lam(static_cast<std::size_t>(m_.rows()));
    for (Eigen::Index i = 0; i < m_.rows(); ++i) lam[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return lam;
}

double DensityMatrix::min_eigenvalue() const {
    auto es = solve_spectrum(m_);
    return es.eigenvalues().minCoeff();
}

BlochTensor bloch_from_density(const DensityMatrix& rho) {
    const int N = rho.n_qubits();
    if (N < 1 || qubits_for_dim(rho.dim()) != N)
        throw invalid_state_error("density matrix dimension is not 2^N");
    const auto& m = rho.matrix();
    const std::size_t dim = static_cast<std::size_t>(rho.dim());
    BlochTensor n(N);
    auto& c = n.raw();
    for (std::size_t a = 1; a < c.size(); ++a) {
        cplx t(0.0, 0.0);
        for (std::size_t k = 0; k < dim; ++k) {
            const auto pc = pauli_column(a, k, N);
            t += m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(pc.row)) * pc.phase;
        }
        if (std::abs(t.imag()) > kHermTol)
            throw invalid_state_error("Pauli coefficient " + index_to_string(a, N) +
                                      " has imaginary part " + std::to_string(t.imag()));
        c[a] = t.real();
    }
    return n;
}

DensityMatrix density_from_bloch(const BlochTensor& n) {
    const int N = n.n_qubits();
    const std::size_t dim = pow2(N);
    const double scale = 1.0 / static_cast<double>(dim);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k)
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = scale;
    const auto& c = n.raw();
    for (std::size_t a = 1; a < c.size(); ++a) {
        if (c[a] == 0.0) continue;
        const double w = scale * c[a];
        for (std::size_t k = 0; k < dim; ++k) {
            const auto pc = pauli_column(a, k, N);
            m(static_cast<Eigen::Index>(pc.row), static_cast<Eigen::Index>(k)) += w * pc.phase;
        }
    }
    return DensityMatrix::unchecked(N, std::move(m));
}

std::pair<bool, double> physicality(const BlochTensor& n) {
    const double lam = density_from_bloch(n).min_eigenvalue();
    return {lam >= kPsdTol, lam};
}

DensityMatrix marginal(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int N = rho.n_qubits();
    if (keep.empty()) throw argument_error("keep set must be nonempty");
    std::vector<int> ks = keep;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (int q : ks)
        if (q < 0 || q >= N) throw argument_error("keep set references a qubit outside the register");

    const int M = static_cast<int>(ks.size());
    const int T = N - M;
    const std::size_t dout = pow2(M);
    const std::size_t dtr = pow2(T);

    std::vector<int> traced;
    for (int q = 0; q < N; ++q)
        if (!std::binary_search(ks.begin(), ks.end(), q)) traced.push_back(q);

    auto assemble = [&](std::size_t kept_bits, std::size_t traced_bits) {
        std::size_t idx = 0;
        for (int i = 0; i < M; ++i)
            if (kept_bits & (std::size_t{1} << (M - 1 - i))) idx |= std::size_t{1} << (N - 1 - ks[static_cast<std::size_t>(i)]);
        for (int i = 0; i < T; ++i)
            if (traced_bits & (std::size_t{1} << (T - 1 - i))) idx |= std::size_t{1} << (N - 1 - traced[static_cast<std::size_t>(i)]);
        return idx;
    };

    const auto& m = rho.matrix();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dout),
                                                  static_cast<Eigen::Index>(dout));
    for (std::size_t r = 0; r < dout; ++r)
        for (std::size_t c = 0; c < dout; ++c) {
            cplx s(0.0, 0.0);
            for (std::size_t t = 0; t < dtr; ++t)
                s += m(static_cast<Eigen::Index>(assemble(r, t)), static_cast<Eigen::Index>(assemble(c, t)));
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s;
        }
    return DensityMatrix::unchecked(M, std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return entropy_from_eigenvalues(rho.eigenvalues(), rho.n_qubits());
}

double mutual_information(const DensityMatrix& rho) {
    double s_marg = 0.0;
    for (int q = 0; q < rho.n_qubits(); ++q) s_marg += von_neumann_entropy(marginal(rho, {q}));
    return s_marg - von_neumann_entropy(rho);
}

DensityMatrix apply_measurement(const DensityMatrix& rho, const MeasurementFrame& frame) {
    const int N = rho.n_qubits();
    frame.validate();
    if (frame.n_sites() != N) throw argument_error("frame has the wrong number of sites");

    // Basis change to the frame's product eigenbasis; projecting onto the
    // 2^N product projectors keeps only the diagonal there. The Kronecker
    // product is accumulated with qubit 0 as the most significant factor.
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Ones(1, 1);
    for (int q = N - 1; q >= 0; --q) {
        const Vec3& v = frame.axes[static_cast<std::size_t>(q)];
        const double theta = std::acos(std::clamp(v[2], -1.0, 1.0));
        const double phi = std::atan2(v[1], v[0]);
        Eigen::Matrix2cd uq;
        const cplx eip = std::polar(1.0, phi);
        uq(0, 0) = std::cos(theta / 2);
        uq(1, 0) = eip * std::sin(theta / 2);
        uq(0, 1) = -std::conj(eip) * std::sin(theta / 2);
        uq(1, 1) = std::cos(theta / 2);
        // column 0 points along +v, column 1 along -v
        Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
        next.setZero();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                next.block(a * u.rows(), b * u.cols(), u.rows(), u.cols()) = uq(a, b) * u;
        u = std::move(next);
    }
    Eigen::VectorXcd p = (u.adjoint() * rho.matrix() * u).diagonal();
    Eigen::MatrixXcd out = u * p.real().cast<cplx>().asDiagonal() * u.adjoint();
    return DensityMatrix::unchecked(N, std::move(out));
}

PostMeasurementSpectrum post_measurement_spectrum(const BlochTensor& n,
                                                  const MeasurementFrame& frame) {
    const int N = n.n_qubits();
    if (!n.is_restricted())
        throw precondition_error("post-measurement spectrum requires a restricted tensor");
    frame.validate();
    if (frame.n_sites() != N) throw argument_error("frame has the wrong number of sites");

    const std::vector<double> cube = n.cube();
    double c = 0.0;
    for (std::size_t idx = 0; idx < cube.size(); ++idx) {
        if (cube[idx] == 0.0) continue;
        double w = cube[idx];
        std::size_t rest = idx;
        std::size_t scale = cube.size() / 3;
        for (int k = 0; k < N; ++k) {
            w *= frame.axes[static_cast<std::size_t>(k)][rest / scale];
            rest %= scale;
            scale /= 3;
        }
        c += w;
    }
    const double base = 1.0 / static_cast<double>(pow2(N));
    return {base * (1.0 + c), base * (1.0 - c), static_cast<long>(pow2(N - 1))};
}

double physical_shrink_factor(const BlochTensor& n) {
    auto physical_at = [&](double t) {
        BlochTensor scaled = n;
        scaled *= t;
        return physicality(scaled).first;
    };
    if (physical_at(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (physical_at(mid) ? lo : hi) = mid;
    }
    return lo;
}

BlochTensor make_physical(const BlochTensor& n, double* shrink_factor) {
    const double t = physical_shrink_factor(n);
    if (shrink_factor) *shrink_factor = t;
    BlochTensor out = n;
    out *= t;
    return out;
}

} // namespace qd
