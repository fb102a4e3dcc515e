#include "qd/discord.hpp"

#include <cmath>

#include "qd/decompose.hpp"
#include "qd/errors.hpp"

namespace qd {

namespace {

constexpr double kHosvdDiagonalTol = 1e-8;

// ggqd values in [-1e-9, 0) are optimizer slack and clamp to zero; anything
// more negative means the paired norm overshot the true maximum.
double clamp_nonnegative(double x, const char* what) {
    if (x >= 0.0) return x;
    if (x >= -1e-9) return 0.0;
    throw inconsistency_error(std::string(what) + " came out " + std::to_string(x) +
                              "; the norm exceeds what the tensor admits");
}

void check_pairing(const BlochTensor& n, const NormResult& norm) {
    if (norm.frame.n_sites() != n.n_qubits())
        throw argument_error("norm result does not match the tensor (site count differs)");
    const double c = correlation_C(n, norm.frame);
    const double scale = std::max(1.0, std::abs(norm.value));
    if (std::abs(c - norm.value) > 1e-9 * scale)
        throw argument_error("norm result does not match the tensor (C(frame) = " +
                             std::to_string(c) + ", recorded value = " +
                             std::to_string(norm.value) + ")");
}

} // namespace

std::string to_string(DiscordMethod m) {
    switch (m) {
    case DiscordMethod::exact2: return "exact2";
    case DiscordMethod::hosvd_diagonal: return "hosvd_diagonal";
    case DiscordMethod::meanfield: return "meanfield";
    case DiscordMethod::bruteforce: return "bruteforce";
    }
    return "unknown";
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw argument_error("binary entropy needs p in [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double ggqd(const BlochTensor& n, const NormResult& norm) {
    if (!n.is_restricted()) throw precondition_error("ggqd requires a restricted tensor");
    check_pairing(n, norm);
    const double val =
        (n.sum_squares() - norm.value * norm.value) / static_cast<double>(pow2(n.n_qubits()));
    return clamp_nonnegative(val, "geometric discord");
}

double ggqd_two_qubit(const BlochTensor& n) {
    if (n.n_qubits() != 2) throw precondition_error("two-qubit closed form needs N = 2");
    if (!n.is_restricted()) throw precondition_error("ggqd requires a restricted tensor");
    const SignedSvd3 s = svd3(n.matrix3());
    return 0.25 * (s.diag[1] * s.diag[1] + s.diag[2] * s.diag[2]);
}

std::optional<double> ggqd_hosvd(const BlochTensor& n) {
    if (!n.is_restricted()) throw precondition_error("ggqd requires a restricted tensor");
    const TuckerDecomposition t = hosvd(n);
    if (!is_hosvd_diagonal(t, kHosvdDiagonalTol)) return std::nullopt;
    const Vec3 d = t.superdiagonal();
    const double s2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double top = std::max({d[0] * d[0], d[1] * d[1], d[2] * d[2]});
    return (s2 - top) / static_cast<double>(pow2(n.n_qubits()));
}

double gqd(const DensityMatrix& rho, const BlochTensor& n, const NormResult& norm) {
    if (!n.is_restricted()) throw precondition_error("gqd requires a restricted tensor");
    if (rho.n_qubits() != n.n_qubits()) throw argument_error("state and tensor sizes differ");
    check_pairing(n, norm);
    double c = std::abs(norm.value);
    if (c > 1.0 + 1e-6)
        throw inconsistency_error("measured correlation " + std::to_string(c) +
                                  " exceeds 1; the norm cannot come from a physical state");
    c = std::min(c, 1.0);
    const double value = mutual_information(rho) + binary_entropy(0.5 * (1.0 + c)) -
                         (n.n_qubits() - 1);
    return clamp_nonnegative(value, "entropic discord");
}

DiscordResult compute_discord(const BlochTensor& n, std::optional<DiscordMethod> method,
                              const OptimizerConfig& cfg, int bruteforce_grid_steps,
                              bool with_gqd) {
    if (!n.is_restricted()) throw precondition_error("discord computation requires a restricted tensor");
    const int N = n.n_qubits();

    DiscordMethod m;
    if (method) {
        m = *method;
    } else if (N == 2) {
        m = DiscordMethod::exact2;
    } else if (ggqd_hosvd(n).has_value()) {
        m = DiscordMethod::hosvd_diagonal;
    } else {
        m = DiscordMethod::meanfield;
    }

    NormResult norm;
    switch (m) {
    case DiscordMethod::exact2:
        norm = injective_norm_exact2(n);
        break;
    case DiscordMethod::hosvd_diagonal: {
        // The optimizer with axis seeds lands exactly on the principal axes
        // of a superdiagonal tensor, so it doubles as the frame provider.
        if (!ggqd_hosvd(n).has_value())
            throw precondition_error("tensor has no superdiagonal Tucker core; use another method");
        norm = injective_norm_meanfield(n, cfg);
        break;
    }
    case DiscordMethod::meanfield:
        norm = injective_norm_meanfield(n, cfg);
        break;
    case DiscordMethod::bruteforce:
        norm = injective_norm_bruteforce(n, bruteforce_grid_steps, cfg.threads);
        break;
    }

    DiscordResult r;
    r.method = m;
    r.max_C = norm.value;
    r.optimal_frame = norm.frame;
    r.ggqd = ggqd(n, norm);
    if (with_gqd) {
        const DensityMatrix rho = density_from_bloch(n);
        if (rho.min_eigenvalue() < -1e-10)
            throw invalid_state_error("tensor is not a physical state; entropic discord undefined");
        r.gqd = gqd(rho, n, norm);
    }
    return r;
}

} // namespace qd
