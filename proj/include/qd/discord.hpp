#pragma once

#include <optional>
#include <string>

#include "qd/bloch.hpp"
#include "qd/qstate.hpp"
#include "qd/tensor_norm.hpp"

namespace qd {

enum class DiscordMethod { exact2, hosvd_diagonal, meanfield, bruteforce };

std::string to_string(DiscordMethod m);

struct DiscordResult {
    double ggqd = 0.0;
    std::optional<double> gqd; // bits; needs a physical state
    double max_C = 0.0;
    MeasurementFrame optimal_frame;
    DiscordMethod method = DiscordMethod::meanfield;
};

// -p log2 p - (1-p) log2 (1-p); endpoints give 0.
double binary_entropy(double p);

// Geometric global discord of a restricted state, given the norm of its
// tensor: (sum_a n_a^2 - max_C^2) / 2^N. A lower-bound norm makes this an
// upper bound.
double ggqd(const BlochTensor& n, const NormResult& norm);

// Two-qubit closed form: (d2^2 + d3^2) / 4 from the signed SVD.
double ggqd_two_qubit(const BlochTensor& n);

// Closed form through the Tucker core when it is superdiagonal at
// tolerance 1e-8; empty otherwise so the caller can fall back to the
// optimizer.
std::optional<double> ggqd_hosvd(const BlochTensor& n);

// Entropic global discord of a restricted state:
// I(rho) + h2((1 + max_C)/2) - (N - 1).
double gqd(const DensityMatrix& rho, const BlochTensor& n, const NormResult& norm);

// Convenience dispatcher used by the CLI: picks the cheapest applicable
// method (or the requested one), optionally building the density matrix
// for the entropic value.
DiscordResult compute_discord(const BlochTensor& n,
                              std::optional<DiscordMethod> method = std::nullopt,
                              const OptimizerConfig& cfg = {},
                              int bruteforce_grid_steps = 60,
                              bool with_gqd = true);

} // namespace qd
