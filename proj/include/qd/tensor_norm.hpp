#pragma once

#include <cstdint>
#include <vector>

#include "qd/bloch.hpp"

namespace qd {

struct OptimizerConfig {
    double alpha = 1.0;           // damping; 1 = undamped
    int max_iterations = 500;     // sweep cap
    double convergence_tol = 1e-10; // on |delta C| per sweep
    int restarts = 20;            // random restarts on top of axis seeds
    std::uint64_t seed = 0;
    bool include_axis_seeds = true; // all 3^N axis frames (N <= 6)
    int threads = 0;              // 0 = runtime default, 1 = serial reference

    void validate() const;
};

struct NormResult {
    double value = 0.0; // achieved C; always equals correlation_C(n, frame)
    MeasurementFrame frame;
    int iterations_used = 0;
    bool converged = false;
    int restart_index = 0; // position in the start list (axis seeds first)
};

// Multilinear contraction C = sum_a n_a prod_i Theta_{i,a_i}. Identity
// digits contribute a factor of 1, so general tensors evaluate their
// lower-order monomials at the same frame.
double correlation_C(const BlochTensor& n, const MeasurementFrame& frame);

// The 3-vector f with C = (site-independent part) + f . Theta_site when all
// other sites are held fixed; on the restricted subspace C = f . Theta_site
// exactly.
Vec3 local_field(const BlochTensor& n, const MeasurementFrame& frame, int site);

// One Gauss-Seidel sweep: sites updated in index order, each against the
// partially updated frame. The damped mixture of unit vectors is
// renormalized; a zero local field leaves the site unchanged.
MeasurementFrame mean_field_sweep(const BlochTensor& n, MeasurementFrame frame, double alpha);

// Damped mean-field iteration over multiple starts. The result is a lower
// bound on the injective tensor norm.
NormResult injective_norm_meanfield(const BlochTensor& n, const OptimizerConfig& cfg);

// Same, with an explicit start list (warm starts, invariance tests).
NormResult injective_norm_meanfield_from(const BlochTensor& n, const OptimizerConfig& cfg,
                                         const std::vector<MeasurementFrame>& starts);

// Exhaustive per-site spherical grid scan (theta: grid_steps points on
// [0,pi], phi: 2*grid_steps on [0,2pi)) followed by an undamped mean-field
// polish from the best grid point. Cost grows as (2 grid_steps^2)^N; N <= 4.
NormResult injective_norm_bruteforce(const BlochTensor& n, int grid_steps, int threads = 0);

// Two-qubit closed form: the operator norm of the coefficient matrix.
NormResult injective_norm_exact2(const BlochTensor& n);

} // namespace qd
