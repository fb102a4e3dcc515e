#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qd/bloch.hpp"
#include "qd/rng.hpp"

namespace qd {

struct McConfig {
    int n_qubits = 2;
    Vec3 spectrum{1.0, 0.8, 0.6}; // descending magnitudes
    long samples = 10000;
    std::vector<double> epsilons; // ascending, each in (0, 1)
    std::uint64_t seed = 0;
    int grid_points = 201; // trajectory resolution per sample
    int threads = 0;       // 0 = runtime default, 1 = serial reference

    void validate() const;
};

struct McEpsilonStat {
    double epsilon = 0.0;
    long hits = 0;
    double probability = 0.0;
    double ci_low = 0.0;  // 95% Wilson interval
    double ci_high = 0.0;
};

struct McSlopeFit {
    double slope = 0.0; // log P vs log epsilon
    double std_error = 0.0;
    int points_used = 0;
};

struct McReport {
    McConfig config;
    std::vector<McEpsilonStat> stats;
    std::optional<McSlopeFit> slope; // over epsilons with >= 10 hits
    long raw_unphysical_count = 0;   // samples that needed shrinking
};

// Haar-uniform SO(3) element from a normalized Gaussian quaternion.
Mat3 sample_rotation(Rng& rng);

// Superdiagonal tensor with the given principal values, conjugated by
// independent Haar rotations per site, then shrunk onto the physical set.
// The shrink factor (1 when the raw sample was already physical) scales
// every track uniformly, so crossing structure is unaffected.
BlochTensor sample_state(const Vec3& spectrum, int n_qubits, Rng& rng,
                         double* shrink_factor = nullptr);

// Test hook: same construction with caller-supplied rotations.
BlochTensor sample_state_with_rotations(const Vec3& spectrum, int n_qubits,
                                        const std::vector<Mat3>& rotations,
                                        double* shrink_factor = nullptr);

// Near-crossing statistic of one sample: for every mode, the smallest
// interior local-minimum dip of the gap between the two leading unfolding
// singular values along the phase-flip trajectory; the sample statistic is
// the largest per-mode dip (every mode must pinch for a transition).
// Returns infinity when some mode never dips. For two qubits the mode
// gaps coincide with the signed-SVD track gap.
double near_crossing_gap(const BlochTensor& n0, int grid_points);

// Scale-free sample scale: leading unfolding singular value at p = 0.
double initial_track_scale(const BlochTensor& n0);

struct Wilson {
    double low = 0.0;
    double high = 0.0;
};

Wilson wilson_interval(long hits, long samples); // 95%

// Per-sample generators are seeded as seed xor sample_index, so the report
// is bit-identical for any thread count.
McReport estimate_probability(const McConfig& cfg);

} // namespace qd
