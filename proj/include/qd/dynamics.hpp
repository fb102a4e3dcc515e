#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qd/bloch.hpp"
#include "qd/tensor_norm.hpp"

namespace qd {

// Independent per-qubit phase flip with probability p: every coefficient is
// scaled by (1-2p)^w where w counts the x/y digits of its word; words made
// of identity and z digits only are exactly preserved.
BlochTensor phase_flip(const BlochTensor& n, double p);

struct TrajectoryPoint {
    double p = 0.0;
    BlochTensor tensor;
    double ggqd = 0.0;
    std::optional<double> gqd;
    // Magnitude-sorted singular-value tracks: signed-SVD magnitudes for two
    // qubits; for N >= 3 the Tucker superdiagonal when the core is
    // superdiagonal, otherwise the mean-field maximum plus the residual
    // norm sqrt(sum n^2 - C^2).
    std::vector<double> tracks;
    // Per-mode unfolding singular values (descending), one triple per site.
    // These extend the two-qubit tracks to any N and drive the Monte Carlo
    // near-crossing statistic.
    std::vector<Vec3> mode_tracks;
};

struct Trajectory {
    int n_qubits = 0;
    std::vector<TrajectoryPoint> points;
};

struct TrajectoryConfig {
    bool with_gqd = false;
    OptimizerConfig optimizer; // used when no closed form applies
    int threads = 0;
};

std::vector<double> uniform_p_grid(double p_max, int points);

Trajectory compute_trajectory(const BlochTensor& n0, const std::vector<double>& p_grid,
                              const TrajectoryConfig& cfg = {});

enum class TransitionKind { discontinuous_kink, smooth_crossover, none };

std::string to_string(TransitionKind k);

struct TransitionReport {
    TransitionKind kind = TransitionKind::none;
    std::optional<double> p_c;
    double min_gap = 0.0;     // interpolated d1-d2 minimum at the dip
    double raw_min_gap = 0.0; // smallest sampled interior gap
    double slope_jump = 0.0;  // change of the finite-difference dD/dp at p_c
    double slope_tol = 0.0;   // threshold used for the kink decision
    bool dip_found = false;
};

// Locates the interior closest approach of the two leading tracks. The two
// kinds are separated geometrically: a dip that interpolates to (near) zero
// gap together with a jump of the discord slope is a kink; a dip with a
// strictly positive gap is an avoided crossing. Endpoint track coalescence
// (gap shrinking monotonically into a boundary) is not a dip.
//
// slope_tol <= 0 selects the default of 5x the median absolute windowed
// slope change of the discord over the grid.
TransitionReport detect_transition(const Trajectory& traj, double gap_tol,
                                   double slope_tol = 0.0);

// Two-qubit diagonal-state crossing criterion:
// |n11| >= |n33| or |n22| >= |n33|.
bool maziero_condition(const BlochTensor& n0);
bool maziero_condition(const Vec3& diag);

// Crossing prediction from the channel-protected component: forms the
// robust values n_(z..z) * prod_k factor_k(a, z) and reports whether one of
// the subleading ones dominates the leading one. protected_axis is 1-based
// (3 = z). Exact for two qubits; for N >= 3 it uses the Tucker factors.
bool predict_transition(const BlochTensor& n0, int protected_axis = 3);

} // namespace qd
