#include "qd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "qd/decompose.hpp"
#include "qd/discord.hpp"
#include "qd/errors.hpp"
#include "qd/qstate.hpp"

namespace qd {

namespace {

constexpr double kHosvdDiagonalTol = 1e-8;

int resolve_threads(int threads) {
    return threads > 0 ? threads : omp_get_max_threads();
}

int xy_weight(std::size_t a, int n_qubits) {
    int w = 0;
    for (int k = 0; k < n_qubits; ++k) {
        const int d = pauli_digit(a, k, n_qubits);
        if (d == 1 || d == 2) ++w;
    }
    return w;
}

MeasurementFrame frame_from_hosvd(const TuckerDecomposition& t) {
    const Vec3 d = t.superdiagonal();
    int top = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(d[static_cast<std::size_t>(a)]) > std::abs(d[static_cast<std::size_t>(top)])) top = a;
    MeasurementFrame f;
    f.axes.reserve(static_cast<std::size_t>(t.order));
    for (int k = 0; k < t.order; ++k)
        f.axes.push_back({t.factors[static_cast<std::size_t>(k)][static_cast<std::size_t>(top)][0],
                          t.factors[static_cast<std::size_t>(k)][static_cast<std::size_t>(top)][1],
                          t.factors[static_cast<std::size_t>(k)][static_cast<std::size_t>(top)][2]});
    if (d[static_cast<std::size_t>(top)] < 0.0)
        for (double& x : f.axes[0]) x = -x;
    return f;
}

void fill_point(TrajectoryPoint& pt, int n_qubits, bool with_gqd,
                const OptimizerConfig& optimizer) {
    const int N = n_qubits;
    const std::vector<double> cube = pt.tensor.cube();

    pt.mode_tracks.reserve(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) pt.mode_tracks.push_back(mode_singular_values(N, cube, k));

    NormResult norm;
    if (N == 2) {
        const SignedSvd3 s = svd3(pt.tensor.matrix3());
        pt.tracks = {std::abs(s.diag[0]), std::abs(s.diag[1]), std::abs(s.diag[2])};
        norm = injective_norm_exact2(pt.tensor);
    } else {
        const TuckerDecomposition t = hosvd(N, cube);
        if (is_hosvd_diagonal(t, kHosvdDiagonalTol)) {
            const Vec3 d = t.superdiagonal();
            pt.tracks = {std::abs(d[0]), std::abs(d[1]), std::abs(d[2])};
            std::sort(pt.tracks.begin(), pt.tracks.end(), std::greater<double>());
            norm.value = pt.tracks[0];
            norm.frame = frame_from_hosvd(t);
            norm.converged = true;
        } else {
            OptimizerConfig cfg = optimizer;
            cfg.threads = 1; // the trajectory loop owns the parallelism
            norm = injective_norm_meanfield(pt.tensor, cfg);
            const double residual =
                std::sqrt(std::max(0.0, pt.tensor.sum_squares() - norm.value * norm.value));
            pt.tracks = {norm.value, residual};
            std::sort(pt.tracks.begin(), pt.tracks.end(), std::greater<double>());
        }
    }

    pt.ggqd = ggqd(pt.tensor, norm);
    if (with_gqd) {
        const DensityMatrix rho = density_from_bloch(pt.tensor);
        pt.gqd = gqd(rho, pt.tensor, norm);
    }
}

} // namespace

BlochTensor phase_flip(const BlochTensor& n, double p) {
    if (!(p >= 0.0 && p <= 0.5)) throw argument_error("flip probability must lie in [0, 1/2]");
    const int N = n.n_qubits();
    const double lam = 1.0 - 2.0 * p;
    BlochTensor out = n;
    auto& c = out.raw();
    for (std::size_t a = 1; a < c.size(); ++a) {
        if (c[a] == 0.0) continue;
        const int w = xy_weight(a, N);
        if (w == 0) continue; // protected words are exactly preserved
        double f = 1.0;
        for (int i = 0; i < w; ++i) f *= lam;
        c[a] *= f;
    }
    return out;
}

std::vector<double> uniform_p_grid(double p_max, int points) {
    if (!(p_max > 0.0 && p_max <= 0.5)) throw argument_error("p_max must lie in (0, 1/2]");
    if (points < 2) throw argument_error("need at least two grid points");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = p_max * i / (points - 1);
    return g;
}

Trajectory compute_trajectory(const BlochTensor& n0, const std::vector<double>& p_grid,
                              const TrajectoryConfig& cfg) {
    const int N = n0.n_qubits();
    if (!n0.is_restricted())
        throw precondition_error("trajectories are defined on the restricted subspace");
    {
        const auto [ok, lam_min] = physicality(n0);
        if (!ok)
            throw invalid_state_error("initial tensor is not physical (min eigenvalue " +
                                      std::to_string(lam_min) + ")");
    }
    if (p_grid.empty()) throw argument_error("empty p grid");
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (!(p_grid[i] >= 0.0 && p_grid[i] <= 0.5))
            throw argument_error("grid probabilities must lie in [0, 1/2]");
        if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
            throw argument_error("grid probabilities must be strictly increasing");
    }

    Trajectory traj;
    traj.n_qubits = N;
    traj.points.resize(p_grid.size());
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        traj.points[i].p = p_grid[i];
        traj.points[i].tensor = phase_flip(n0, p_grid[i]);
    }

    // Every grid point is an independent computation; results do not depend
    // on the thread count.
    const int nthreads = resolve_threads(cfg.threads);
    if (nthreads == 1) {
        for (auto& pt : traj.points) fill_point(pt, N, cfg.with_gqd, cfg.optimizer);
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (long i = 0; i < static_cast<long>(traj.points.size()); ++i)
            fill_point(traj.points[static_cast<std::size_t>(i)], N, cfg.with_gqd, cfg.optimizer);
    }
    return traj;
}

std::string to_string(TransitionKind k) {
    switch (k) {
    case TransitionKind::discontinuous_kink: return "discontinuous_kink";
    case TransitionKind::smooth_crossover: return "smooth_crossover";
    case TransitionKind::none: return "none";
    }
    return "unknown";
}

namespace {

struct QuadFit {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0; // c0 + c1 x + c2 x^2
    double residual = 0.0;
};

QuadFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    double s0 = static_cast<double>(m), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double xi = x[i], yi = y[i];
        const double xi2 = xi * xi;
        s1 += xi;
        s2 += xi2;
        s3 += xi2 * xi;
        s4 += xi2 * xi2;
        t0 += yi;
        t1 += xi * yi;
        t2 += xi2 * yi;
    }
    // Solve the 3x3 normal equations by Cramer's rule.
    const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) + s2 * (s1 * s3 - s2 * s2);
    QuadFit f;
    if (std::abs(det) < 1e-300) {
        f.c0 = t0 / std::max(s0, 1.0);
        f.residual = std::numeric_limits<double>::infinity();
        return f;
    }
    const double d0 = t0 * (s2 * s4 - s3 * s3) - s1 * (t1 * s4 - s3 * t2) + s2 * (t1 * s3 - s2 * t2);
    const double d1 = s0 * (t1 * s4 - t2 * s3) - t0 * (s1 * s4 - s3 * s2) + s2 * (s1 * t2 - t1 * s2);
    const double d2 = s0 * (s2 * t2 - s3 * t1) - s1 * (s1 * t2 - s3 * t0) + t0 * (s1 * s3 - s2 * s2);
    f.c0 = d0 / det;
    f.c1 = d1 / det;
    f.c2 = d2 / det;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = f.c0 + f.c1 * x[i] + f.c2 * x[i] * x[i] - y[i];
        f.residual += r * r;
    }
    return f;
}

double eval_quad(const QuadFit& f, double x) { return f.c0 + f.c1 * x + f.c2 * x * x; }

} // namespace

TransitionReport detect_transition(const Trajectory& traj, double gap_tol, double slope_tol) {
    const auto& pts = traj.points;
    const int n = static_cast<int>(pts.size());
    if (n < 5) throw argument_error("transition detection needs at least five grid points");
    for (const auto& pt : pts)
        if (pt.tracks.size() < 2)
            throw argument_error("trajectory points must carry at least two tracks");

    std::vector<double> gap(static_cast<std::size_t>(n));
    std::vector<double> discord(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        gap[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(i)].tracks[0] - pts[static_cast<std::size_t>(i)].tracks[1];
        discord[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(i)].ggqd;
    }

    TransitionReport rep;

    // Raw interior minimum (reported for transparency).
    int raw_argmin = 1;
    for (int i = 1; i + 1 < n; ++i)
        if (gap[static_cast<std::size_t>(i)] < gap[static_cast<std::size_t>(raw_argmin)]) raw_argmin = i;
    rep.raw_min_gap = gap[static_cast<std::size_t>(raw_argmin)];

    // A transition candidate is a strict interior dip: the tracks approach
    // and separate again. Monotone shrinkage into a boundary (e.g. all
    // tracks decaying together toward p = 1/2) is not a crossing.
    int dip = -1;
    for (int i = 1; i + 1 < n; ++i) {
        if (gap[static_cast<std::size_t>(i)] < gap[static_cast<std::size_t>(i - 1)] &&
            gap[static_cast<std::size_t>(i)] < gap[static_cast<std::size_t>(i + 1)]) {
            if (dip < 0 || gap[static_cast<std::size_t>(i)] < gap[static_cast<std::size_t>(dip)]) dip = i;
        }
    }

    // Windowed slope change of the discord, used both for the kink decision
    // and for the default threshold (5x the median over the grid).
    const int w = std::max(1, n / 100);
    std::vector<double> slope_changes;
    slope_changes.reserve(static_cast<std::size_t>(n));
    const auto slope_change_at = [&](int j) {
        const int lo = j - w, hi = j + w;
        if (lo < 0 || hi >= n) return 0.0;
        const double left = (discord[static_cast<std::size_t>(j)] - discord[static_cast<std::size_t>(lo)]) /
                            (pts[static_cast<std::size_t>(j)].p - pts[static_cast<std::size_t>(lo)].p);
        const double right = (discord[static_cast<std::size_t>(hi)] - discord[static_cast<std::size_t>(j)]) /
                             (pts[static_cast<std::size_t>(hi)].p - pts[static_cast<std::size_t>(j)].p);
        return std::abs(right - left);
    };
    for (int j = w; j + w < n; ++j) slope_changes.push_back(slope_change_at(j));
    std::vector<double> sorted = slope_changes;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    rep.slope_tol = slope_tol > 0.0 ? slope_tol : 5.0 * median;

    if (dip < 0) {
        rep.kind = TransitionKind::none;
        rep.min_gap = rep.raw_min_gap;
        rep.slope_jump = slope_change_at(std::clamp(raw_argmin, w, n - 1 - w));
        return rep;
    }
    rep.dip_found = true;

    // Refine the dip on a 5-point window. The sorted gap hides the sign of
    // the underlying track difference; trying every single-flip sign
    // pattern and keeping the best quadratic fit recovers it. A fit that
    // crosses zero is an exact crossing between grid nodes; otherwise the
    // vertex estimates the avoided-crossing gap.
    const int lo = std::max(0, dip - 2);
    const int hi = std::min(n - 1, dip + 2);
    const int m = hi - lo + 1;
    std::vector<double> xs(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) xs[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(lo + i)].p - pts[static_cast<std::size_t>(dip)].p;

    QuadFit best_fit;
    best_fit.residual = std::numeric_limits<double>::infinity();
    for (int flip = m; flip >= 1; --flip) { // flip == m means no sign change
        for (int i = 0; i < m; ++i)
            ys[static_cast<std::size_t>(i)] = (i < flip ? 1.0 : -1.0) * gap[static_cast<std::size_t>(lo + i)];
        const QuadFit f = fit_quadratic(xs, ys);
        if (f.residual < best_fit.residual) best_fit = f;
    }

    double x_min = 0.0;
    double gap_min = gap[static_cast<std::size_t>(dip)];
    const double x_lo = xs.front(), x_hi = xs.back();
    const double disc = best_fit.c1 * best_fit.c1 - 4.0 * best_fit.c2 * best_fit.c0;
    bool found_root = false;
    if (std::abs(best_fit.c2) > 1e-300 && disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (const double r : {(-best_fit.c1 - sq) / (2.0 * best_fit.c2),
                               (-best_fit.c1 + sq) / (2.0 * best_fit.c2)}) {
            if (r >= x_lo && r <= x_hi && (!found_root || std::abs(r) < std::abs(x_min))) {
                x_min = r;
                gap_min = 0.0;
                found_root = true;
            }
        }
    } else if (std::abs(best_fit.c2) <= 1e-300 && std::abs(best_fit.c1) > 0.0) {
        const double r = -best_fit.c0 / best_fit.c1;
        if (r >= x_lo && r <= x_hi) {
            x_min = r;
            gap_min = 0.0;
            found_root = true;
        }
    }
    if (!found_root && best_fit.c2 > 0.0) {
        const double xv = -best_fit.c1 / (2.0 * best_fit.c2);
        if (xv >= x_lo && xv <= x_hi) {
            x_min = xv;
            gap_min = std::max(0.0, std::abs(eval_quad(best_fit, xv)));
        }
    }

    rep.p_c = pts[static_cast<std::size_t>(dip)].p + x_min;
    rep.min_gap = std::min(gap_min, rep.raw_min_gap);

    double jump = 0.0;
    for (int j = std::max(w, dip - 2); j <= std::min(n - 1 - w, dip + 2); ++j)
        jump = std::max(jump, slope_change_at(j));
    rep.slope_jump = jump;

    const bool slope_fires = jump > 0.0 && jump >= rep.slope_tol;
    if (rep.min_gap <= gap_tol) {
        rep.kind = slope_fires ? TransitionKind::discontinuous_kink : TransitionKind::none;
    } else {
        rep.kind = TransitionKind::smooth_crossover;
    }
    return rep;
}

bool maziero_condition(const Vec3& diag) {
    return std::abs(diag[0]) >= std::abs(diag[2]) || std::abs(diag[1]) >= std::abs(diag[2]);
}

bool maziero_condition(const BlochTensor& n0) {
    if (n0.n_qubits() != 2) throw precondition_error("criterion is defined for two qubits");
    const Mat3 m = n0.matrix3();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && std::abs(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > 1e-12)
                throw precondition_error("criterion is defined for diagonal tensors");
    return maziero_condition(Vec3{m[0][0], m[1][1], m[2][2]});
}

bool predict_transition(const BlochTensor& n0, int protected_axis) {
    if (protected_axis < 1 || protected_axis > 3)
        throw argument_error("protected axis must be 1, 2 or 3");
    const int N = n0.n_qubits();
    const std::size_t alpha = static_cast<std::size_t>(protected_axis - 1);

    Vec3 robust{};
    if (N == 2) {
        const Mat3 m = n0.matrix3();
        const SignedSvd3 s = svd3(m);
        for (std::size_t a = 0; a < 3; ++a)
            robust[a] = m[alpha][alpha] * s.left[alpha][a] * s.right[alpha][a];
    } else {
        const TuckerDecomposition t = hosvd(n0);
        std::size_t all_alpha = 0;
        for (int k = 0; k < N; ++k) all_alpha = all_alpha * 3 + alpha;
        const double protected_coeff = t.core.empty() ? 0.0 : n0.cube()[all_alpha];
        for (std::size_t a = 0; a < 3; ++a) {
            double prod = protected_coeff;
            for (int k = 0; k < N; ++k) prod *= t.factors[static_cast<std::size_t>(k)][a][alpha];
            robust[a] = prod;
        }
    }
    return std::abs(robust[1]) > std::abs(robust[0]) || std::abs(robust[2]) > std::abs(robust[0]);
}

} // namespace qd
