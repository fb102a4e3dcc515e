#include "qd/tensor_norm.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "qd/decompose.hpp"
#include "qd/errors.hpp"
#include "qd/rng.hpp"

namespace qd {

namespace {

int resolve_threads(int threads) {
    return threads > 0 ? threads : omp_get_max_threads();
}

struct SweepOutcome {
    MeasurementFrame frame;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

SweepOutcome iterate_to_convergence(const BlochTensor& n, MeasurementFrame frame,
                                    double alpha, double tol, int max_iterations) {
    SweepOutcome out;
    double c = correlation_C(n, frame);
    for (int it = 0; it < max_iterations; ++it) {
        frame = mean_field_sweep(n, std::move(frame), alpha);
        const double next = correlation_C(n, frame);
        out.iterations = it + 1;
        if (std::abs(next - c) < tol) {
            c = next;
            out.converged = true;
            break;
        }
        c = next;
    }
    out.value = c;
    out.frame = std::move(frame);
    return out;
}

// Better = larger value; exact ties go to the earlier start so the result
// does not depend on scheduling.
bool better(const SweepOutcome& a, int ia, const SweepOutcome& b, int ib) {
    if (a.value != b.value) return a.value > b.value;
    return ia < ib;
}

std::vector<MeasurementFrame> build_starts(const BlochTensor& n, const OptimizerConfig& cfg) {
    const int N = n.n_qubits();
    std::vector<MeasurementFrame> starts;
    if (cfg.include_axis_seeds && N <= 6) {
        const std::size_t count = pow3(N); // <= 729
        starts.reserve(count + static_cast<std::size_t>(cfg.restarts));
        for (std::size_t idx = 0; idx < count; ++idx) {
            MeasurementFrame f;
            f.axes.resize(static_cast<std::size_t>(N));
            std::size_t rest = idx;
            for (int k = N - 1; k >= 0; --k) {
                Vec3 v{};
                v[rest % 3] = 1.0;
                f.axes[static_cast<std::size_t>(k)] = v;
                rest /= 3;
            }
            starts.push_back(std::move(f));
        }
    }
    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(r));
        MeasurementFrame f;
        f.axes.reserve(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k) f.axes.push_back(rng.unit_vector());
        starts.push_back(std::move(f));
    }
    return starts;
}

} // namespace

void OptimizerConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw argument_error("damping alpha must be in (0, 1]");
    if (convergence_tol <= 0.0) throw argument_error("convergence tolerance must be positive");
    if (restarts < 1) throw argument_error("at least one restart is required");
    if (max_iterations < 1) throw argument_error("iteration cap must be positive");
}

double correlation_C(const BlochTensor& n, const MeasurementFrame& frame) {
    const int N = n.n_qubits();
    frame.validate();
    if (frame.n_sites() != N) throw argument_error("frame has the wrong number of sites");
    const auto& c = n.raw();
    double total = 0.0;
    for (std::size_t a = 1; a < c.size(); ++a) {
        if (c[a] == 0.0) continue;
        double w = c[a];
        for (int k = 0; k < N; ++k) {
            const int d = pauli_digit(a, k, N);
            if (d != 0) w *= frame.axes[static_cast<std::size_t>(k)][static_cast<std::size_t>(d - 1)];
        }
        total += w;
    }
    return total;
}

Vec3 local_field(const BlochTensor& n, const MeasurementFrame& frame, int site) {
    const int N = n.n_qubits();
    if (site < 0 || site >= N) throw argument_error("site index out of range");
    if (frame.n_sites() != N) throw argument_error("frame has the wrong number of sites");
    const auto& c = n.raw();
    Vec3 f{};
    for (std::size_t a = 1; a < c.size(); ++a) {
        if (c[a] == 0.0) continue;
        const int d = pauli_digit(a, site, N);
        if (d == 0) continue; // constant in Theta_site
        double w = c[a];
        for (int k = 0; k < N; ++k) {
            if (k == site) continue;
            const int dk = pauli_digit(a, k, N);
            if (dk != 0) w *= frame.axes[static_cast<std::size_t>(k)][static_cast<std::size_t>(dk - 1)];
        }
        f[static_cast<std::size_t>(d - 1)] += w;
    }
    return f;
}

MeasurementFrame mean_field_sweep(const BlochTensor& n, MeasurementFrame frame, double alpha) {
    const int N = n.n_qubits();
    if (!(alpha > 0.0 && alpha <= 1.0)) throw argument_error("damping alpha must be in (0, 1]");
    for (int site = 0; site < N; ++site) {
        const Vec3 f = local_field(n, frame, site);
        const double fn = norm(f);
        if (fn == 0.0) continue;
        const Vec3 candidate{f[0] / fn, f[1] / fn, f[2] / fn};
        Vec3& cur = frame.axes[static_cast<std::size_t>(site)];
        if (alpha >= 1.0) {
            cur = candidate;
            continue;
        }
        Vec3 mixed{(1.0 - alpha) * cur[0] + alpha * candidate[0],
                   (1.0 - alpha) * cur[1] + alpha * candidate[1],
                   (1.0 - alpha) * cur[2] + alpha * candidate[2]};
        const double mn = norm(mixed);
        if (mn < 1e-14) continue; // antipodal degeneracy: keep the old direction
        cur = {mixed[0] / mn, mixed[1] / mn, mixed[2] / mn};
    }
    return frame;
}

NormResult injective_norm_meanfield_from(const BlochTensor& n, const OptimizerConfig& cfg,
                                         const std::vector<MeasurementFrame>& starts) {
    cfg.validate();
    if (starts.empty()) throw argument_error("at least one start frame is required");
    for (const auto& f : starts) {
        f.validate();
        if (f.n_sites() != n.n_qubits()) throw argument_error("start frame has the wrong number of sites");
    }

    const int count = static_cast<int>(starts.size());
    std::vector<SweepOutcome> outcomes(static_cast<std::size_t>(count));
    const int nthreads = resolve_threads(cfg.threads);
    if (nthreads == 1) {
        for (int i = 0; i < count; ++i)
            outcomes[static_cast<std::size_t>(i)] = iterate_to_convergence(
                n, starts[static_cast<std::size_t>(i)], cfg.alpha, cfg.convergence_tol, cfg.max_iterations);
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (int i = 0; i < count; ++i)
            outcomes[static_cast<std::size_t>(i)] = iterate_to_convergence(
                n, starts[static_cast<std::size_t>(i)], cfg.alpha, cfg.convergence_tol, cfg.max_iterations);
    }

    int best = 0;
    for (int i = 1; i < count; ++i)
        if (better(outcomes[static_cast<std::size_t>(i)], i, outcomes[static_cast<std::size_t>(best)], best)) best = i;

    NormResult r;
    r.value = outcomes[static_cast<std::size_t>(best)].value;
    r.frame = std::move(outcomes[static_cast<std::size_t>(best)].frame);
    r.iterations_used = outcomes[static_cast<std::size_t>(best)].iterations;
    r.converged = outcomes[static_cast<std::size_t>(best)].converged;
    r.restart_index = best;
    return r;
}

NormResult injective_norm_meanfield(const BlochTensor& n, const OptimizerConfig& cfg) {
    cfg.validate();
    return injective_norm_meanfield_from(n, cfg, build_starts(n, cfg));
}

NormResult injective_norm_bruteforce(const BlochTensor& n, int grid_steps, int threads) {
    const int N = n.n_qubits();
    if (N > 4) throw resource_limit_error("grid scan limited to 4 sites; cost is (2 grid_steps^2)^N");
    if (grid_steps < 2) throw argument_error("grid_steps must be at least 2");

    std::vector<Vec3> grid;
    grid.reserve(static_cast<std::size_t>(grid_steps) * static_cast<std::size_t>(2 * grid_steps));
    for (int i = 0; i < grid_steps; ++i) {
        const double theta = 3.14159265358979323846 * i / (grid_steps - 1);
        for (int j = 0; j < 2 * grid_steps; ++j) {
            const double phi = 3.14159265358979323846 * j / grid_steps;
            grid.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                            std::cos(theta)});
        }
    }
    const int g = static_cast<int>(grid.size());

    // Contract sites one at a time: reducing a 4^k coefficient table
    // against a direction yields the 4^(k-1) table of the remaining sites.
    const auto reduce = [](const std::vector<double>& in, const Vec3& v) {
        const std::size_t out_size = in.size() / 4;
        std::vector<double> out(out_size);
        for (std::size_t r = 0; r < out_size; ++r)
            out[r] = in[r] + v[0] * in[out_size + r] + v[1] * in[2 * out_size + r] +
                     v[2] * in[3 * out_size + r];
        return out;
    };

    struct GridBest {
        double value = -std::numeric_limits<double>::infinity();
        std::vector<int> pick;
    };

    const auto scan_tail = [&](const std::vector<double>& table, int sites_left, auto&& self) -> GridBest {
        GridBest best;
        if (sites_left == 1) {
            for (int i = 0; i < g; ++i) {
                const Vec3& v = grid[static_cast<std::size_t>(i)];
                const double val = table[0] + v[0] * table[1] + v[1] * table[2] + v[2] * table[3];
                if (val > best.value) {
                    best.value = val;
                    best.pick = {i};
                }
            }
            return best;
        }
        for (int i = 0; i < g; ++i) {
            GridBest sub = self(reduce(table, grid[static_cast<std::size_t>(i)]), sites_left - 1, self);
            if (sub.value > best.value) {
                best.value = sub.value;
                best.pick = {i};
                best.pick.insert(best.pick.end(), sub.pick.begin(), sub.pick.end());
            }
        }
        return best;
    };

    std::vector<double> table = n.raw();
    table[0] = 0.0; // the implicit identity word does not contribute

    GridBest best;
    const int nthreads = resolve_threads(threads);
    if (N == 1) {
        best = scan_tail(table, 1, scan_tail);
    } else {
        std::vector<GridBest> by_first(static_cast<std::size_t>(g));
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (int i = 0; i < g; ++i)
            by_first[static_cast<std::size_t>(i)] =
                scan_tail(reduce(table, grid[static_cast<std::size_t>(i)]), N - 1, scan_tail);
        for (int i = 0; i < g; ++i) {
            const GridBest& sub = by_first[static_cast<std::size_t>(i)];
            if (sub.value > best.value) {
                best.value = sub.value;
                best.pick = {i};
                best.pick.insert(best.pick.end(), sub.pick.begin(), sub.pick.end());
            }
        }
    }

    MeasurementFrame frame;
    frame.axes.reserve(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) frame.axes.push_back(grid[static_cast<std::size_t>(best.pick[static_cast<std::size_t>(k)])]);

    SweepOutcome polished = iterate_to_convergence(n, std::move(frame), 1.0, 1e-12, 500);
    NormResult r;
    if (polished.value >= best.value) {
        r.value = polished.value;
        r.frame = std::move(polished.frame);
    } else { // undamped sweeps cannot decrease C; keep the grid point regardless
        r.value = best.value;
        frame.axes.clear();
        for (int k = 0; k < N; ++k) frame.axes.push_back(grid[static_cast<std::size_t>(best.pick[static_cast<std::size_t>(k)])]);
        r.frame = std::move(frame);
    }
    r.iterations_used = polished.iterations;
    r.converged = polished.converged;
    r.restart_index = 0;
    return r;
}

NormResult injective_norm_exact2(const BlochTensor& n) {
    if (n.n_qubits() != 2) throw precondition_error("exact norm requires a 2-qubit tensor");
    const SignedSvd3 s = svd3(n.matrix3());
    NormResult r;
    r.value = std::abs(s.diag[0]);
    Vec3 u{s.left[0][0], s.left[1][0], s.left[2][0]};
    Vec3 v{s.right[0][0], s.right[1][0], s.right[2][0]};
    if (s.diag[0] < 0.0)
        for (double& x : v) x = -x;
    r.frame.axes = {u, v};
    r.converged = true;
    r.iterations_used = 0;
    r.restart_index = 0;
    return r;
}

} // namespace qd
