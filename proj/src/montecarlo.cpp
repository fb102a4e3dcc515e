#include "qd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "qd/decompose.hpp"
#include "qd/errors.hpp"
#include "qd/qstate.hpp"

namespace qd {

namespace {

int resolve_threads(int threads) {
    return threads > 0 ? threads : omp_get_max_threads();
}

} // namespace

void McConfig::validate() const {
    if (n_qubits < 2) throw argument_error("sampling needs at least two qubits");
    if (samples < 1) throw argument_error("at least one sample is required");
    if (grid_points < 5) throw argument_error("trajectory grid needs at least five points");
    if (epsilons.empty()) throw argument_error("at least one epsilon is required");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0))
            throw argument_error("epsilons must lie in (0, 1)");
        if (i > 0 && !(epsilons[i] > epsilons[i - 1]))
            throw argument_error("epsilons must be strictly ascending");
    }
    for (int i = 0; i < 2; ++i)
        if (std::abs(spectrum[static_cast<std::size_t>(i)]) <
            std::abs(spectrum[static_cast<std::size_t>(i + 1)]) - 1e-15)
            throw argument_error("spectrum magnitudes must be sorted descending");
}

Mat3 sample_rotation(Rng& rng) {
    double w, x, y, z, nrm;
    do {
        w = rng.gaussian();
        x = rng.gaussian();
        y = rng.gaussian();
        z = rng.gaussian();
        nrm = std::sqrt(w * w + x * x + y * y + z * z);
    } while (nrm < 1e-12);
    w /= nrm;
    x /= nrm;
    y /= nrm;
    z /= nrm;
    Mat3 r;
    r[0] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
    r[1] = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
    r[2] = {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
    return r;
}

BlochTensor sample_state_with_rotations(const Vec3& spectrum, int n_qubits,
                                        const std::vector<Mat3>& rotations,
                                        double* shrink_factor) {
    if (static_cast<int>(rotations.size()) != n_qubits)
        throw argument_error("one rotation per site is required");
    std::vector<double> cube(pow3(n_qubits), 0.0);
    std::size_t step = 0;
    for (int k = 0; k < n_qubits; ++k) step = step * 3 + 1;
    for (std::size_t a = 0; a < 3; ++a) cube[a * step] = spectrum[a];
    for (int k = 0; k < n_qubits; ++k) {
        // n = D x_k R^T: T(i, a) = R(a, i) contracts the core index.
        Mat3 t{};
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 3; ++a)
                t[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] =
                    rotations[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        cube = cube_mode_transform(n_qubits, cube, k, t);
    }
    const BlochTensor raw = BlochTensor::from_cube(n_qubits, cube);
    return make_physical(raw, shrink_factor);
}

BlochTensor sample_state(const Vec3& spectrum, int n_qubits, Rng& rng, double* shrink_factor) {
    std::vector<Mat3> rots;
    rots.reserve(static_cast<std::size_t>(n_qubits));
    for (int k = 0; k < n_qubits; ++k) rots.push_back(sample_rotation(rng));
    return sample_state_with_rotations(spectrum, n_qubits, rots, shrink_factor);
}

double initial_track_scale(const BlochTensor& n0) {
    return mode_singular_values(n0.n_qubits(), n0.cube(), 0)[0];
}

double near_crossing_gap(const BlochTensor& n0, int grid_points) {
    const int N = n0.n_qubits();
    if (grid_points < 5) throw argument_error("trajectory grid needs at least five points");
    const std::vector<double> cube0 = n0.cube();
    const std::size_t cube_size = cube0.size();

    // x/y digit count per cube index (cube digits 0,1,2 map to x,y,z).
    std::vector<int> weight(cube_size, 0);
    for (std::size_t c = 0; c < cube_size; ++c) {
        std::size_t rest = c;
        int w = 0;
        for (int k = 0; k < N; ++k) {
            if (rest % 3 != 2) ++w;
            rest /= 3;
        }
        weight[c] = w;
    }

    std::vector<std::vector<double>> gaps(static_cast<std::size_t>(N),
                                          std::vector<double>(static_cast<std::size_t>(grid_points)));
    std::vector<double> scaled(cube_size);
    std::vector<double> lam_pow(static_cast<std::size_t>(N + 1));
    for (int i = 0; i < grid_points; ++i) {
        const double p = 0.5 * i / (grid_points - 1);
        const double lam = 1.0 - 2.0 * p;
        lam_pow[0] = 1.0;
        for (int w = 1; w <= N; ++w) lam_pow[static_cast<std::size_t>(w)] = lam_pow[static_cast<std::size_t>(w - 1)] * lam;
        for (std::size_t c = 0; c < cube_size; ++c)
            scaled[c] = cube0[c] * lam_pow[static_cast<std::size_t>(weight[c])];
        for (int k = 0; k < N; ++k) {
            const Vec3 sv = mode_singular_values(N, scaled, k);
            gaps[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = sv[0] - sv[1];
        }
    }

    double worst_mode = 0.0;
    for (int k = 0; k < N; ++k) {
        const auto& g = gaps[static_cast<std::size_t>(k)];
        double dip = std::numeric_limits<double>::infinity();
        for (int i = 1; i + 1 < grid_points; ++i) {
            if (g[static_cast<std::size_t>(i)] < g[static_cast<std::size_t>(i - 1)] &&
                g[static_cast<std::size_t>(i)] < g[static_cast<std::size_t>(i + 1)])
                dip = std::min(dip, g[static_cast<std::size_t>(i)]);
        }
        worst_mode = std::max(worst_mode, dip);
        if (std::isinf(worst_mode)) break; // some mode never pinches
    }
    return worst_mode;
}

Wilson wilson_interval(long hits, long samples) {
    const double z = 1.959963984540054;
    const double n = static_cast<double>(samples);
    const double phat = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

McReport estimate_probability(const McConfig& cfg) {
    cfg.validate();
    const int ne = static_cast<int>(cfg.epsilons.size());

    std::vector<long> hits(static_cast<std::size_t>(ne), 0);
    long unphysical = 0;

    const int nthreads = resolve_threads(cfg.threads);

    const auto run_sample = [&](long s, std::vector<long>& local_hits, long& local_unphys) {
        Rng rng(cfg.seed ^ static_cast<std::uint64_t>(s));
        double shrink = 1.0;
        const BlochTensor n0 = sample_state(cfg.spectrum, cfg.n_qubits, rng, &shrink);
        if (shrink < 1.0) ++local_unphys;
        const double scale = initial_track_scale(n0);
        const double g = near_crossing_gap(n0, cfg.grid_points);
        for (int e = 0; e < ne; ++e)
            if (g < cfg.epsilons[static_cast<std::size_t>(e)] * scale) ++local_hits[static_cast<std::size_t>(e)];
    };

    if (nthreads == 1) {
        for (long s = 0; s < cfg.samples; ++s) run_sample(s, hits, unphysical);
    } else {
#pragma omp parallel num_threads(nthreads)
        {
            std::vector<long> local_hits(static_cast<std::size_t>(ne), 0);
            long local_unphys = 0;
#pragma omp for schedule(dynamic, 64)
            for (long s = 0; s < cfg.samples; ++s) run_sample(s, local_hits, local_unphys);
#pragma omp critical
            {
                for (int e = 0; e < ne; ++e) hits[static_cast<std::size_t>(e)] += local_hits[static_cast<std::size_t>(e)];
                unphysical += local_unphys;
            }
        }
    }

    McReport rep;
    rep.config = cfg;
    rep.raw_unphysical_count = unphysical;
    rep.stats.reserve(static_cast<std::size_t>(ne));
    for (int e = 0; e < ne; ++e) {
        McEpsilonStat st;
        st.epsilon = cfg.epsilons[static_cast<std::size_t>(e)];
        st.hits = hits[static_cast<std::size_t>(e)];
        st.probability = static_cast<double>(st.hits) / static_cast<double>(cfg.samples);
        const Wilson w = wilson_interval(st.hits, cfg.samples);
        st.ci_low = w.low;
        st.ci_high = w.high;
        rep.stats.push_back(st);
    }

    // Log-log slope over informative points only.
    std::vector<double> xs, ys;
    for (const auto& st : rep.stats) {
        if (st.hits >= 10) {
            xs.push_back(std::log(st.epsilon));
            ys.push_back(std::log(st.probability));
        }
    }
    if (xs.size() >= 2) {
        const std::size_t m = xs.size();
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < m; ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(m);
        my /= static_cast<double>(m);
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        McSlopeFit fit;
        fit.slope = sxy / sxx;
        fit.points_used = static_cast<int>(m);
        if (m > 2) {
            double ss_res = 0;
            const double intercept = my - fit.slope * mx;
            for (std::size_t i = 0; i < m; ++i) {
                const double r = ys[i] - (intercept + fit.slope * xs[i]);
                ss_res += r * r;
            }
            fit.std_error = std::sqrt(ss_res / static_cast<double>(m - 2) / sxx);
        }
        rep.slope = fit;
    }
    return rep;
}

} // namespace qd
