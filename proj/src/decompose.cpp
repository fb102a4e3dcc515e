#include "qd/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qd/errors.hpp"

namespace qd {

namespace {

constexpr double kJacobiTol = 1e-14;
constexpr int kMaxSweeps = 50;

Vec3 column(const Mat3& m, int j) {
    return {m[0][static_cast<std::size_t>(j)], m[1][static_cast<std::size_t>(j)], m[2][static_cast<std::size_t>(j)]};
}

void set_column(Mat3& m, int j, const Vec3& v) {
    for (int i = 0; i < 3; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(i)];
}

void flip_column(Mat3& m, int j) {
    for (int i = 0; i < 3; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *= -1.0;
}

// Sign that makes the first nonzero component positive; 0 for a zero vector.
int canonical_sign(const Vec3& v) {
    for (double x : v) {
        if (x > 0.0) return 1;
        if (x < 0.0) return -1;
    }
    return 0;
}

bool lex_greater(const Vec3& a, const Vec3& b) {
    for (int i = 0; i < 3; ++i) {
        if (a[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i)])
            return a[static_cast<std::size_t>(i)] > b[static_cast<std::size_t>(i)];
    }
    return false;
}

Vec3 canonicalized(Vec3 v) {
    if (canonical_sign(v) < 0)
        for (double& x : v) x = -x;
    return v;
}

// Completes near-zero left singular directions to an orthonormal frame.
void complete_orthonormal(Mat3& u, const Vec3& sigma, double scale) {
    const double tiny = (scale > 0.0) ? 1e-13 * scale : 1.0;
    bool bad[3] = {sigma[0] <= tiny, sigma[1] <= tiny, sigma[2] <= tiny};
    if (!bad[0] && !bad[1] && !bad[2]) return;
    if (bad[0]) { // everything is zero: fall back to the identity frame
        u = mat3_identity();
        return;
    }
    if (bad[1]) {
        const Vec3 u0 = column(u, 0);
        int k = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(u0[static_cast<std::size_t>(i)]) < std::abs(u0[static_cast<std::size_t>(k)])) k = i;
        Vec3 e{};
        e[static_cast<std::size_t>(k)] = 1.0;
        set_column(u, 1, normalized(cross(u0, e)));
    }
    set_column(u, 2, normalized(cross(column(u, 0), column(u, 1))));
}

} // namespace

SignedSvd3 svd3(const Mat3& m) {
    for (const auto& row : m)
        for (double x : row)
            if (!std::isfinite(x)) throw argument_error("svd3 requires finite entries");

    // One-sided Jacobi: orthogonalize the columns of a working copy by
    // right rotations, accumulating them into V. At convergence the
    // working columns are U * diag(sigma).
    Mat3 a = m;
    Mat3 v = mat3_identity();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (int i = 0; i < 3; ++i) {
                    const double x = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
                    const double y = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if (std::abs(apq) <= kJacobiTol * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < 3; ++i) {
                    const double x = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
                    const double y = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * x - s * y;
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * x + c * y;
                }
                for (int i = 0; i < 3; ++i) {
                    const double x = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
                    const double y = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
                    v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * x - s * y;
                    v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * x + c * y;
                }
            }
        if (!rotated) break;
    }

    Vec3 sigma{};
    Mat3 u = mat3_identity();
    for (int j = 0; j < 3; ++j) {
        const Vec3 col = column(a, j);
        const double r = norm(col);
        sigma[static_cast<std::size_t>(j)] = r;
        if (r > 0.0) set_column(u, j, {col[0] / r, col[1] / r, col[2] / r});
    }
    const double scale = std::max({sigma[0], sigma[1], sigma[2]});

    // Order by descending magnitude; exact ties fall back to the
    // lexicographic order of the sign-canonical left columns.
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (sigma[static_cast<std::size_t>(i)] != sigma[static_cast<std::size_t>(j)])
            return sigma[static_cast<std::size_t>(i)] > sigma[static_cast<std::size_t>(j)];
        return lex_greater(canonicalized(column(u, i)), canonicalized(column(u, j)));
    });

    SignedSvd3 out;
    for (int j = 0; j < 3; ++j) {
        out.diag[static_cast<std::size_t>(j)] = sigma[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
        set_column(out.left, j, column(u, order[static_cast<std::size_t>(j)]));
        set_column(out.right, j, column(v, order[static_cast<std::size_t>(j)]));
    }
    complete_orthonormal(out.left, out.diag, scale);

    // Joint sign canonicalization keeps the reconstruction and both
    // determinants unchanged.
    for (int j = 0; j < 3; ++j) {
        if (canonical_sign(column(out.left, j)) < 0) {
            flip_column(out.left, j);
            flip_column(out.right, j);
        }
    }
    // Absorb reflections into the sign of the smallest diagonal entry.
    if (mat3_det(out.left) < 0.0) {
        flip_column(out.left, 2);
        out.diag[2] = -out.diag[2];
    }
    if (mat3_det(out.right) < 0.0) {
        flip_column(out.right, 2);
        out.diag[2] = -out.diag[2];
    }
    return out;
}

SymEig3 eig_sym3(const Mat3& m) {
    Mat3 a = m;
    Mat3 v = mat3_identity();
    double off_scale = 0.0;
    for (const auto& row : a)
        for (double x : row) off_scale = std::max(off_scale, std::abs(x));

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off <= 1e-15 * std::max(off_scale, 1e-300)) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
                if (apq == 0.0) continue;
                const double zeta = (a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] - a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)]) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                Mat3 next = a;
                for (int i = 0; i < 3; ++i) {
                    next[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] - s * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
                    next[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] + c * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
                }
                a = next;
                for (int j = 0; j < 3; ++j) {
                    const double x = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)];
                    const double y = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
                    a[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] = c * x - s * y;
                    a[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)] = s * x + c * y;
                }
                for (int i = 0; i < 3; ++i) {
                    const double x = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
                    const double y = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
                    v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * x - s * y;
                    v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * x + c * y;
                }
            }
    }

    SymEig3 out;
    std::array<int, 3> order{0, 1, 2};
    Vec3 lam{a[0][0], a[1][1], a[2][2]};
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return lam[static_cast<std::size_t>(i)] > lam[static_cast<std::size_t>(j)];
    });
    for (int j = 0; j < 3; ++j) {
        out.values[static_cast<std::size_t>(j)] = lam[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
        Vec3 col = column(v, order[static_cast<std::size_t>(j)]);
        if (canonical_sign(col) < 0)
            for (double& x : col) x = -x;
        set_column(out.vectors, j, col);
    }
    if (mat3_det(out.vectors) < 0.0) flip_column(out.vectors, 2);
    return out;
}

std::vector<double> cube_mode_transform(int order, const std::vector<double>& in, int mode,
                                        const Mat3& t) {
    std::vector<double> out(in.size(), 0.0);
    std::size_t stride = 1;
    for (int k = order - 1; k > mode; --k) stride *= 3;
    const std::size_t block = stride * 3;
    for (std::size_t hi = 0; hi < in.size(); hi += block)
        for (std::size_t lo = 0; lo < stride; ++lo) {
            const std::size_t base = hi + lo;
            const double x0 = in[base];
            const double x1 = in[base + stride];
            const double x2 = in[base + 2 * stride];
            for (int r = 0; r < 3; ++r)
                out[base + static_cast<std::size_t>(r) * stride] =
                    t[static_cast<std::size_t>(r)][0] * x0 + t[static_cast<std::size_t>(r)][1] * x1 + t[static_cast<std::size_t>(r)][2] * x2;
        }
    return out;
}

namespace {

Mat3 transpose(const Mat3& m) {
    Mat3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return t;
}

} // namespace

Mat3 mode_gram(int order, const std::vector<double>& cube, int mode) {
    Mat3 g{};
    std::size_t stride = 1;
    for (int k = order - 1; k > mode; --k) stride *= 3;
    const std::size_t block = stride * 3;
    for (std::size_t hi = 0; hi < cube.size(); hi += block)
        for (std::size_t lo = 0; lo < stride; ++lo) {
            const std::size_t base = hi + lo;
            const double x0 = cube[base];
            const double x1 = cube[base + stride];
            const double x2 = cube[base + 2 * stride];
            g[0][0] += x0 * x0;
            g[0][1] += x0 * x1;
            g[0][2] += x0 * x2;
            g[1][1] += x1 * x1;
            g[1][2] += x1 * x2;
            g[2][2] += x2 * x2;
        }
    g[1][0] = g[0][1];
    g[2][0] = g[0][2];
    g[2][1] = g[1][2];
    return g;
}

Vec3 mode_singular_values(int order, const std::vector<double>& cube, int mode) {
    const SymEig3 e = eig_sym3(mode_gram(order, cube, mode));
    return {std::sqrt(std::max(e.values[0], 0.0)), std::sqrt(std::max(e.values[1], 0.0)),
            std::sqrt(std::max(e.values[2], 0.0))};
}

TuckerDecomposition hosvd(int order, const std::vector<double>& cube) {
    if (order < 2) throw precondition_error("hosvd requires at least two indices");
    if (cube.size() != pow3(order)) throw argument_error("cube must have 3^N entries");

    TuckerDecomposition t;
    t.order = order;
    t.factors.reserve(static_cast<std::size_t>(order));
    std::vector<Mat3> bases; // eigenvector matrices, columns = singular directions
    bases.reserve(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        const SymEig3 e = eig_sym3(mode_gram(order, cube, k));
        bases.push_back(e.vectors);
        t.factors.push_back(transpose(e.vectors)); // factor rows index the core
    }
    t.core = cube;
    for (int k = 0; k < order; ++k)
        t.core = cube_mode_transform(order, t.core, k, t.factors[static_cast<std::size_t>(k)]);
    return t;
}

TuckerDecomposition hosvd(const BlochTensor& n) {
    if (!n.is_restricted())
        throw precondition_error("hosvd on a Bloch tensor requires the restricted subspace");
    return hosvd(n.n_qubits(), n.cube());
}

std::vector<double> tucker_reconstruct(const TuckerDecomposition& t) {
    std::vector<double> out = t.core;
    for (int k = 0; k < t.order; ++k) {
        Mat3 tr{};
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 3; ++a)
                tr[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = t.factors[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        out = cube_mode_transform(t.order, out, k, tr);
    }
    return out;
}

Vec3 TuckerDecomposition::superdiagonal() const {
    Vec3 d{};
    std::size_t step = 0;
    std::size_t stride = 1;
    for (int k = 0; k < order; ++k) {
        step = step * 3 + 1;
        if (k > 0) stride *= 3;
    }
    (void)stride;
    for (int a = 0; a < 3; ++a) d[static_cast<std::size_t>(a)] = core[static_cast<std::size_t>(a) * step];
    return d;
}

bool is_hosvd_diagonal(const TuckerDecomposition& t, double tol) {
    std::size_t step = 0;
    for (int k = 0; k < t.order; ++k) step = step * 3 + 1;
    for (std::size_t idx = 0; idx < t.core.size(); ++idx) {
        if (idx == 0 || idx == step || idx == 2 * step) continue;
        if (std::abs(t.core[idx]) > tol) return false;
    }
    return true;
}

} // namespace qd
