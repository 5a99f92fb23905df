#include "dlp/kernels.hpp"

#include <cmath>
#include <vector>

namespace dlp::kernels {

namespace {

// Shared per-element routines so the serial and OpenMP variants execute
// the exact same arithmetic.

inline void frame_pairwise(const double* a, const double* b, int i, int joints_a, int joints_b,
                           double* out) {
    const double* fa = a + static_cast<std::size_t>(i) * joints_a * 3;
    const double* fb = b + static_cast<std::size_t>(i) * joints_b * 3;
    double* fo = out + static_cast<std::size_t>(i) * joints_a * joints_b;
    for (int j1 = 0; j1 < joints_a; ++j1) {
        const double ax = fa[j1 * 3], ay = fa[j1 * 3 + 1], az = fa[j1 * 3 + 2];
        for (int j2 = 0; j2 < joints_b; ++j2) {
            const double dx = ax - fb[j2 * 3];
            const double dy = ay - fb[j2 * 3 + 1];
            const double dz = az - fb[j2 * 3 + 2];
            fo[j1 * joints_b + j2] = std::sqrt(dx * dx + dy * dy + dz * dz);
        }
    }
}

inline void row_group_distances(const double* row, int k, const double* query,
                                const double* mean, const double* inv_std, double* out5) {
    const int t_len = 2 * k;
    const int f_off = t_len;
    const int f_len = 3 * k;
    const int b_off = 5 * k;
    const int b_len = 189;
    const int h_off = b_off + b_len;
    const int p_off = h_off + 1;

    double t2 = 0.0;
    for (int d = 0; d < t_len; ++d) {
        const double diff = (row[d] - mean[d]) * inv_std[d] - (query[d] - mean[d]) * inv_std[d];
        t2 += diff * diff;
    }
    double f = 0.0;
    for (int s = 0; s < k; ++s) {
        const double* cf = row + f_off + s * 3;
        const double* qf = query + f_off + s * 3;
        const double nc = std::sqrt(cf[0] * cf[0] + cf[1] * cf[1] + cf[2] * cf[2]);
        const double nq = std::sqrt(qf[0] * qf[0] + qf[1] * qf[1] + qf[2] * qf[2]);
        double cosv = 0.0;
        if (nc > 0.0 && nq > 0.0) {
            cosv = (cf[0] * qf[0] + cf[1] * qf[1] + cf[2] * qf[2]) / (nc * nq);
        }
        f += 1.0 - cosv;
    }
    double b2 = 0.0;
    for (int d = b_off; d < b_off + b_len; ++d) {
        const double diff = (row[d] - mean[d]) * inv_std[d] - (query[d] - mean[d]) * inv_std[d];
        b2 += diff * diff;
    }
    const double hd = (row[h_off] - mean[h_off]) * inv_std[h_off] -
                      (query[h_off] - mean[h_off]) * inv_std[h_off];
    double p2 = 0.0;
    for (int d = p_off; d < p_off + 3; ++d) {
        const double diff = (row[d] - mean[d]) * inv_std[d] - (query[d] - mean[d]) * inv_std[d];
        p2 += diff * diff;
    }
    out5[0] = std::sqrt(t2);
    out5[1] = f;
    out5[2] = std::sqrt(b2);
    out5[3] = std::fabs(hd);
    out5[4] = std::sqrt(p2);
}

inline double row_cosine(const double* e, std::size_t dim, const double* q) {
    double dot = 0.0, ne = 0.0, nq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        dot += e[d] * q[d];
        ne += e[d] * e[d];
        nq += q[d] * q[d];
    }
    if (ne <= 0.0 || nq <= 0.0) return 0.0;
    return dot / (std::sqrt(ne) * std::sqrt(nq));
}

inline double frame_contact(const double* x, const double* y, const double* dbar, int i,
                            int joints, double gamma, double* grad_x, double* grad_y) {
    const std::size_t fo = static_cast<std::size_t>(i) * joints * 3;
    const double* fx = x + fo;
    const double* fy = y + fo;
    double* gx = grad_x ? grad_x + fo : nullptr;
    double* gy = grad_y ? grad_y + fo : nullptr;
    const double* fd = dbar + static_cast<std::size_t>(i) * joints * joints;
    double loss = 0.0;
    for (int j1 = 0; j1 < joints; ++j1) {
        for (int j2 = 0; j2 < joints; ++j2) {
            const double ref = fd[j1 * joints + j2];
            if (!(ref < gamma)) continue;
            const double dx = fx[j1 * 3] - fy[j2 * 3];
            const double dy = fx[j1 * 3 + 1] - fy[j2 * 3 + 1];
            const double dz = fx[j1 * 3 + 2] - fy[j2 * 3 + 2];
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            loss += std::fabs(ref - d);
            if (!gx && !gy) continue;
            if (d == 0.0 || ref == d) continue;  // subgradient 0 at the kinks
            // d|ref - d|/dd = -sign(ref - d); dd/dx = (x - y)/d
            const double s = (ref > d ? -1.0 : 1.0) / d;
            if (gx) {
                gx[j1 * 3] += s * dx;
                gx[j1 * 3 + 1] += s * dy;
                gx[j1 * 3 + 2] += s * dz;
            }
            if (gy) {
                gy[j2 * 3] -= s * dx;
                gy[j2 * 3 + 1] -= s * dy;
                gy[j2 * 3 + 2] -= s * dz;
            }
        }
    }
    return loss;
}

inline void column_moment(const double* data, std::size_t rows, std::size_t cols, std::size_t c,
                          double* mean, double* stddev) {
    double sum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) sum += data[r * cols + c];
    const double mu = sum / static_cast<double>(rows);
    double sq = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double d = data[r * cols + c] - mu;
        sq += d * d;
    }
    mean[c] = mu;
    stddev[c] = std::sqrt(sq / static_cast<double>(rows));
}

}  // namespace

void pairwise_distances(const double* a, const double* b, int frames, int joints_a,
                        int joints_b, double* out) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < frames; ++i) frame_pairwise(a, b, i, joints_a, joints_b, out);
}

void feature_group_distances(const double* features, std::size_t rows, int k,
                             const double* query, const double* mean, const double* inv_std,
                             double* out) {
    const std::size_t width = 5 * static_cast<std::size_t>(k) + 193;
    const long long n = static_cast<long long>(rows);
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < n; ++r) {
        row_group_distances(features + r * width, k, query, mean, inv_std, out + r * 5);
    }
}

void feature_group_distances_indexed(const double* features, const int* row_indices,
                                     std::size_t rows, int k, const double* query,
                                     const double* mean, const double* inv_std, double* out) {
    const std::size_t width = 5 * static_cast<std::size_t>(k) + 193;
    const long long n = static_cast<long long>(rows);
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < n; ++r) {
        row_group_distances(features + static_cast<std::size_t>(row_indices[r]) * width, k,
                            query, mean, inv_std, out + r * 5);
    }
}

void cosine_batch(const double* embeddings, std::size_t rows, std::size_t dim,
                  const double* query, double* out) {
    const long long n = static_cast<long long>(rows);
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < n; ++r) out[r] = row_cosine(embeddings + r * dim, dim, query);
}

double contact_loss_grad(const double* x, const double* y, const double* dbar, int frames,
                         int joints, double gamma, double* grad_x, double* grad_y) {
    if (grad_x || grad_y) {
        const std::size_t total = static_cast<std::size_t>(frames) * joints * 3;
        if (grad_x)
            for (std::size_t i = 0; i < total; ++i) grad_x[i] = 0.0;
        if (grad_y)
            for (std::size_t i = 0; i < total; ++i) grad_y[i] = 0.0;
    }
    std::vector<double> partial(static_cast<std::size_t>(frames));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < frames; ++i) {
        partial[i] = frame_contact(x, y, dbar, i, joints, gamma, grad_x, grad_y);
    }
    double loss = 0.0;
    for (int i = 0; i < frames; ++i) loss += partial[i];
    return loss;
}

void column_moments(const double* data, std::size_t rows, std::size_t cols, double* mean,
                    double* stddev) {
    const long long n = static_cast<long long>(cols);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < n; ++c) {
        column_moment(data, rows, cols, static_cast<std::size_t>(c), mean, stddev);
    }
}

namespace serial {

void pairwise_distances(const double* a, const double* b, int frames, int joints_a,
                        int joints_b, double* out) {
    for (int i = 0; i < frames; ++i) frame_pairwise(a, b, i, joints_a, joints_b, out);
}

void feature_group_distances(const double* features, std::size_t rows, int k,
                             const double* query, const double* mean, const double* inv_std,
                             double* out) {
    const std::size_t width = 5 * static_cast<std::size_t>(k) + 193;
    for (std::size_t r = 0; r < rows; ++r) {
        row_group_distances(features + r * width, k, query, mean, inv_std, out + r * 5);
    }
}

void feature_group_distances_indexed(const double* features, const int* row_indices,
                                     std::size_t rows, int k, const double* query,
                                     const double* mean, const double* inv_std, double* out) {
    const std::size_t width = 5 * static_cast<std::size_t>(k) + 193;
    for (std::size_t r = 0; r < rows; ++r) {
        row_group_distances(features + static_cast<std::size_t>(row_indices[r]) * width, k,
                            query, mean, inv_std, out + r * 5);
    }
}

void cosine_batch(const double* embeddings, std::size_t rows, std::size_t dim,
                  const double* query, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        out[r] = row_cosine(embeddings + r * dim, dim, query);
    }
}

double contact_loss_grad(const double* x, const double* y, const double* dbar, int frames,
                         int joints, double gamma, double* grad_x, double* grad_y) {
    if (grad_x || grad_y) {
        const std::size_t total = static_cast<std::size_t>(frames) * joints * 3;
        if (grad_x)
            for (std::size_t i = 0; i < total; ++i) grad_x[i] = 0.0;
        if (grad_y)
            for (std::size_t i = 0; i < total; ++i) grad_y[i] = 0.0;
    }
    double loss = 0.0;
    for (int i = 0; i < frames; ++i) {
        loss += frame_contact(x, y, dbar, i, joints, gamma, grad_x, grad_y);
    }
    return loss;
}

void column_moments(const double* data, std::size_t rows, std::size_t cols, double* mean,
                    double* stddev) {
    for (std::size_t c = 0; c < cols; ++c) column_moment(data, rows, cols, c, mean, stddev);
}

}  // namespace serial

}  // namespace dlp::kernels
