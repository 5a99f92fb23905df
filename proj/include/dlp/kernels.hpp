#pragma once

#include <cstddef>

namespace dlp::kernels {

// Hot data-parallel loops. The default entry points are OpenMP-parallel;
// kernels::serial holds the plain reference implementations used by the
// tests and the benchmark. Parallel variants assign every output element
// to exactly one thread with the same arithmetic order as the serial
// code, so results are bit-identical regardless of thread count.

// out[(i*joints_a + j1)*joints_b + j2] = |a[i,j1] - b[i,j2]| with points
// stored as xyz triples per frame per joint.
void pairwise_distances(const double* a, const double* b, int frames, int joints_a,
                        int joints_b, double* out);

// Per-row raw distance components against one query feature vector.
// Feature layout per row: t(2k) f(3k) b(189) h(1) p(3), total 5k+193.
// T, B, H, P are Euclidean over z-scored dims (mean/inv_std supplied for
// the full layout; the f block is skipped); F sums per-frame cosine
// distances (1 - dot) over the k facing triples, unnormalized.
// out[r*5 + {0..4}] = {T, F, B, H, P}.
void feature_group_distances(const double* features, std::size_t rows, int k,
                             const double* query, const double* mean, const double* inv_std,
                             double* out);

// Same, over a scattered candidate set: row r of the output corresponds
// to feature row row_indices[r].
void feature_group_distances_indexed(const double* features, const int* row_indices,
                                     std::size_t rows, int k, const double* query,
                                     const double* mean, const double* inv_std, double* out);

// out[r] = cosine(embeddings[r], query); 0 when either norm is 0.
void cosine_batch(const double* embeddings, std::size_t rows, std::size_t dim,
                  const double* query, double* out);

// Contact loss sum_{i,j1,j2} |dbar - D| * [dbar < gamma] over an
// inter-character distance tensor D computed from position tensors
// x, y (frames*joints*3). When grad_x/grad_y are non-null they receive
// d(loss)/d(position); zero subgradient at dbar == D and at D == 0.
double contact_loss_grad(const double* x, const double* y, const double* dbar, int frames,
                         int joints, double gamma, double* grad_x, double* grad_y);

// Per-column mean and population std over a row-major rows x cols matrix.
void column_moments(const double* data, std::size_t rows, std::size_t cols, double* mean,
                    double* stddev);

namespace serial {

void pairwise_distances(const double* a, const double* b, int frames, int joints_a,
                        int joints_b, double* out);
void feature_group_distances(const double* features, std::size_t rows, int k,
                             const double* query, const double* mean, const double* inv_std,
                             double* out);
void feature_group_distances_indexed(const double* features, const int* row_indices,
                                     std::size_t rows, int k, const double* query,
                                     const double* mean, const double* inv_std, double* out);
void cosine_batch(const double* embeddings, std::size_t rows, std::size_t dim,
                  const double* query, double* out);
double contact_loss_grad(const double* x, const double* y, const double* dbar, int frames,
                         int joints, double gamma, double* grad_x, double* grad_y);
void column_moments(const double* data, std::size_t rows, std::size_t cols, double* mean,
                    double* stddev);

}  // namespace serial

}  // namespace dlp::kernels
