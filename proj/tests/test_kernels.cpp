#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dlp/core/rng.hpp"
#include "dlp/kernels.hpp"

using dlp::Rng;
namespace kernels = dlp::kernels;

// The OpenMP kernels assign each output element to exactly one thread
// with the serial arithmetic order, so they must agree bit-for-bit with
// the serial references.

namespace {

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("pairwise_distances omp == serial") {
    Rng rng(1);
    const int frames = 37, ja = 21, jb = 17;
    std::vector<double> a(static_cast<std::size_t>(frames) * ja * 3), b(
        static_cast<std::size_t>(frames) * jb * 3);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal();
    std::vector<double> s(static_cast<std::size_t>(frames) * ja * jb), p(s.size());
    kernels::serial::pairwise_distances(a.data(), b.data(), frames, ja, jb, s.data());
    kernels::pairwise_distances(a.data(), b.data(), frames, ja, jb, p.data());
    CHECK(bit_equal(s, p));
}

TEST_CASE("feature_group_distances omp == serial") {
    Rng rng(2);
    const int k = 30;
    const std::size_t rows = 257;
    const std::size_t width = 5 * k + 193;
    std::vector<double> features(rows * width), query(width), mean(width), inv_std(width);
    for (auto& v : features) v = rng.normal();
    for (auto& v : query) v = rng.normal();
    for (auto& v : mean) v = rng.normal() * 0.1;
    for (auto& v : inv_std) v = 0.5 + rng.uniform();
    std::vector<double> s(rows * 5), p(rows * 5);
    kernels::serial::feature_group_distances(features.data(), rows, k, query.data(), mean.data(),
                                             inv_std.data(), s.data());
    kernels::feature_group_distances(features.data(), rows, k, query.data(), mean.data(),
                                     inv_std.data(), p.data());
    CHECK(bit_equal(s, p));

    // indexed variant against the dense one
    std::vector<int> idx = {5, 0, 255, 31, 31, 100};
    std::vector<double> si(idx.size() * 5), pi(idx.size() * 5);
    kernels::serial::feature_group_distances_indexed(features.data(), idx.data(), idx.size(), k,
                                                     query.data(), mean.data(), inv_std.data(),
                                                     si.data());
    kernels::feature_group_distances_indexed(features.data(), idx.data(), idx.size(), k,
                                             query.data(), mean.data(), inv_std.data(),
                                             pi.data());
    CHECK(bit_equal(si, pi));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (int c = 0; c < 5; ++c) {
            CHECK(si[i * 5 + c] == s[static_cast<std::size_t>(idx[i]) * 5 + c]);
        }
    }
}

TEST_CASE("cosine_batch omp == serial and handles zero rows") {
    Rng rng(3);
    const std::size_t rows = 129, dim = 64;
    std::vector<double> embs(rows * dim), query(dim);
    for (auto& v : embs) v = rng.normal();
    for (auto& v : query) v = rng.normal();
    for (std::size_t d = 0; d < dim; ++d) embs[7 * dim + d] = 0.0;  // zero row
    std::vector<double> s(rows), p(rows);
    kernels::serial::cosine_batch(embs.data(), rows, dim, query.data(), s.data());
    kernels::cosine_batch(embs.data(), rows, dim, query.data(), p.data());
    CHECK(bit_equal(s, p));
    CHECK(s[7] == 0.0);
    for (double v : s) {
        CHECK(v <= 1.0 + 1e-12);
        CHECK(v >= -1.0 - 1e-12);
    }
}

TEST_CASE("contact_loss_grad omp == serial") {
    Rng rng(4);
    const int frames = 33, joints = 21;
    const std::size_t n = static_cast<std::size_t>(frames) * joints * 3;
    std::vector<double> x(n), y(n), dbar(static_cast<std::size_t>(frames) * joints * joints);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    for (auto& v : dbar) v = rng.uniform() * 0.6;
    std::vector<double> sgx(n), sgy(n), pgx(n), pgy(n);
    const double ls = kernels::serial::contact_loss_grad(x.data(), y.data(), dbar.data(), frames,
                                                         joints, 0.3, sgx.data(), sgy.data());
    const double lp = kernels::contact_loss_grad(x.data(), y.data(), dbar.data(), frames, joints,
                                                 0.3, pgx.data(), pgy.data());
    CHECK(ls == lp);
    CHECK(bit_equal(sgx, pgx));
    CHECK(bit_equal(sgy, pgy));
}

TEST_CASE("column_moments omp == serial") {
    Rng rng(5);
    const std::size_t rows = 301, cols = 343;
    std::vector<double> data(rows * cols);
    for (auto& v : data) v = rng.normal() * 3.0 + 1.0;
    std::vector<double> sm(cols), ss(cols), pm(cols), ps(cols);
    kernels::serial::column_moments(data.data(), rows, cols, sm.data(), ss.data());
    kernels::column_moments(data.data(), rows, cols, pm.data(), ps.data());
    CHECK(bit_equal(sm, pm));
    CHECK(bit_equal(ss, ps));
}
