// Timing comparison of the serial reference kernels against the OpenMP
// variants. Build with -DCMAKE_BUILD_TYPE=Release for meaningful numbers.

#include <chrono>
#include <cstdio>
#include <vector>

#include "dlp/core/rng.hpp"
#include "dlp/kernels.hpp"

using dlp::Rng;
namespace kernels = dlp::kernels;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f, int reps) {
    f();  // warm up
    const auto start = Clock::now();
    for (int i = 0; i < reps; ++i) f();
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    Rng rng(42);

    {
        const int frames = 512, joints = 21;
        std::vector<double> a(static_cast<std::size_t>(frames) * joints * 3);
        std::vector<double> b(a.size());
        for (auto& v : a) v = rng.normal();
        for (auto& v : b) v = rng.normal();
        std::vector<double> out(static_cast<std::size_t>(frames) * joints * joints);
        report("pairwise_distances",
               time_ms([&] { kernels::serial::pairwise_distances(a.data(), b.data(), frames,
                                                                 joints, joints, out.data()); },
                       20),
               time_ms([&] { kernels::pairwise_distances(a.data(), b.data(), frames, joints,
                                                         joints, out.data()); },
                       20));
    }

    {
        const int k = 30;
        const std::size_t rows = 4096;
        const std::size_t width = 5 * k + 193;
        std::vector<double> features(rows * width), query(width), mean(width, 0.0),
            inv_std(width, 1.0);
        for (auto& v : features) v = rng.normal();
        for (auto& v : query) v = rng.normal();
        std::vector<double> out(rows * 5);
        report("feature_group_distances",
               time_ms([&] { kernels::serial::feature_group_distances(
                                 features.data(), rows, k, query.data(), mean.data(),
                                 inv_std.data(), out.data()); },
                       20),
               time_ms([&] { kernels::feature_group_distances(features.data(), rows, k,
                                                              query.data(), mean.data(),
                                                              inv_std.data(), out.data()); },
                       20));
    }

    {
        const std::size_t rows = 4096, dim = 1024;
        std::vector<double> embs(rows * dim), query(dim), out(rows);
        for (auto& v : embs) v = rng.normal();
        for (auto& v : query) v = rng.normal();
        report("cosine_batch",
               time_ms([&] { kernels::serial::cosine_batch(embs.data(), rows, dim, query.data(),
                                                           out.data()); },
                       20),
               time_ms([&] { kernels::cosine_batch(embs.data(), rows, dim, query.data(),
                                                   out.data()); },
                       20));
    }

    {
        const int frames = 256, joints = 21;
        const std::size_t n = static_cast<std::size_t>(frames) * joints * 3;
        std::vector<double> x(n), y(n), dbar(static_cast<std::size_t>(frames) * joints * joints);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        for (auto& v : dbar) v = 0.2 + 0.1 * rng.uniform();
        std::vector<double> gx(n), gy(n);
        report("contact_loss_grad",
               time_ms([&] { kernels::serial::contact_loss_grad(x.data(), y.data(), dbar.data(),
                                                                frames, joints, 0.3, gx.data(),
                                                                gy.data()); },
                       20),
               time_ms([&] { kernels::contact_loss_grad(x.data(), y.data(), dbar.data(), frames,
                                                        joints, 0.3, gx.data(), gy.data()); },
                       20));
    }

    {
        const std::size_t rows = 4096, cols = 343;
        std::vector<double> data(rows * cols), mean(cols), stddev(cols);
        for (auto& v : data) v = rng.normal();
        report("column_moments",
               time_ms([&] { kernels::serial::column_moments(data.data(), rows, cols,
                                                             mean.data(), stddev.data()); },
                       20),
               time_ms([&] { kernels::column_moments(data.data(), rows, cols, mean.data(),
                                                     stddev.data()); },
                       20));
    }
    return 0;
}
