#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "km/lloyd.hpp"
#include "km/synth.hpp"
#include "km/twophase.hpp"

// Serial reference vs OpenMP kernels on the same inputs: the assignment pass
// and the full two-phase pipeline.

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

int hardware_threads() {
#ifdef _OPENMP
    return omp_get_num_procs();
#else
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
#endif
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = 2'000'000;
    if (argc > 1) n = std::strtoull(argv[1], nullptr, 10);
    const std::size_t dim = 4;
    const std::size_t k = 10;
    const int threads = hardware_threads();
    std::printf("n=%zu dim=%zu k=%zu hardware threads=%d\n", n, dim, k, threads);

    const km::Dataset data = km::synth::make_blobs(n, dim, k, 0.5, 10.0, 42);
    const km::Dataset seeds = km::synth::make_uniform(k, dim, 10.0, 7);
    km::ClusterSet centers = km::ClusterSet::from_centers(seeds.raw(), dim);
    std::vector<std::uint32_t> labels(n);

    // assignment kernel, serial reference vs chunked OpenMP
    const int reps = 5;
    double serial_ms = 1e300, parallel_ms = 1e300;
    km::AssignStats serial_stats, parallel_stats;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        serial_stats = km::assign_step(data.view(), centers, labels, 1);
        serial_ms = std::min(serial_ms, now_ms() - t0);
    }
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        parallel_stats = km::assign_step(data.view(), centers, labels, threads);
        parallel_ms = std::min(parallel_ms, now_ms() - t0);
    }
    double max_rel = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double a = serial_stats.distortion[j], b = parallel_stats.distortion[j];
        max_rel = std::max(max_rel, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    std::printf("assign_step   serial %8.2f ms | omp(%d) %8.2f ms | speedup %.2fx | "
                "max rel stat delta %.3g\n",
                serial_ms, threads, parallel_ms, serial_ms / parallel_ms, max_rel);

    // two-phase pipeline, sequential vs worker pool
    const std::size_t L = std::max<std::size_t>(k, n / 100);
    const km::TerminationConfig config;
    const double t0 = now_ms();
    const km::RunResult seq = km::run_2pk_sequential(data.view(), k, k, L, config);
    const double seq_ms = now_ms() - t0;
    const double t1 = now_ms();
    const km::RunResult par = km::run_par2pk(data.view(), k, k, L, threads, config);
    const double par_ms = now_ms() - t1;
    const bool identical = seq.clusters.centers == par.clusters.centers &&
                           seq.clusters.weights == par.clusters.weights;
    std::printf("two-phase     serial %8.2f ms | omp(%d) %8.2f ms | speedup %.2fx | "
                "bit-identical %s\n",
                seq_ms, threads, par_ms, seq_ms / par_ms, identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
