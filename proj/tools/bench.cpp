// Serial vs OpenMP throughput for the hot kernels (match scan, pair
// histogram) and the end-to-end paths built on them. Median-of-5 wall times.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include "bitmarket/engine.hpp"
#include "bitmarket/ensemble.hpp"
#include "bitmarket/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bitmarket;
namespace chrono = std::chrono;

namespace {

template <typename F>
double median_ms(F&& body, int reps = 5) {
    body();  // warm up
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = chrono::steady_clock::now();
        body();
        const auto t1 = chrono::steady_clock::now();
        times.push_back(chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

void row(const char* name, double serial_ms, double omp_ms) {
    std::printf("%-44s %10.3f %10.3f %8.2fx\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms);
}

std::vector<std::uint64_t> random_words(RandomSource& rng, std::size_t n) {
    std::vector<std::uint64_t> words(n);
    for (auto& w : words) w = rng.next() & 0x3ff;  // k = 10
    return words;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; 'openmp' columns run the serial path\n\n");
#endif
    std::printf("%-44s %10s %10s %8s\n", "kernel", "serial ms", "openmp ms",
                "speedup");

    RandomSource rng(1);

    for (auto [nc, np] : {std::pair<int, int>{1000, 100}, {1000, 1000}, {10000, 1000}}) {
        const auto needs = random_words(rng, static_cast<std::size_t>(nc));
        const auto products = random_words(rng, static_cast<std::size_t>(np));
        std::vector<kernels::MatchScan> out(needs.size());
        char name[64];
        std::snprintf(name, sizeof name, "scan_matches  N_c=%d N_p=%d (x50)", nc, np);
        const double s = median_ms([&] {
            for (int i = 0; i < 50; ++i)
                kernels::scan_matches_serial(needs, products, 10, out);
        });
        const double p = median_ms([&] {
            for (int i = 0; i < 50; ++i)
                kernels::scan_matches_omp(needs, products, 10, out);
        });
        row(name, s, p);
    }

    for (int n : {1000, 4000}) {
        const auto words = random_words(rng, static_cast<std::size_t>(n));
        char name[64];
        std::snprintf(name, sizeof name, "overlap_pair_counts  n=%d (x10)", n);
        const double s = median_ms([&] {
            for (int i = 0; i < 10; ++i)
                (void)kernels::overlap_pair_counts_serial(words, 10);
        });
        const double p = median_ms([&] {
            for (int i = 0; i < 10; ++i)
                (void)kernels::overlap_pair_counts_omp(words, 10);
        });
        row(name, s, p);
    }

    {
        SimConfig cfg;  // reference parameters
        cfg.steps = 500;
        RunOptions serial_opts, omp_opts;
        serial_opts.backend = kernels::Backend::serial;
        serial_opts.record_customer_maps = false;
        serial_opts.hist_stride = 0;
        omp_opts = serial_opts;
        omp_opts.backend = kernels::Backend::openmp;
        const double s = median_ms([&] { (void)run(cfg, serial_opts); });
        const double p = median_ms([&] { (void)run(cfg, omp_opts); });
        row("run  reference config, 500 steps", s, p);
    }

    {
        SimConfig cfg;
        cfg.steps = 300;
        const double s = median_ms(
            [&] { (void)run_seeds(cfg, 8, 0, kernels::Backend::serial); }, 3);
        const double p = median_ms(
            [&] { (void)run_seeds(cfg, 8, 0, kernels::Backend::openmp); }, 3);
        row("run_seeds  8 seeds, 300 steps", s, p);
    }

    return 0;
}
