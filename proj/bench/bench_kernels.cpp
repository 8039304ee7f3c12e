// Benchmark comparing the serial reference kernels with the OpenMP path on
// the two sampling-heavy stages (initial population, chain repopulation),
// and verifying that both produce identical output.
//
// Usage: bench_kernels [N]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "splitcount/engine.hpp"
#include "splitcount/graph_model.hpp"
#include "splitcount/table_model.hpp"

using namespace splitcount;

namespace {

double time_s(const auto& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <CountingModel M>
void bench_model(const std::string& name, const M& model, std::size_t n) {
    // sweeps per recorded point in the chain stage; raises arithmetic
    // density so the comparison is not dominated by state copies
    constexpr int kThinning = 4;

    std::vector<typename M::State> pop_serial, pop_parallel;
    std::vector<int> sc_serial, sc_parallel;

    // warm-up pass populates both buffers before timing
    sample_population(model, n, 7, ExecMode::Serial, 0, pop_serial, sc_serial);
    sample_population(model, n, 7, ExecMode::Parallel, 0, pop_parallel, sc_parallel);

    const double t_sample_serial = time_s(
        [&] { sample_population(model, n, 7, ExecMode::Serial, 0, pop_serial, sc_serial); });
    const double t_sample_parallel = time_s(
        [&] { sample_population(model, n, 7, ExecMode::Parallel, 0, pop_parallel, sc_parallel); });
    const bool sample_match = pop_serial == pop_parallel && sc_serial == sc_parallel;

    const int m = model.max_score();
    const int threshold = select_threshold(sc_serial, model.score_lower_bound() - 1, 0.5, m);
    auto elites = detail::take_elites<M>(pop_serial, sc_serial, threshold);
    auto screened = detail::screen_elites(model, elites);

    std::vector<typename M::State> next_serial, next_parallel;
    std::vector<int> nsc_serial, nsc_parallel;
    detail::repopulate_scored(model, screened, threshold, n, 7, 1, kThinning, ExecMode::Serial, 0,
                              next_serial, nsc_serial);
    const double t_repop_serial = time_s([&] {
        detail::repopulate_scored(model, screened, threshold, n, 7, 1, kThinning,
                                  ExecMode::Serial, 0, next_serial, nsc_serial);
    });
    const double t_repop_parallel = time_s([&] {
        detail::repopulate_scored(model, screened, threshold, n, 7, 1, kThinning,
                                  ExecMode::Parallel, 0, next_parallel, nsc_parallel);
    });
    const bool repop_match = next_serial == next_parallel && nsc_serial == nsc_parallel;

    std::printf("%-28s sample  serial %7.3fs  parallel %7.3fs  speedup %4.2fx  identical: %s\n",
                name.c_str(), t_sample_serial, t_sample_parallel,
                t_sample_serial / t_sample_parallel, sample_match ? "yes" : "NO");
    std::printf("%-28s chains  serial %7.3fs  parallel %7.3fs  speedup %4.2fx  identical: %s\n",
                "", t_repop_serial, t_repop_parallel, t_repop_serial / t_repop_parallel,
                repop_match ? "yes" : "NO");
    if (!sample_match || !repop_match) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d, N=%zu\n", omp_get_max_threads(), n);
#else
    std::printf("OpenMP not available; parallel path falls back to serial, N=%zu\n", n);
#endif
    bench_model("graph (5,6,1x11)",
                GraphModel(DegreeInstance::from_degrees({5, 6, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1})),
                n);
    std::vector<int> two(12, 2);
    bench_model("table 12x12 margins=2", TableModel(TableInstance::from_margins(two, two)), n);
    return 0;
}
