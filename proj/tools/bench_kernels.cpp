// Wall-time comparison of the OpenMP kernels against their serial reference
// implementations. The numbers must agree bitwise; the timings show what the
// parallel forms buy on this machine.

#include <chrono>
#include <cstdio>

#include "gibbsinf/kernels.hpp"
#include "gibbsinf/posterior.hpp"
#include "gibbsinf/sampling.hpp"

using namespace gibbsinf;

namespace {

template <class F>
double time_ms(F&& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, match ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
    // node likelihood scan over the Markov grid
    const ParamFamily grid = family_markov_2x2(0.2, 0.8, 21, 0.2, 0.8, 21);
    SeededStream s{7, 0};
    const Word y = sample_orbit(grid.measure(grid.node_at({0.5, 0.5})), 2000, s);
    std::vector<double> a, b;
    const double t1s = time_ms([&] { a = node_cylinder_loglik_serial(grid, y); }, 3);
    const double t1p = time_ms([&] { b = node_cylinder_loglik(grid, y); }, 3);
    report("node_cylinder_loglik", t1s, t1p, a == b);

    // annealed word-tree sums
    const ParamFamily coc = family_cocycle_grid(0.1, 3, {0.5, 0.5});
    const std::vector<int> n_list = {4, 8, 12, 16, 20};
    std::vector<double> c, d;
    const double t2s = time_ms([&] { c = annealed_log_norm_sums_serial(coc.cocycles[1], coc.measure(1), n_list); }, 1);
    const double t2p = time_ms([&] { d = annealed_log_norm_sums(coc.cocycles[1], coc.measure(1), n_list); }, 1);
    report("annealed_log_norm_sums", t2s, t2p, c == d);

    // Monte Carlo quenched samples
    std::vector<double> e, f;
    const double t3s = time_ms([&] { e = mc_log_norm_samples_serial(coc.cocycles[1], coc.measure(1), 2000, 512, SeededStream{11, 0}); }, 1);
    const double t3p = time_ms([&] { f = mc_log_norm_samples(coc.cocycles[1], coc.measure(1), 2000, 512, SeededStream{11, 0}); }, 1);
    report("mc_log_norm_samples", t3s, t3p, e == f);

    // Monte Carlo log-moment across the cocycle grid
    LossSpec loss;
    loss.mc_samples = 256;
    loss.mc_stream = SeededStream{13, 0};
    loss.phi = [&coc](int node, int, const Word& x, const Word&) {
        return log_product_norm(coc.cocycles[static_cast<std::size_t>(node)], x);
    };
    std::vector<double> g, h, se;
    const double t4s = time_ms([&] { mc_log_moments_serial(coc, loss, y, 400, g, &se); }, 1);
    const double t4p = time_ms([&] { mc_log_moments(coc, loss, y, 400, h, &se); }, 1);
    report("mc_log_moments", t4s, t4p, g == h);
    return 0;
}
