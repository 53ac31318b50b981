// Serial vs OpenMP timings of the parallel kernels. Each pair must agree.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "dynmis/harness.hpp"
#include "dynmis/instances.hpp"
#include "dynmis/oracle.hpp"

using namespace dynmis;

namespace {

template <class Fn>
double seconds(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s %10.3f %10.3f %8.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "match" : "MISMATCH");
  failures += !same;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t scale = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1;
  std::printf("threads %d, scale %zu\n", omp_get_max_threads(), scale);
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial_s", "omp_s", "speedup");

  {
    Summary a, b;
    const double s = seconds([&] { a = star_mis_size(100, 2000 * scale, 1, ProtocolKind::Template, Execution::Serial); });
    const double p = seconds([&] { b = star_mis_size(100, 2000 * scale, 1, ProtocolKind::Template, Execution::Parallel); });
    row("star_mis_size", s, p, a.mean == b.mean);
  }
  {
    const GraphFamily graphs = [](Rng& rng) { return gnp(100, 0.1, rng); };
    const ChangeFamily changes = [](const Graph& g, Rng& rng) {
      return *random_change(g, ChangeType::EdgeInsert, rng);
    };
    Estimate a, b;
    const double s = seconds([&] { a = mean_influence_estimate(graphs, changes, 2000 * scale, 3, Execution::Serial); });
    const double p = seconds([&] { b = mean_influence_estimate(graphs, changes, 2000 * scale, 3, Execution::Parallel); });
    row("mean_influence_estimate", s, p, a.mean == b.mean);
  }
  {
    std::vector<ChangeSample> a, b;
    const auto t = ChangeType::NodeDeleteAbrupt;
    const double s = seconds([&] { a = single_change_samples(100, 0.1, t, 500 * scale, 5, ProtocolKind::FourState, Execution::Serial); });
    const double p = seconds([&] { b = single_change_samples(100, 0.1, t, 500 * scale, 5, ProtocolKind::FourState, Execution::Parallel); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].metrics.broadcasts == b[i].metrics.broadcasts;
    row("single_change_samples", s, p, same);
  }
  {
    Rng rng(9);
    const Graph g = gnp(10 + (scale > 1), 0.4, rng);
    std::uint64_t a = 0, b = 0;
    const double s = seconds([&] { a = brute_force_cc_opt(g); });
    const double p = seconds([&] { b = brute_force_cc_opt_parallel(g); });
    row("brute_force_cc_opt", s, p, a == b);
  }
  return failures == 0 ? 0 : 1;
}
