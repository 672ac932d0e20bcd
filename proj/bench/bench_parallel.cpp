// Serial reference vs OpenMP kernels on cohort simulation and batch IoU.
//   asmctl_bench [runs_per_cohort=200] [repeats=3]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "asmctl/parallel.hpp"
#include "asmctl/reference_plan.hpp"

using namespace asmctl;

namespace {

template <typename F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-18s serial %9.4f s  openmp %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int runs = argc > 1 ? std::atoi(argv[1]) : 200;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const AssemblyPlan plan = reference_plan();
  const std::vector<CohortSpec> cohorts{{PaceProfile::fast(), runs}, {PaceProfile::slow(), runs}};
  const LagModel lag = UniformJitterLag{0, 1000};
  const NoiseModel noise{0.1, 0.05, 1};

  std::printf("threads %d, %d runs per cohort, best of %d\n", omp_get_max_threads(), runs, repeats);

  std::vector<RunLabels> ser;
  std::vector<RunLabels> par;
  const double t_ser = best_of(repeats, [&] { ser = simulate_cohorts_serial(plan, EngineConfig{}, cohorts, lag, noise, 0); });
  const double t_par = best_of(repeats, [&] { par = simulate_cohorts(plan, EngineConfig{}, cohorts, lag, noise, 0); });
  row("simulate_cohorts", t_ser, t_par, ser == par);

  // Tile the labels so the IoU kernel has enough work to time.
  std::vector<Timeline> pred;
  std::vector<Timeline> truth;
  for (int k = 0; k < 200; ++k) {
    for (const auto& l : par) {
      pred.push_back(l.predicted);
      truth.push_back(l.truth);
    }
  }
  std::vector<IoUVector> a;
  std::vector<IoUVector> b;
  const double i_ser = best_of(repeats, [&] { a = batch_timeline_iou_serial(pred, truth); });
  const double i_par = best_of(repeats, [&] { b = batch_timeline_iou(pred, truth); });
  row("batch_timeline_iou", i_ser, i_par, a == b);
  return ser == par && a == b ? 0 : 1;
}
