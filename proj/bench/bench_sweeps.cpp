// Compares the serial and OpenMP sweep kernels on identical workloads.

#include <chrono>
#include <iostream>

#include "fronttrack/verify.hpp"

using namespace fronttrack;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

void bench_estimate(const char* system_id, EstimateId id, int samples) {
  auto sys = make_system(system_id);
  BoundaryLayerModel model = make_boundary_model(*sys);
  SweepSpec sw;
  sw.samples = samples;

  auto t0 = clk::now();
  EstimateReport serial = measure_estimate_serial(*sys, model, id, sw);
  double ts = seconds_since(t0);

  t0 = clk::now();
  EstimateReport parallel = measure_estimate(*sys, model, id, sw, true);
  double tp = seconds_since(t0);

  bool same = serial.sup_ratio == parallel.sup_ratio && serial.applicable == parallel.applicable;
  std::cout << system_id << " / " << to_string(id) << ": serial " << ts << " s, parallel " << tp
            << " s (" << thread_count() << " threads), speedup " << (tp > 0 ? ts / tp : 0)
            << ", results " << (same ? "identical" : "DIFFER") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  int samples = argc > 1 ? std::atoi(argv[1]) : 600;
  std::cout << "sweep benchmark, " << samples << " samples per kernel\n";
  bench_estimate("burgers", EstimateId::me, samples);
  bench_estimate("isentropic_euler", EstimateId::me, samples);
  bench_estimate("full_euler", EstimateId::iebressan, samples);
  return 0;
}
