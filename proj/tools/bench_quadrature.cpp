// Benchmark of the quadrature kernels: OpenMP rows against the serial
// reference. The two paths must agree bit for bit (fixed pairwise reduction),
// so this doubles as a determinism check.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>

#include "semitoric/systems.hpp"

namespace st = semitoric;

namespace {

double time_ms(const std::function<double()>& f, double* result) {
  auto t0 = std::chrono::steady_clock::now();
  *result = f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int grid = argc > 1 ? std::atoi(argv[1]) : 600;
  st::QuadratureOptions par, ser;
  par.grid = ser.grid = grid;
  par.parallel = true;
  ser.parallel = false;

  struct Case {
    const char* name;
    st::SystemModel model;
    double x, h;
  };
  const Case cases[] = {
      {"spin-oscillator V(0.5, 0.2)", st::SystemModel::spin_oscillator(0.5), 0.5, 0.2},
      {"spin-oscillator V(0.9, inf)", st::SystemModel::spin_oscillator(0.5), 0.9,
       std::numeric_limits<double>::infinity()},
      {"coupled-sz V(0.3, 0.1)", st::SystemModel::coupled_angular_momenta(0.5, 1.0, 2.0), 0.3,
       0.1},
  };

  std::printf("%-32s %12s %12s %9s %s\n", "case", "serial-ms", "parallel-ms", "speedup",
              "identical");
  bool all_identical = true;
  for (const Case& c : cases) {
    double vs = 0, vp = 0;
    double ts = time_ms([&] { return st::sublevel_volume(c.model, c.x, c.h, ser); }, &vs);
    double tp = time_ms([&] { return st::sublevel_volume(c.model, c.x, c.h, par); }, &vp);
    bool identical = std::memcmp(&vs, &vp, sizeof(double)) == 0;
    all_identical = all_identical && identical;
    std::printf("%-32s %12.2f %12.2f %8.2fx %s\n", c.name, ts, tp, ts / tp,
                identical ? "yes" : "NO");
  }
  return all_identical ? 0 : 1;
}
