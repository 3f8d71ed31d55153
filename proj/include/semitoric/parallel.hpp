#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace semitoric {

/// In-place pairwise tree combination with a fixed order. The result does
/// not depend on how the entries were produced (thread count, scheduling).
inline double pairwise_sum(std::vector<double>& buf) {
  if (buf.empty()) return 0.0;
  std::size_t n = buf.size();
  for (std::size_t gap = 1; gap < n; gap *= 2)
    for (std::size_t i = 0; i + gap < n; i += 2 * gap) buf[i] += buf[i + gap];
  return buf[0];
}

/// Evaluates row(i) for i in [0, n), in parallel when requested and OpenMP is
/// available, then combines pairwise. Bit-identical to the serial path.
template <class F>
double row_sum(int n, bool parallel, F&& row) {
  std::vector<double> vals(static_cast<std::size_t>(n > 0 ? n : 0));
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = row(i);
    return pairwise_sum(vals);
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = row(i);
  return pairwise_sum(vals);
}

}  // namespace semitoric
