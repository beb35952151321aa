#pragma once

#include <cmath>

namespace bverify {

// Neumaier variant of Kahan summation.  All quadrature accumulation runs
// through this in a fixed node order, so results are reproducible bit for bit
// and immune to benign cancellation in long sums.
struct CompensatedSum {
  double s{0.0};
  double c{0.0};

  void add(double x) {
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }

  double value() const { return s + c; }
};

}  // namespace bverify
