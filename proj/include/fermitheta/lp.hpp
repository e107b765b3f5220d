#pragma once

#include <vector>

#include <gmpxx.h>

namespace fermitheta {

enum class LpStatus { optimal, unbounded };

struct LpResult {
  LpStatus status;
  std::vector<mpq_class> x;
  mpq_class objective;
  int pivots = 0;
};

// Exact dense simplex for: maximize c.x subject to A x <= b, x >= 0, with
// b >= 0 so the origin is a feasible basis. Bland's rule guarantees
// termination.
LpResult maximize_simplex(const std::vector<std::vector<mpq_class>>& a, const std::vector<mpq_class>& b,
                          const std::vector<mpq_class>& c);

}  // namespace fermitheta
