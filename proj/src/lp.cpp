#include "fermitheta/lp.hpp"

#include "fermitheta/errors.hpp"

namespace fermitheta {

LpResult maximize_simplex(const std::vector<std::vector<mpq_class>>& a, const std::vector<mpq_class>& b,
                          const std::vector<mpq_class>& c) {
  const std::size_t rows = a.size();
  const std::size_t cols = c.size();
  if (b.size() != rows) throw InputError("right-hand side length mismatch");
  for (const auto& row : a) {
    if (row.size() != cols) throw InputError("constraint row length mismatch");
  }
  for (const auto& v : b) {
    if (sgn(v) < 0) throw InputError("simplex start needs b >= 0");
  }

  // Tableau columns: structural 0..cols-1, slacks cols..cols+rows-1, rhs last.
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<mpq_class>> t(rows, std::vector<mpq_class>(width, 0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = a[i][j];
    t[i][cols + i] = 1;
    t[i][width - 1] = b[i];
    basis[i] = cols + i;
  }
  // Reduced costs: objective row z_j = c_j - (c_B B^-1 A)_j, starts at c.
  std::vector<mpq_class> z(width, 0);
  for (std::size_t j = 0; j < cols; ++j) z[j] = c[j];

  LpResult result{LpStatus::optimal, {}, 0, 0};
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (sgn(z[j]) > 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = rows;
    mpq_class best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      mpq_class ratio = t[i][width - 1] / t[i][enter];
      if (leave == rows || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows) {
      result.status = LpStatus::unbounded;
      return result;
    }

    const mpq_class pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      const mpq_class f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    const mpq_class f = z[enter];
    for (std::size_t j = 0; j < width; ++j) z[j] -= f * t[leave][j];
    basis[leave] = enter;
    ++result.pivots;
  }

  result.x.assign(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) result.x[basis[i]] = t[i][width - 1];
  }
  result.objective = 0;
  for (std::size_t j = 0; j < cols; ++j) result.objective += c[j] * result.x[j];
  return result;
}

}  // namespace fermitheta
