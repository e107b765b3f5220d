#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace fermitheta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitInternal = 4;

struct TableRow {
  int n;
  int q;
  mpq_class theta;
  std::string theta_2dp;
  mpz_class binom;  // C(n/2, q/2)
  bool equal;
};

// Every even n <= max_n and every q in q_list with 2 <= q <= n.
std::vector<TableRow> reproduce_table_rows(int max_n, const std::vector<int>& q_list);
// CSV: n,q,theta_exact_rational,theta_2dp,binom,equal_flag
std::string reproduce_table(int max_n, const std::vector<int>& q_list);
std::string table_csv(const std::vector<TableRow>& rows);

// Entry point. Exit codes: 0 ok, 1 a verdict failed, 2 usage, 3 capacity, 4 internal.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fermitheta::cli
