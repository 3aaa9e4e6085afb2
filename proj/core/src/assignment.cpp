#include "fds/assignment.hpp"

#include <limits>

#include "fds/errors.hpp"

namespace fds {

std::vector<Index> solve_assignment(const Mat& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw ShapeError("assignment needs a square cost matrix");
  if (n == 0) return {};
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based with a virtual column 0, as in the classic shortest augmenting
  // path formulation.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> row_of_col(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  std::vector<double> min_slack(static_cast<std::size_t>(n + 1));
  std::vector<char> used(static_cast<std::size_t>(n + 1));

  for (Index row = 1; row <= n; ++row) {
    row_of_col[0] = row;
    Index col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[static_cast<std::size_t>(col0)] = 1;
      const Index r = row_of_col[static_cast<std::size_t>(col0)];
      double delta = kInf;
      Index col1 = 0;
      for (Index c = 1; c <= n; ++c) {
        const auto cs = static_cast<std::size_t>(c);
        if (used[cs]) continue;
        const double reduced = cost(r - 1, c - 1) - u[static_cast<std::size_t>(r)] - v[cs];
        if (reduced < min_slack[cs]) {
          min_slack[cs] = reduced;
          way[cs] = col0;
        }
        if (min_slack[cs] < delta) {
          delta = min_slack[cs];
          col1 = c;
        }
      }
      for (Index c = 0; c <= n; ++c) {
        const auto cs = static_cast<std::size_t>(c);
        if (used[cs]) {
          u[static_cast<std::size_t>(row_of_col[cs])] += delta;
          v[cs] -= delta;
        } else {
          min_slack[cs] -= delta;
        }
      }
      col0 = col1;
    } while (row_of_col[static_cast<std::size_t>(col0)] != 0);
    do {
      const Index col1 = way[static_cast<std::size_t>(col0)];
      row_of_col[static_cast<std::size_t>(col0)] = row_of_col[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<Index> col_of_row(static_cast<std::size_t>(n));
  for (Index c = 1; c <= n; ++c) col_of_row[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(c)] - 1)] = c - 1;
  return col_of_row;
}

}  // namespace fds
