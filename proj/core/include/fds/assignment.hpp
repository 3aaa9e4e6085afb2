#pragma once

#include <vector>

#include "fds/linalg.hpp"

namespace fds {

// Minimum-cost perfect matching on a square cost matrix (Hungarian method
// with row/column potentials, O(n^3)). Returns col_of_row.
std::vector<Index> solve_assignment(const Mat& cost);

}  // namespace fds
