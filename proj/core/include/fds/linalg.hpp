#pragma once

#include <Eigen/Core>

namespace fds {

using Vec = Eigen::VectorXd;
// Point clouds are stored one point per row: [n x d].
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline bool all_finite(const Eigen::Ref<const Mat>& m) { return m.allFinite(); }

}  // namespace fds
