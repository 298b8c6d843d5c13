#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace gpstop {

/// Dynamic time warping distance: square root of the minimal accumulated
/// squared-difference cost over monotone alignment paths with step set
/// {(1,0),(0,1),(1,1)}, by the O(mn) dynamic program. No warping window.
double dtw_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b);

/// Optimal alignment path as (index into a, index into b) pairs from (0,0)
/// to (m-1,n-1). Ties during backtracking prefer the diagonal step.
std::vector<std::pair<Eigen::Index, Eigen::Index>> dtw_path(
    const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace gpstop
