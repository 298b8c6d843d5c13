#include "gpstop/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpstop {
namespace {

Eigen::MatrixXd accumulated_cost(const Eigen::Ref<const Eigen::VectorXd>& a,
                                 const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw std::invalid_argument("dtw requires non-empty inputs");
  }
  const Eigen::Index m = a.size();
  const Eigen::Index n = b.size();
  Eigen::MatrixXd acc(m, n);
  auto cost = [&](Eigen::Index i, Eigen::Index j) {
    const double d = a[i] - b[j];
    return d * d;
  };
  acc(0, 0) = cost(0, 0);
  for (Eigen::Index i = 1; i < m; ++i) acc(i, 0) = acc(i - 1, 0) + cost(i, 0);
  for (Eigen::Index j = 1; j < n; ++j) acc(0, j) = acc(0, j - 1) + cost(0, j);
  for (Eigen::Index i = 1; i < m; ++i) {
    for (Eigen::Index j = 1; j < n; ++j) {
      acc(i, j) = cost(i, j) + std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
    }
  }
  return acc;
}

}  // namespace

double dtw_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b) {
  const Eigen::MatrixXd acc = accumulated_cost(a, b);
  return std::sqrt(acc(a.size() - 1, b.size() - 1));
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> dtw_path(
    const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  const Eigen::MatrixXd acc = accumulated_cost(a, b);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> path;
  Eigen::Index i = a.size() - 1;
  Eigen::Index j = b.size() - 1;
  path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = acc(i - 1, j - 1);
      const double up = acc(i - 1, j);
      const double left = acc(i, j - 1);
      const double m = std::min({diag, up, left});
      if (diag == m) {
        --i;
        --j;
      } else if (up == m) {
        --i;
      } else {
        --j;
      }
    }
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace gpstop
