#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tpa {

// Dimensions never exceed 16 here, so fixed-capacity storage keeps the
// inner loops free of heap traffic.
inline constexpr int kMaxDim = 16;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (int i = 0; i < out.size(); ++i) out[i] = v[static_cast<size_t>(i)];
  return out;
}

inline std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace tpa
