#pragma once

#include <Eigen/Dense>

namespace cbody {

// Largest ambient dimension of any shipped descriptor embedding (Sym(3) uses 9).
inline constexpr int kMaxEmbed = 12;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Small stack-allocated vectors/matrices sized by the descriptor embedding.
using VecM = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxEmbed, 1>;
using MatM3 = Eigen::Matrix<double, Eigen::Dynamic, 3, 0, kMaxEmbed, 3>;

}  // namespace cbody
