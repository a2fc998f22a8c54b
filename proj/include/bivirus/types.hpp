#pragma once

#include <Eigen/Dense>

namespace bivirus {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Half-width of the band inside which a spectral abscissa counts as zero.
inline constexpr double kCriticalBand = 1e-9;

}  // namespace bivirus
