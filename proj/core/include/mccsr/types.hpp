#ifndef MCCSR_TYPES_HPP
#define MCCSR_TYPES_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace mccsr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Plane = Eigen::ArrayXXd;  // rows = image height, cols = image width
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

}  // namespace mccsr

#endif
