#pragma once

#include <Eigen/Dense>

namespace tvreg::linalg {

/// Relative ridge added to every weighted normal matrix: eps * tr(A)/n * I.
inline constexpr double kRidge = 1e-12;
/// Stabilized normal matrices with a larger condition number are rejected.
inline constexpr double kMaxCondition = 1e12;

/// Solves the symmetric positive semi-definite system A x = b after ridge
/// stabilization. Returns false (leaving `x` untouched) when the stabilized
/// matrix is singular or its condition number exceeds kMaxCondition.
bool solve_normal(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& x);

bool solve_normal(const Eigen::Matrix3d& a, const Eigen::Vector3d& b, Eigen::Vector3d& x);

}  // namespace tvreg::linalg
