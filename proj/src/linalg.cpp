#include "tvreg/linalg.hpp"

#include <cmath>

namespace tvreg::linalg {

namespace {

template <typename Matrix, typename Vector>
bool solve_impl(const Matrix& a, const Vector& b, Vector& x) {
    const auto n = a.rows();
    const double trace = a.trace();
    if (!(trace > 0.0) || !std::isfinite(trace)) return false;
    Matrix stabilized = a;
    stabilized.diagonal().array() += kRidge * trace / static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(stabilized);
    if (eig.info() != Eigen::Success) return false;
    const auto& values = eig.eigenvalues();
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxCondition) return false;

    const auto& vectors = eig.eigenvectors();
    x = vectors * ((vectors.transpose() * b).array() / values.array()).matrix();
    return x.allFinite();
}

}  // namespace

bool solve_normal(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& x) {
    return solve_impl(a, b, x);
}

bool solve_normal(const Eigen::Matrix3d& a, const Eigen::Vector3d& b, Eigen::Vector3d& x) {
    return solve_impl(a, b, x);
}

}  // namespace tvreg::linalg
