#pragma once

// Test-only oracle: Wootters concurrence of the explicit 4x4 Werner density
// matrix, independent of the closed form in entanglement.hpp.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

/// rho = W W^T with W = [sqrt((1-V)/4) e_0..e_3 | sqrt(V) psi-], psi- = (|01> - |10>)/sqrt(2).
/// The Wootters lambdas are the singular values of tau = W^T (sy x sy) W, which
/// avoids square roots of near-zero eigenvalues.
inline double werner_concurrence(double v) {
    Eigen::Matrix<double, 4, 5> w = Eigen::Matrix<double, 4, 5>::Zero();
    const double a = std::sqrt((1.0 - v) / 4.0);
    for (int i = 0; i < 4; ++i) w(i, i) = a;
    const double b = std::sqrt(v) / std::sqrt(2.0);
    w(1, 4) = b;
    w(2, 4) = -b;

    // sigma_y x sigma_y in the computational basis (real)
    Eigen::Matrix4d flip = Eigen::Matrix4d::Zero();
    flip(0, 3) = -1.0;
    flip(3, 0) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;

    const Eigen::Matrix<double, 5, 5> tau = w.transpose() * flip * w;
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(tau);
    auto s = svd.singularValues();  // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

/// The same density matrix, for trace/hermiticity sanity checks.
inline Eigen::Matrix4d werner_density(double v) {
    Eigen::Vector4d psi(0.0, 1.0, -1.0, 0.0);
    psi /= std::sqrt(2.0);
    return (1.0 - v) / 4.0 * Eigen::Matrix4d::Identity() + v * psi * psi.transpose();
}

}  // namespace oracle
