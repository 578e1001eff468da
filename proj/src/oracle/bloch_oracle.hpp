#pragma once

#include <Eigen/Dense>

namespace qecbound::oracle {

struct BlochOptimum {
    double value = 0.0;  // 2 log2 of the best objective
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    long evaluations = 0;
};

// ||sqrt(rho) sqrt(I (x) sigma)||_1 by SVD, sigma = (I + r.sigma)/2 on the last qubit.
double bloch_objective(const Eigen::MatrixXcd &rho_ab, const Eigen::Vector3d &r);

// Coarse-to-fine grid search over the Bloch ball; the last pass uses `resolution`.
BlochOptimum hmax_qubit_grid(const Eigen::MatrixXcd &rho_ab, double resolution = 1e-3);

}  // namespace qecbound::oracle
