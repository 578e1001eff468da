#include "bloch_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace qecbound::oracle {

namespace {

using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

Mat sqrt_psd(const Mat &m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
    const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double bloch_objective(const Mat &rho_ab, const Eigen::Vector3d &r) {
    Eigen::Matrix2cd sigma;
    sigma << cplx(1.0 + r(2), 0.0), cplx(r(0), -r(1)), cplx(r(0), r(1)), cplx(1.0 - r(2), 0.0);
    sigma *= 0.5;
    const Eigen::Index d_a = rho_ab.rows() / 2;
    const Mat root_sigma = sqrt_psd(sigma);
    Mat lifted = Mat::Zero(rho_ab.rows(), rho_ab.cols());
    for (Eigen::Index a = 0; a < d_a; ++a) {
        lifted.block(2 * a, 2 * a, 2, 2) = root_sigma;
    }
    Eigen::JacobiSVD<Mat> svd(sqrt_psd(rho_ab) * lifted);
    return svd.singularValues().sum();
}

BlochOptimum hmax_qubit_grid(const Mat &rho_ab, double resolution) {
    BlochOptimum best;
    double best_g = -1.0;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double half_width = 1.0;
    double step = 0.1;
    while (true) {
        const int k = static_cast<int>(std::round(half_width / step));
        for (int i = -k; i <= k; ++i) {
            for (int j = -k; j <= k; ++j) {
                for (int l = -k; l <= k; ++l) {
                    const Eigen::Vector3d r = center + step * Eigen::Vector3d(i, j, l);
                    if (r.norm() > 1.0 + 1e-12) {
                        continue;
                    }
                    const double g = bloch_objective(rho_ab, r);
                    ++best.evaluations;
                    if (g > best_g) {
                        best_g = g;
                        best.r = r;
                    }
                }
            }
        }
        if (step <= resolution * (1.0 + 1e-9)) {
            break;
        }
        center = best.r;
        half_width = 2.0 * step;
        step = std::max(resolution, step / 5.0);
    }
    best.value = 2.0 * std::log2(best_g);
    return best;
}

}  // namespace qecbound::oracle
