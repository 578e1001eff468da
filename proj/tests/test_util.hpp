#pragma once

#include <random>

#include "qecbound/linalg.hpp"

namespace testutil {

using qecbound::cplx;
using qecbound::Mat;

inline Mat random_complex(std::mt19937_64 &rng, Eigen::Index d) {
    std::normal_distribution<double> g;
    Mat m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline Mat random_hermitian(std::mt19937_64 &rng, Eigen::Index d) {
    const Mat m = random_complex(rng, d);
    return 0.5 * (m + m.adjoint());
}

inline Mat random_density(std::mt19937_64 &rng, Eigen::Index d) {
    const Mat m = random_complex(rng, d);
    const Mat p = m * m.adjoint();
    return p / p.trace().real();
}

inline Mat random_unitary(std::mt19937_64 &rng, Eigen::Index d) {
    Eigen::HouseholderQR<Mat> qr(random_complex(rng, d));
    return qr.householderQ() * Mat::Identity(d, d);
}

inline double max_diff(const Mat &a, const Mat &b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testutil
