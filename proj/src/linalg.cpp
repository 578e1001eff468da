#include "qecbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace qecbound {

namespace {

std::size_t product(const std::vector<std::size_t> &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_layout(const Mat &m, const std::vector<std::size_t> &dims) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("ComplexMatrix must be square");
    }
    if (product(dims) != static_cast<std::size_t>(m.rows())) {
        throw std::invalid_argument("ComplexMatrix dims product " + std::to_string(product(dims)) +
                                    " != side length " + std::to_string(m.rows()));
    }
}

// Maps every index of the permuted space to the corresponding index of the
// original space.
std::vector<std::size_t> permutation_index_map(const std::vector<std::size_t> &dims,
                                               std::span<const std::size_t> order) {
    const std::size_t k = dims.size();
    std::vector<std::size_t> old_stride(k, 1);
    for (std::size_t f = k; f-- > 1;) {
        old_stride[f - 1] = old_stride[f] * dims[f];
    }
    std::vector<std::size_t> new_dims(k);
    for (std::size_t f = 0; f < k; ++f) {
        new_dims[f] = dims[order[f]];
    }
    const std::size_t total = product(dims);
    std::vector<std::size_t> map(total);
    std::vector<std::size_t> digit(k, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t old = 0;
        for (std::size_t f = 0; f < k; ++f) {
            old += digit[f] * old_stride[order[f]];
        }
        map[idx] = old;
        for (std::size_t f = k; f-- > 0;) {
            if (++digit[f] < new_dims[f]) {
                break;
            }
            digit[f] = 0;
        }
    }
    return map;
}

}  // namespace

ComplexMatrix::ComplexMatrix(Mat m) : m_(std::move(m)), dims_{static_cast<std::size_t>(m_.rows())} {
    check_layout(m_, dims_);
}

ComplexMatrix::ComplexMatrix(Mat m, std::vector<std::size_t> dims) : m_(std::move(m)), dims_(std::move(dims)) {
    check_layout(m_, dims_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t d) { return ComplexMatrix(Mat::Identity(d, d)); }

ComplexMatrix ComplexMatrix::identity(std::vector<std::size_t> dims) {
    const auto d = static_cast<Eigen::Index>(product(dims));
    return {Mat::Identity(d, d), std::move(dims)};
}

ComplexMatrix ComplexMatrix::zero(std::vector<std::size_t> dims) {
    const auto d = static_cast<Eigen::Index>(product(dims));
    return {Mat::Zero(d, d), std::move(dims)};
}

ComplexMatrix ComplexMatrix::diag(std::span<const double> entries) {
    const auto d = static_cast<Eigen::Index>(entries.size());
    Mat m = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        m(i, i) = entries[static_cast<std::size_t>(i)];
    }
    return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::diag(std::initializer_list<double> entries) {
    return diag(std::span<const double>(entries.begin(), entries.size()));
}

ComplexMatrix ComplexMatrix::projector(const Eigen::VectorXcd &v) { return ComplexMatrix(Mat(v * v.adjoint())); }

bool ComplexMatrix::is_hermitian(double tol) const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol; }

ComplexMatrix ComplexMatrix::with_dims(std::vector<std::size_t> dims) const { return {m_, std::move(dims)}; }

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &o) const {
    if (size() != o.size()) {
        throw std::invalid_argument("matrix sum: size mismatch");
    }
    return {m_ + o.m_, dims_};
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &o) const {
    if (size() != o.size()) {
        throw std::invalid_argument("matrix difference: size mismatch");
    }
    return {m_ - o.m_, dims_};
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &o) const {
    if (size() != o.size()) {
        throw std::invalid_argument("matrix product: size mismatch");
    }
    return {m_ * o.m_, dims_};
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &o) const {
    if (size() != o.size()) {
        throw std::invalid_argument("max_abs_diff: size mismatch");
    }
    if (size() == 0) {
        return 0.0;
    }
    return (m_ - o.m_).cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const Mat &am = a.mat();
    const Mat &bm = b.mat();
    const Eigen::Index br = bm.rows();
    Mat out(am.rows() * br, am.cols() * br);
    for (Eigen::Index i = 0; i < am.rows(); ++i) {
        for (Eigen::Index j = 0; j < am.cols(); ++j) {
            out.block(i * br, j * br, br, br) = am(i, j) * bm;
        }
    }
    std::vector<std::size_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return {std::move(out), std::move(dims)};
}

ComplexMatrix kron(std::span<const ComplexMatrix> factors) {
    if (factors.empty()) {
        return {Mat::Identity(1, 1), {}};
    }
    ComplexMatrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        out = kron(out, factors[i]);
    }
    return out;
}

ComplexMatrix permute_factors(const ComplexMatrix &m, std::span<const std::size_t> order) {
    const auto &dims = m.dims();
    if (order.size() != dims.size()) {
        throw std::invalid_argument("permute_factors: order has wrong length");
    }
    std::vector<bool> seen(dims.size(), false);
    for (std::size_t f : order) {
        if (f >= dims.size() || seen[f]) {
            throw std::invalid_argument("permute_factors: order is not a permutation");
        }
        seen[f] = true;
    }
    const auto map = permutation_index_map(dims, order);
    const auto d = static_cast<Eigen::Index>(map.size());
    Mat out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const auto oj = static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)]);
        for (Eigen::Index i = 0; i < d; ++i) {
            out(i, j) = m.mat()(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]), oj);
        }
    }
    std::vector<std::size_t> new_dims(dims.size());
    for (std::size_t f = 0; f < dims.size(); ++f) {
        new_dims[f] = dims[order[f]];
    }
    return {std::move(out), std::move(new_dims)};
}

ComplexMatrix partial_trace(const ComplexMatrix &m, std::span<const std::size_t> keep) {
    const auto &dims = m.dims();
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t f : keep) {
        if (f >= dims.size()) {
            throw std::invalid_argument("partial_trace: factor index " + std::to_string(f) + " out of range");
        }
        kept[f] = true;
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> kept_dims;
    std::size_t dk = 1;
    for (std::size_t f = 0; f < dims.size(); ++f) {
        if (kept[f]) {
            order.push_back(f);
            kept_dims.push_back(dims[f]);
            dk *= dims[f];
        }
    }
    for (std::size_t f = 0; f < dims.size(); ++f) {
        if (!kept[f]) {
            order.push_back(f);
        }
    }
    const ComplexMatrix p = permute_factors(m, order);
    const auto kd = static_cast<Eigen::Index>(dk);
    const Eigen::Index td = static_cast<Eigen::Index>(m.size()) / kd;
    Mat out = Mat::Zero(kd, kd);
    for (Eigen::Index t = 0; t < td; ++t) {
        for (Eigen::Index j = 0; j < kd; ++j) {
            for (Eigen::Index i = 0; i < kd; ++i) {
                out(i, j) += p.mat()(i * td + t, j * td + t);
            }
        }
    }
    return {std::move(out), std::move(kept_dims)};
}

ComplexMatrix partial_trace(const ComplexMatrix &m, std::initializer_list<std::size_t> keep) {
    return partial_trace(m, std::span<const std::size_t>(keep.begin(), keep.size()));
}

EigResult herm_eig(const ComplexMatrix &m) {
    if (!m.is_hermitian()) {
        throw std::invalid_argument("herm_eig: matrix is not Hermitian");
    }
    const Mat h = 0.5 * (m.mat() + m.mat().adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const Eigen::Index d = h.rows();
    EigResult out{RealVec(d), Mat(d, d)};
    for (Eigen::Index i = 0; i < d; ++i) {
        out.values(i) = es.eigenvalues()(d - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
    }
    return out;
}

RealVec herm_eigvals(const ComplexMatrix &m) {
    if (!m.is_hermitian()) {
        throw std::invalid_argument("herm_eigvals: matrix is not Hermitian");
    }
    const Mat h = 0.5 * (m.mat() + m.mat().adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

ComplexMatrix psd_sqrt(const ComplexMatrix &m) {
    EigResult e = herm_eig(m);
    if (e.values.size() > 0 && e.values.minCoeff() < -kPsdClip) {
        throw std::domain_error("psd_sqrt: eigenvalue " + std::to_string(e.values.minCoeff()) + " below clip threshold");
    }
    RealVec s = e.values.unaryExpr([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
    return {e.vectors * s.asDiagonal() * e.vectors.adjoint(), m.dims()};
}

double trace_norm(const ComplexMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    if (m.is_hermitian(1e-13)) {
        return herm_eigvals(m).cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Mat> svd(m.mat());
    return svd.singularValues().sum();
}

ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix &h, double t) {
    EigResult e = herm_eig(h);
    Eigen::VectorXcd phases(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        phases(i) = std::exp(cplx(0.0, -t * e.values(i)));
    }
    return {e.vectors * phases.asDiagonal() * e.vectors.adjoint(), h.dims()};
}

}  // namespace qecbound
