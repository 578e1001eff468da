#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qecbound {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

// Absolute tolerances shared by the numeric kernel.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdClip = 1e-10;

// Dense square complex matrix carrying its tensor-factor layout.
// The product of dims always equals rows() == cols().
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    // Single-factor matrix; dims = {rows}.
    explicit ComplexMatrix(Mat m);
    ComplexMatrix(Mat m, std::vector<std::size_t> dims);

    static ComplexMatrix identity(std::size_t d);
    static ComplexMatrix identity(std::vector<std::size_t> dims);
    static ComplexMatrix zero(std::vector<std::size_t> dims);
    static ComplexMatrix diag(std::span<const double> entries);
    static ComplexMatrix diag(std::initializer_list<double> entries);
    // |v><v| for a column vector v.
    static ComplexMatrix projector(const Eigen::VectorXcd &v);

    const Mat &mat() const { return m_; }
    const std::vector<std::size_t> &dims() const { return dims_; }
    std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
    cplx operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    cplx trace() const { return m_.trace(); }
    ComplexMatrix adjoint() const { return {m_.adjoint(), dims_}; }
    ComplexMatrix transpose() const { return {m_.transpose(), dims_}; }
    bool is_hermitian(double tol = kHermTol) const;
    // Same entries, new factor layout (product must match).
    ComplexMatrix with_dims(std::vector<std::size_t> dims) const;

    ComplexMatrix operator+(const ComplexMatrix &o) const;
    ComplexMatrix operator-(const ComplexMatrix &o) const;
    // Matrix product; keeps the left operand's layout.
    ComplexMatrix operator*(const ComplexMatrix &o) const;
    ComplexMatrix operator*(cplx s) const { return {m_ * s, dims_}; }
    friend ComplexMatrix operator*(cplx s, const ComplexMatrix &m) { return m * s; }

    // Largest absolute entrywise difference.
    double max_abs_diff(const ComplexMatrix &o) const;

  private:
    Mat m_;
    std::vector<std::size_t> dims_;
};

struct EigResult {
    RealVec values;  // descending
    Mat vectors;     // columns, unitary
};

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix kron(std::span<const ComplexMatrix> factors);

// Traces out every factor not listed in keep. Kept factors stay in their
// original relative order regardless of the order of keep.
ComplexMatrix partial_trace(const ComplexMatrix &m, std::span<const std::size_t> keep);
ComplexMatrix partial_trace(const ComplexMatrix &m, std::initializer_list<std::size_t> keep);

// Reorders tensor factors: factor k of the result is factor order[k] of m.
ComplexMatrix permute_factors(const ComplexMatrix &m, std::span<const std::size_t> order);

// Throws std::invalid_argument for inputs that are not Hermitian within kHermTol.
EigResult herm_eig(const ComplexMatrix &m);
RealVec herm_eigvals(const ComplexMatrix &m);

// Negative eigenvalues down to -kPsdClip are clipped, anything lower is a
// std::domain_error.
ComplexMatrix psd_sqrt(const ComplexMatrix &m);
// f applied to the spectrum of a Hermitian matrix.
template <class F>
ComplexMatrix herm_apply(const ComplexMatrix &m, F &&f) {
    EigResult e = herm_eig(m);
    RealVec v = e.values.unaryExpr(f);
    return {e.vectors * v.asDiagonal() * e.vectors.adjoint(), m.dims()};
}

double trace_norm(const ComplexMatrix &m);

// exp(-i t h) for Hermitian h.
ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix &h, double t);

}  // namespace qecbound
