#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qecbound/linalg.hpp"

namespace qecbound {

class QuantumChannel;

// Density operator with named tensor factors. Construction checks
// Hermiticity, positivity (eigenvalues >= -kPsdClip) and tr <= 1;
// states with trace below one are kept and reported as subnormalized.
class MultipartiteState {
  public:
    // The trivial one-dimensional state with no factors.
    MultipartiteState() : m_(Mat::Identity(1, 1), {}) {}
    MultipartiteState(ComplexMatrix m, std::vector<std::string> labels);

    const ComplexMatrix &matrix() const { return m_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t num_factors() const { return labels_.size(); }
    std::size_t index_of(std::string_view label) const;
    std::size_t dim_of(std::string_view label) const { return m_.dims()[index_of(label)]; }
    std::size_t dim() const { return m_.size(); }
    double trace() const { return m_.trace().real(); }
    bool subnormalized() const { return trace() < 1.0 - kHermTol; }

    // Partial trace onto the listed labels (original relative order kept).
    MultipartiteState reduce(std::span<const std::string> keep) const;
    MultipartiteState reduce(std::initializer_list<std::string> keep) const;
    // Factor reordering; order must name every label exactly once.
    MultipartiteState reorder(std::span<const std::string> order) const;
    MultipartiteState reorder(std::initializer_list<std::string> order) const;
    MultipartiteState relabel(std::vector<std::string> labels) const;

    friend MultipartiteState tensor(const MultipartiteState &a, const MultipartiteState &b);
    friend MultipartiteState apply_channel(const QuantumChannel &ch, const MultipartiteState &state,
                                           std::string_view target);
    friend MultipartiteState choi_from_channel(const QuantumChannel &ch);

  private:
    struct Trusted {};
    // For results of validity-preserving operations.
    MultipartiteState(Trusted, ComplexMatrix m, std::vector<std::string> labels);
    ComplexMatrix m_;
    std::vector<std::string> labels_;
};

MultipartiteState tensor(const MultipartiteState &a, const MultipartiteState &b);

// Completely positive trace-preserving map in Kraus form. Kraus operators
// are d_out x d_in and must satisfy sum K^dag K = I within tp_tol.
class QuantumChannel {
  public:
    explicit QuantumChannel(std::vector<Mat> kraus, double tp_tol = kHermTol);

    const std::vector<Mat> &kraus() const { return kraus_; }
    std::size_t d_in() const { return d_in_; }
    std::size_t d_out() const { return d_out_; }
    // Action on a d_in x d_in operator.
    Mat apply(const Mat &rho) const;
    // Largest entry of |sum K^dag K - I|.
    double tp_defect() const;

  private:
    std::vector<Mat> kraus_;
    std::size_t d_in_ = 0;
    std::size_t d_out_ = 0;
};

// J1..J3 couple a system qubit to the bath through X(x)X, Y(x)Y, Z(x)Z.
struct HeisenbergCouplings {
    std::array<double, 3> j_left{};
    std::array<double, 3> j_right{};
};

// Phi_r on factors (a, b) each of dimension 2^r.
MultipartiteState max_entangled(std::size_t r, std::string a = "A", std::string b = "B");
// pi_r on a single factor.
MultipartiteState completely_mixed(std::size_t r, std::string label = "A");
// 2^-C sum_j |j><j| (x) |j><j|.
MultipartiteState classical_corr(std::size_t c_bits, std::string m = "M", std::string r = "R");
// Omega_C (x) Phi_Q on factors Mc, Rc, Mq, Rq.
MultipartiteState hybrid_source(std::size_t c_bits, std::size_t q_qubits);

QuantumChannel identity_channel(std::size_t d);
QuantumChannel dephasing(double p);
QuantumChannel amplitude_damping(double gamma);
QuantumChannel tensor_channel(std::span<const QuantumChannel> chs);
QuantumChannel tensor_channel(std::initializer_list<QuantumChannel> chs);

// Two system qubits (i, i+1) coupled to one bath qubit E prepared in
// diag(1-p, p); the bath is traced out after evolving for time t.
QuantumChannel heisenberg_channel(double p, double t, const HeisenbergCouplings &j);
// The three-qubit interaction Hamiltonian on (i, i+1, E).
ComplexMatrix heisenberg_hamiltonian(const HeisenbergCouplings &j);

// (id (x) ch)(Phi) on factors (A, B); A is the reference copy of the input.
MultipartiteState choi_from_channel(const QuantumChannel &ch);
// Inverse map: Kraus operators from the spectrum of d_in * rho. The input
// marginal must be completely mixed within 1e-8 (std::domain_error otherwise).
QuantumChannel channel_from_choi(const MultipartiteState &rho, std::size_t d_in, std::size_t d_out);
// sigma -> d_in tr_A[(sigma^T (x) I) rho], evaluated directly on the Choi matrix.
Mat apply_choi(const MultipartiteState &rho, std::size_t d_in, const Mat &sigma);

// Applies ch to the factor named target; other factors are untouched.
MultipartiteState apply_channel(const QuantumChannel &ch, const MultipartiteState &state, std::string_view target);

enum class NoiseKind { Dephasing, AmplitudeDamping };

// Single-qubit noise named on the command line as "dephasing" or "amp_damp".
struct NoiseSpec {
    NoiseKind kind = NoiseKind::Dephasing;
    double param = 0.0;

    QuantumChannel channel() const;
};

NoiseKind parse_noise_kind(std::string_view name);
std::string_view noise_name(NoiseKind kind);

// Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace qecbound
