#pragma once

#include <span>
#include <string>
#include <vector>

#include "qecbound/quantum.hpp"

namespace qecbound {

struct SolverConfig {
    // Stop once the barrier gap bound d_B * mu falls below 1e-3 * tol.
    double tol = 1e-9;
    // Cap on Newton steps across all barrier stages.
    int max_iter = 5000;
    // Smallest barrier weight; also the mixing weight toward pi used when
    // the final gradient is evaluated near the boundary.
    double boundary_reg = 1e-12;

    void validate() const;
};

// Conditional max-entropy in bits together with the conditioning state that
// certifies it. `value` is always the exact objective at sigma_opt, so it is
// a lower bound on the supremum; `upper_bound` adds the Frank-Wolfe duality
// gap at the final iterate.
struct EntropyResult {
    double value = 0.0;
    MultipartiteState sigma_opt;
    int iterations = 0;
    double last_improvement = 0.0;
    bool converged = false;
    double upper_bound = 0.0;
    // Incumbent objective ||sqrt(rho) sqrt(I (x) sigma)||_1 after each Newton step.
    std::vector<double> objective_trace;
};

// ||sqrt(rho) sqrt(sigma)||_1 + sqrt((1 - tr rho)(1 - tr sigma)).
double purified_fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma);
// sqrt(1 - F^2).
double purified_distance(const ComplexMatrix &rho, const ComplexMatrix &sigma);

// ||sqrt(rho_AB) sqrt(I_A (x) sigma_B)||_1 for a state already ordered (A..., B...).
double hmax_objective(const ComplexMatrix &rho_ab, std::size_t d_a, const ComplexMatrix &sigma_b);

// H_max(A|B) for a normalized state; a and b must partition the labels.
EntropyResult hmax_cond(const MultipartiteState &rho, std::span<const std::string> a,
                        std::span<const std::string> b, const SolverConfig &cfg = {});
EntropyResult hmax_cond(const MultipartiteState &rho, std::initializer_list<std::string> a,
                        std::initializer_list<std::string> b, const SolverConfig &cfg = {});

// -sum lambda log2 lambda.
double von_neumann_entropy(const ComplexMatrix &rho);
// S(AB) - S(B).
double von_neumann_cond(const MultipartiteState &rho, std::span<const std::string> a,
                        std::span<const std::string> b);
double von_neumann_cond(const MultipartiteState &rho, std::initializer_list<std::string> a,
                        std::initializer_list<std::string> b);

// Average over blocks of H_max(a|a') of (id (x) N_i)(Phi_m); each channel
// must act on m qubits. Non-converged solves are counted in `unconverged`.
struct ChannelEntropy {
    double value = 0.0;
    int unconverged = 0;
};
ChannelEntropy h_channel_detail(std::span<const QuantumChannel> chs, std::size_t m, const SolverConfig &cfg = {});
double h_channel(std::span<const QuantumChannel> chs, std::size_t m, const SolverConfig &cfg = {});
double h_channel(std::initializer_list<QuantumChannel> chs, std::size_t m, const SolverConfig &cfg = {});

// Per-channel conditional von Neumann entropy of the Choi state, same layout as h_channel.
double h_channel_von_neumann(const QuantumChannel &ch);

}  // namespace qecbound
