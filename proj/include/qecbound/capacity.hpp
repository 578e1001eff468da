#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "qecbound/dataset.hpp"
#include "qecbound/entropy.hpp"

namespace qecbound {

// (C, Q, E) with smoothing epsilon and the enlarged classical alphabet size J.
struct CapacityTuple {
    double c_bits = 0.0;
    double q_qubits = 0.0;
    double e_ebits = 0.0;
    double epsilon = 0.0;
    double j_alphabet = 2.0;

    void validate() const;
};

// J states rho_j on (Sr, A); the joint state is J^-1 sum_j |j><j|_Sc (x) rho_j.
class BlockEncodingState {
  public:
    explicit BlockEncodingState(std::vector<MultipartiteState> blocks);

    // Every block carries the same rho_j.
    static BlockEncodingState uniform(const MultipartiteState &block, std::size_t j);

    std::size_t num_blocks() const { return blocks_.size(); }
    std::size_t dim_sr() const { return dim_sr_; }
    std::size_t dim_a() const { return dim_a_; }
    const std::vector<MultipartiteState> &blocks() const { return blocks_; }
    // Factors (Sc, Sr, A).
    MultipartiteState joint() const;

  private:
    std::vector<MultipartiteState> blocks_;
    std::size_t dim_sr_ = 0;
    std::size_t dim_a_ = 0;
};

struct RatePoint {
    double c = 0.0;
    double q = 0.0;

    void validate() const;
};

struct Theorem1Result {
    bool achievable = false;
    double delta_bound = 0.0;
    bool cond_a1 = false;
    bool cond_a2 = false;
    bool cond_a3 = false;
    double h_s_b = 0.0;
    double h_sr_bsc = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    bool converged = true;
};

// Noise maps A to B; entropies are H_max(Sc Sr | B) and H_max(Sr | B Sc).
// With C = 0 the classical condition is dropped and delta1 is set to 0.
Theorem1Result theorem1_check(const BlockEncodingState &enc, const QuantumChannel &noise, const CapacityTuple &tuple,
                              double delta1, double delta2, const SolverConfig &cfg = {});

struct DeltaPair {
    double delta1 = 0.0;
    double delta2 = 0.0;
};

// N = m * n_blocks. An infinite j_alphabet drops the 1/(J-1) term.
DeltaPair min_delta_pair(const RatePoint &pt, double h, std::size_t m, std::size_t n_blocks,
                         double j_alphabet = std::numeric_limits<double>::infinity());

// Clamped to 1.
double error_bound(const RatePoint &pt, double h, std::size_t m, std::size_t n_blocks);

enum class GateRule { CeilN32 };
std::int64_t gate_count(std::int64_t n_qubits, GateRule rule = GateRule::CeilN32);

// (1 - f^G) + f^G * inner, clamped to 1.
double noisy_bound(double inner, double f, std::int64_t gates);
double noisy_rqc_bound(const RatePoint &pt, double h, std::size_t m, std::size_t n_blocks, double f,
                       GateRule rule = GateRule::CeilN32);

struct AsymptoticRegion {
    double h_vn = 0.0;
    std::size_t m = 1;

    bool contains(const RatePoint &pt) const;
};
AsymptoticRegion asymptotic_boundary(double h_vn, std::size_t m);

// n x k points, c outer over [0,2], q inner over [0,1].
std::vector<RatePoint> rate_grid(std::size_t c_points, std::size_t q_points);

// Rows (c, q, h, delta1, delta2, delta_bound, inside_asymptotic) for single-qubit noise, m = 1.
ScenarioDataset region_grid(const NoiseSpec &noise, std::int64_t n_qubits, std::span<const RatePoint> grid,
                            const SolverConfig &cfg = {});

}  // namespace qecbound
