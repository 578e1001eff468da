#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qecbound/capacity.hpp"

namespace qecbound {

// Counter-based generator: every draw is a pure function of its key, so
// results do not depend on evaluation order or thread count.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const;
    // Uniform on (0, 1].
    double uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const;
    // Standard normal via Box-Muller; component k uses pair k / 2.
    double gaussian(std::uint64_t a, std::uint64_t b, std::uint64_t k) const;

  private:
    std::uint64_t seed_;
};

// Position of one coupling draw in the Monte-Carlo stream.
struct CouplingKey {
    std::uint64_t t_index = 0;
    std::uint64_t sample_index = 0;
};

HeisenbergCouplings sample_couplings(const CounterRng &rng, const CouplingKey &key, double mean, double std_dev);

ScenarioDataset rqc_region_dataset(NoiseKind kind, double param, std::int64_t n_qubits, std::span<const RatePoint> grid,
                                   const SolverConfig &cfg = {});

// Dephasing noise p, gate fidelity f, one row per (q, N).
ScenarioDataset rqc_noisy_sweep(double p, double f, double c, std::span<const double> q_list, std::int64_t n_min,
                                std::int64_t n_max, const SolverConfig &cfg = {});

struct ChaosConfig {
    double p = 1.0;
    std::vector<double> t_grid;
    std::size_t n_pairs = 100;
    double c = 0.0;
    double q = 0.5;
    std::size_t samples = 50;
    double coupling_mean = 1.0;
    double coupling_std = 0.25;
    std::uint64_t seed = 0;
    // 0 picks the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

// {0, step, 2 step, ...} up to t_max inclusive.
std::vector<double> uniform_time_grid(double t_max, double step);

struct ChaosDiagnostics {
    double h0_min = 0.0;
    double h0_max = 0.0;
    std::size_t unconverged = 0;
};

// One row per t, then one time-average row with a blank t.
ScenarioDataset chaos_error_curve(const ChaosConfig &cfg, const SolverConfig &solver = {},
                                  ChaosDiagnostics *diag = nullptr);

struct BaselineCase {
    NoiseKind noise = NoiseKind::Dephasing;
    double param = 0.0;
    RatePoint pt;
    std::int64_t n_qubits = 1;
};

// 1: 1 <= c <= 2; 2: c < 1 and c + q > 1; 3: c < 1 and c + q <= 1.
int baseline_case_id(const RatePoint &pt);
double baseline_closed_form(const BaselineCase &bc);

class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kBruteForceMaxDim = std::size_t{1} << 12;

// Exact trace distance of the direct-storage strategy; cN and qN must be integers.
double baseline_bruteforce(const BaselineCase &bc);

}  // namespace qecbound
