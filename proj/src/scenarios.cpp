#include "qecbound/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace qecbound {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double rate_term(double c, double q, double h0, double m, double n) {
    double log_term = (2.0 * q + h0 / m - 1.0) * n / 4.0;
    if (c != 0.0) {
        const double x = c * n / 2.0;
        log_term += 0.5 * (x + std::log1p(std::exp2(-x)) / std::numbers::ln2);
    }
    return std::exp2(log_term);
}

void check_unit(double x, const char *name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

std::int64_t integer_count(double rate, std::int64_t n, const char *name) {
    const double x = rate * static_cast<double>(n);
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9) {
        throw std::invalid_argument(std::string(name) + " * N = " + std::to_string(x) + " is not an integer");
    }
    return static_cast<std::int64_t>(r);
}

// Per-pair ideal and stored states on (M, R).
struct PairStates {
    Mat ideal;
    Mat stored;
};

Mat guessed_pair() {
    Mat g = Mat::Zero(4, 4);
    g(0, 0) = 0.5;
    g(1, 1) = 0.5;
    return g;
}

Mat kron_power(const Mat &m, std::int64_t k) {
    Mat out = Mat::Identity(1, 1);
    for (std::int64_t i = 0; i < k; ++i) {
        out = kron(ComplexMatrix(out), ComplexMatrix(m)).mat();
    }
    return out;
}

RealVec kron_diag(const RealVec &a, const RealVec &b) {
    RealVec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const {
    std::uint64_t h = splitmix(seed_);
    h = splitmix(h ^ a);
    h = splitmix(h ^ b);
    h = splitmix(h ^ c);
    return splitmix(h ^ d);
}

double CounterRng::uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const {
    return static_cast<double>((bits(a, b, c, d) >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t a, std::uint64_t b, std::uint64_t k) const {
    const std::uint64_t pair = k / 2;
    const double r = std::sqrt(-2.0 * std::log(uniform(a, b, pair, 0)));
    const double angle = 2.0 * std::numbers::pi * uniform(a, b, pair, 1);
    return (k % 2 == 0) ? r * std::cos(angle) : r * std::sin(angle);
}

HeisenbergCouplings sample_couplings(const CounterRng &rng, const CouplingKey &key, double mean, double std_dev) {
    if (!(std_dev >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("coupling distribution needs finite mean and std >= 0");
    }
    HeisenbergCouplings j;
    for (std::uint64_t k = 0; k < 3; ++k) {
        j.j_left[k] = mean + std_dev * rng.gaussian(key.t_index, key.sample_index, k);
        j.j_right[k] = mean + std_dev * rng.gaussian(key.t_index, key.sample_index, 3 + k);
    }
    return j;
}

ScenarioDataset rqc_region_dataset(NoiseKind kind, double param, std::int64_t n_qubits, std::span<const RatePoint> grid,
                                   const SolverConfig &cfg) {
    check_unit(param, "noise parameter");
    ScenarioDataset ds = region_grid(NoiseSpec{kind, param}, n_qubits, grid, cfg);
    ds.meta["grid_points"] = grid.size();
    return ds;
}

ScenarioDataset rqc_noisy_sweep(double p, double f, double c, std::span<const double> q_list, std::int64_t n_min,
                                std::int64_t n_max, const SolverConfig &cfg) {
    check_unit(p, "p");
    if (n_min <= 0 || n_max < n_min) {
        throw std::invalid_argument("need 0 < N-min <= N-max");
    }
    if (q_list.empty()) {
        throw std::invalid_argument("q list is empty");
    }
    const double h = h_channel({dephasing(p)}, 1, cfg);
    ScenarioDataset ds({"N", "c", "q", "case_i_baseline", "case_ii_noiseless", "case_iii_noisy"});
    for (double q : q_list) {
        const RatePoint pt{c, q};
        pt.validate();
        for (std::int64_t n = n_min; n <= n_max; ++n) {
            const double base = baseline_closed_form({NoiseKind::Dephasing, p, pt, n});
            const double inner = error_bound(pt, h, 1, static_cast<std::size_t>(n));
            const double outer = noisy_bound(inner, f, gate_count(n));
            ds.add_row({n, c, q, base, inner, outer});
        }
    }
    ds.meta["p"] = p;
    ds.meta["f"] = f;
    ds.meta["c"] = c;
    ds.meta["h"] = h;
    ds.meta["gate_rule"] = "ceil(N^1.5)";
    return ds;
}

void ChaosConfig::validate() const {
    if (!(p >= 0.5 && p <= 1.0)) throw std::invalid_argument("p must lie in [0.5, 1]");
    if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
    for (double t : t_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("times must be finite and >= 0");
    }
    if (samples == 0) throw std::invalid_argument("samples must be >= 1");
    if (n_pairs == 0) throw std::invalid_argument("n must be >= 1");
    RatePoint{c, q}.validate();
    if (!(coupling_std >= 0.0)) throw std::invalid_argument("coupling std must be >= 0");
}

std::vector<double> uniform_time_grid(double t_max, double step) {
    if (!(step > 0.0) || !(t_max >= 0.0)) {
        throw std::invalid_argument("time grid needs step > 0 and t_max >= 0");
    }
    const auto count = static_cast<std::size_t>(std::floor(t_max / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = static_cast<double>(k) * step;
    }
    return grid;
}

ScenarioDataset chaos_error_curve(const ChaosConfig &cfg, const SolverConfig &solver, ChaosDiagnostics *diag) {
    cfg.validate();
    solver.validate();
    const CounterRng rng(cfg.seed);
    const std::size_t nt = cfg.t_grid.size();
    const std::size_t total = nt * cfg.samples;
    std::vector<double> h0(total);
    std::vector<char> failed(total, 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            const std::size_t ti = idx / cfg.samples;
            const std::size_t s = idx % cfg.samples;
            const auto j = sample_couplings(rng, {ti, s}, cfg.coupling_mean, cfg.coupling_std);
            const auto res = hmax_cond(choi_from_channel(heisenberg_channel(cfg.p, cfg.t_grid[ti], j)), {"A"}, {"B"},
                                       solver);
            h0[idx] = res.value;
            failed[idx] = res.converged ? 0 : 1;
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 1; k < threads; ++k) {
            pool.emplace_back(worker);
        }
        worker();
    }

    const double n = 2.0 * static_cast<double>(cfg.n_pairs);
    ScenarioDataset ds({"t", "p", "mean_bound", "std_bound", "samples", "flagged"});
    double avg = 0.0;
    std::int64_t flagged_total = 0;
    for (std::size_t ti = 0; ti < nt; ++ti) {
        double sum = 0.0;
        std::vector<double> terms(cfg.samples);
        std::int64_t flagged = 0;
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const std::size_t idx = ti * cfg.samples + s;
            terms[s] = rate_term(cfg.c, cfg.q, h0[idx], 2.0, n);
            sum += terms[s];
            flagged += failed[idx];
        }
        const double mean = sum / static_cast<double>(cfg.samples);
        double var = 0.0;
        for (double x : terms) var += (x - mean) * (x - mean);
        const double sd = cfg.samples > 1 ? std::sqrt(var / static_cast<double>(cfg.samples - 1)) : 0.0;
        const double reported = std::min(1.0, mean);
        avg += reported;
        flagged_total += flagged;
        ds.add_row({cfg.t_grid[ti], cfg.p, reported, sd, static_cast<std::int64_t>(cfg.samples), flagged});
    }
    ds.add_row({std::monostate{}, cfg.p, avg / static_cast<double>(nt), std::monostate{},
                static_cast<std::int64_t>(total), flagged_total});

    ds.meta["p"] = cfg.p;
    ds.meta["n"] = cfg.n_pairs;
    ds.meta["c"] = cfg.c;
    ds.meta["q"] = cfg.q;
    ds.meta["samples"] = cfg.samples;
    ds.meta["coupling_mean"] = cfg.coupling_mean;
    ds.meta["coupling_std"] = cfg.coupling_std;
    ds.meta["seed"] = cfg.seed;
    ds.meta["t_points"] = nt;
    if (diag) {
        diag->h0_min = *std::min_element(h0.begin(), h0.end());
        diag->h0_max = *std::max_element(h0.begin(), h0.end());
        diag->unconverged = static_cast<std::size_t>(flagged_total);
    }
    return ds;
}

int baseline_case_id(const RatePoint &pt) {
    if (pt.c > 2.0 || pt.q > 1.0 || pt.c < 0.0 || pt.q < 0.0) {
        throw std::invalid_argument("baseline needs 0 <= c <= 2 and 0 <= q <= 1");
    }
    if (pt.c >= 1.0) return 1;
    return pt.c + pt.q > 1.0 + 1e-12 ? 2 : 3;
}

double baseline_closed_form(const BaselineCase &bc) {
    const int id = baseline_case_id(bc.pt);
    check_unit(bc.param, "noise parameter");
    if (bc.n_qubits <= 0) {
        throw std::invalid_argument("N must be positive");
    }
    const double c = bc.pt.c;
    const double q = bc.pt.q;
    const double n = static_cast<double>(bc.n_qubits);
    const double keep = 1.0 - bc.param / 2.0;
    if (bc.noise == NoiseKind::Dephasing) {
        switch (id) {
        case 1: return 1.0 - std::exp2(-(c - 1.0 + 2.0 * q) * n);
        case 2: return 1.0 - std::pow(keep, (1.0 - c) * n) * std::exp2(-2.0 * (q + c - 1.0) * n);
        default: return 1.0 - std::pow(keep, q * n);
        }
    }
    const double coh = (1.0 + std::sqrt(1.0 - bc.param)) / 2.0;
    switch (id) {
    case 1: return 1.0 - std::exp2(-(c - 1.0 + 2.0 * q) * n) * std::pow(keep, n);
    case 2:
        return 1.0 - std::exp2(-2.0 * (q + c - 1.0) * n) * std::pow(keep, c * n) * std::pow(coh, 2.0 * (1.0 - c) * n);
    default: return 1.0 - std::pow(keep, c * n) * std::pow(coh, 2.0 * q * n);
    }
}

double baseline_bruteforce(const BaselineCase &bc) {
    baseline_case_id(bc.pt);
    check_unit(bc.param, "noise parameter");
    if (bc.n_qubits <= 0) {
        throw std::invalid_argument("N must be positive");
    }
    const std::int64_t n = bc.n_qubits;
    const std::int64_t kc = integer_count(bc.pt.c, n, "c");
    const std::int64_t kq = integer_count(bc.pt.q, n, "q");
    if (2 * (kc + kq) > 12) {
        throw ResourceError("brute-force dimension 2^" + std::to_string(2 * (kc + kq)) + " exceeds 2^12");
    }

    // Stored classical bits, guessed bits, stored qubits, guessed qubits.
    std::int64_t c_store = kc, c_guess = 0, q_store = kq, q_guess = 0;
    if (kc >= n) {
        c_store = n;
        c_guess = kc - n;
        q_store = 0;
        q_guess = kq;
    } else if (kc + kq > n) {
        q_store = n - kc;
        q_guess = kc + kq - n;
    }

    const QuantumChannel ch = NoiseSpec{bc.noise, bc.param}.channel();
    const Mat omega = classical_corr(1, "M", "R").matrix().mat();
    const Mat phi = max_entangled(1, "M", "R").matrix().mat();
    const Mat omega_noisy = apply_channel(ch, classical_corr(1, "M", "R"), "M").matrix().mat();
    const Mat phi_noisy = apply_channel(ch, max_entangled(1, "M", "R"), "M").matrix().mat();
    const Mat guess = guessed_pair();

    // Classical pairs are diagonal in the computational basis on both sides,
    // so the difference is block diagonal over classical strings.
    const RealVec omega_d = omega.diagonal().real();
    const RealVec omega_noisy_d = omega_noisy.diagonal().real();
    const RealVec guess_d = guess.diagonal().real();
    RealVec a = RealVec::Ones(1);
    RealVec b = RealVec::Ones(1);
    for (std::int64_t i = 0; i < c_store; ++i) {
        a = kron_diag(a, omega_d);
        b = kron_diag(b, omega_noisy_d);
    }
    for (std::int64_t i = 0; i < c_guess; ++i) {
        a = kron_diag(a, omega_d);
        b = kron_diag(b, guess_d);
    }

    const Mat q_ideal = kron_power(phi, q_store + q_guess);
    const Mat q_psi = kron(ComplexMatrix(kron_power(phi_noisy, q_store)), ComplexMatrix(kron_power(guess, q_guess))).mat();

    std::map<std::pair<double, double>, std::int64_t> weights;
    for (Eigen::Index x = 0; x < a.size(); ++x) {
        if (a(x) != 0.0 || b(x) != 0.0) {
            ++weights[{a(x), b(x)}];
        }
    }
    double norm = 0.0;
    for (const auto &[ab, count] : weights) {
        const auto [ax, bx] = ab;
        double block;
        if (ax == 0.0) {
            block = bx;
        } else if (bx == 0.0) {
            block = ax;
        } else {
            block = trace_norm(ComplexMatrix(Mat(ax * q_ideal - bx * q_psi)));
        }
        norm += static_cast<double>(count) * block;
    }
    return 0.5 * norm;
}

}  // namespace qecbound
