#include "qecbound/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qecbound {

namespace {

constexpr double kRateSlack = 1e-12;
// Slack on the entropic conditions, a few orders above solver accuracy.
constexpr double kEntropySlack = 1e-9;

void check_h(double h, std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("block size m must be positive");
    }
    const double md = static_cast<double>(m);
    if (!std::isfinite(h) || h < -md - 1e-9 || h > md + 1e-9) {
        throw std::invalid_argument("h = " + std::to_string(h) + " outside [-m, m]");
    }
}

// log2(1 + 2^x) without overflow.
double log2_one_plus_exp2(double x) {
    if (x > 0.0) {
        return x + std::log1p(std::exp2(-x)) / std::log(2.0);
    }
    return std::log1p(std::exp2(x)) / std::log(2.0);
}

}  // namespace

void CapacityTuple::validate() const {
    if (!(c_bits >= 0.0) || !(q_qubits >= 0.0) || !(e_ebits >= 0.0)) {
        throw std::invalid_argument("C, Q, E must be nonnegative");
    }
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("epsilon must be nonnegative");
    }
    if (!(j_alphabet >= std::max(2.0, std::exp2(c_bits)))) {
        throw std::invalid_argument("J must be at least max(2, 2^C)");
    }
}

void RatePoint::validate() const {
    if (!(c >= 0.0 && c <= 2.0 + kRateSlack) || !(q >= 0.0 && q <= 1.0 + kRateSlack)) {
        throw std::invalid_argument("rate point (" + std::to_string(c) + ", " + std::to_string(q) +
                                    ") outside [0,2] x [0,1]");
    }
}

BlockEncodingState::BlockEncodingState(std::vector<MultipartiteState> blocks) {
    if (blocks.empty()) {
        throw std::invalid_argument("BlockEncodingState needs at least one block");
    }
    for (auto &b : blocks) {
        if (b.num_factors() != 2) {
            throw std::invalid_argument("each block must have exactly two factors (Sr, A)");
        }
        b = b.relabel({"Sr", "A"});
    }
    dim_sr_ = blocks.front().dim_of("Sr");
    dim_a_ = blocks.front().dim_of("A");
    const auto d = static_cast<Eigen::Index>(dim_sr_);
    const Mat pi = Mat::Identity(d, d) / static_cast<double>(dim_sr_);
    for (const auto &b : blocks) {
        if (b.dim_of("Sr") != dim_sr_ || b.dim_of("A") != dim_a_) {
            throw std::invalid_argument("blocks have inconsistent dimensions");
        }
        if (std::abs(b.trace() - 1.0) > 1e-8) {
            throw std::domain_error("blocks must be normalized");
        }
        if ((b.reduce({"Sr"}).matrix().mat() - pi).cwiseAbs().maxCoeff() > 1e-8) {
            throw std::domain_error("block marginal on Sr is not completely mixed");
        }
    }
    blocks_ = std::move(blocks);
}

BlockEncodingState BlockEncodingState::uniform(const MultipartiteState &block, std::size_t j) {
    return BlockEncodingState(std::vector<MultipartiteState>(j, block));
}

MultipartiteState BlockEncodingState::joint() const {
    const std::size_t j = blocks_.size();
    const auto bd = static_cast<Eigen::Index>(dim_sr_ * dim_a_);
    const auto total = static_cast<Eigen::Index>(j) * bd;
    Mat m = Mat::Zero(total, total);
    for (std::size_t k = 0; k < j; ++k) {
        const auto off = static_cast<Eigen::Index>(k) * bd;
        m.block(off, off, bd, bd) = blocks_[k].matrix().mat() / static_cast<double>(j);
    }
    return MultipartiteState(ComplexMatrix(std::move(m), {j, dim_sr_, dim_a_}), {"Sc", "Sr", "A"});
}

Theorem1Result theorem1_check(const BlockEncodingState &enc, const QuantumChannel &noise, const CapacityTuple &tuple,
                              double delta1, double delta2, const SolverConfig &cfg) {
    tuple.validate();
    if (noise.d_in() != enc.dim_a()) {
        throw std::invalid_argument("noise input dimension " + std::to_string(noise.d_in()) + " != dim A " +
                                    std::to_string(enc.dim_a()));
    }
    if (std::abs(tuple.j_alphabet - static_cast<double>(enc.num_blocks())) > 0.5) {
        throw std::invalid_argument("J does not match the number of encoding blocks");
    }
    const bool classical = tuple.c_bits > 0.0;
    if (!(delta2 > 0.0) || (classical && !(delta1 > 0.0))) {
        throw std::invalid_argument("delta1 and delta2 must be positive");
    }

    const MultipartiteState rho_n = apply_channel(noise, enc.joint(), "A").relabel({"Sc", "Sr", "B"});
    const auto h_sb = hmax_cond(rho_n, {"Sc", "Sr"}, {"B"}, cfg);
    const auto h_srbsc = hmax_cond(rho_n, {"Sr"}, {"B", "Sc"}, cfg);

    Theorem1Result r;
    r.h_s_b = h_sb.value;
    r.h_sr_bsc = h_srbsc.value;
    r.converged = h_sb.converged && h_srbsc.converged;
    r.delta1 = classical ? delta1 : 0.0;
    r.delta2 = delta2;

    const double q = tuple.q_qubits;
    const double e = tuple.e_ebits;
    r.cond_a1 = q + e <= std::log2(static_cast<double>(enc.dim_sr())) + kRateSlack;
    r.cond_a2 = !classical ||
                tuple.c_bits + q - e <= -r.h_s_b + std::log2(tuple.j_alphabet - 1.0) + std::log2(delta1) + kEntropySlack;
    r.cond_a3 = q - e <= -r.h_sr_bsc + std::log2(delta2) + kEntropySlack;
    r.achievable = r.cond_a1 && r.cond_a2 && r.cond_a3;
    r.delta_bound = std::sqrt(std::sqrt(r.delta1) + std::sqrt(r.delta2) + 4.0 * tuple.epsilon);
    return r;
}

DeltaPair min_delta_pair(const RatePoint &pt, double h, std::size_t m, std::size_t n_blocks, double j_alphabet) {
    check_h(h, m);
    if (!(j_alphabet > 1.0)) {
        throw std::invalid_argument("J must exceed 1");
    }
    const double n = static_cast<double>(m * n_blocks);
    const double hm = h / static_cast<double>(m);
    const double factor = std::isinf(j_alphabet) ? 1.0 : 1.0 + 1.0 / (j_alphabet - 1.0);
    return {factor * std::exp2((pt.c + 2.0 * pt.q + hm - 1.0) * n), std::exp2((2.0 * pt.q + hm - 1.0) * n)};
}

double error_bound(const RatePoint &pt, double h, std::size_t m, std::size_t n_blocks) {
    check_h(h, m);
    const double n = static_cast<double>(m * n_blocks);
    double log_delta = (2.0 * pt.q + h / static_cast<double>(m) - 1.0) * n / 4.0;
    if (pt.c != 0.0) {
        log_delta += 0.5 * log2_one_plus_exp2(pt.c * n / 2.0);
    }
    return std::min(1.0, std::exp2(log_delta));
}

std::int64_t gate_count(std::int64_t n_qubits, GateRule rule) {
    if (n_qubits < 0) {
        throw std::invalid_argument("qubit count must be nonnegative");
    }
    switch (rule) {
    case GateRule::CeilN32: {
        // smallest g with g^2 >= N^3
        const auto cube = static_cast<unsigned __int128>(n_qubits) * n_qubits * n_qubits;
        auto g = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(cube)));
        while (static_cast<unsigned __int128>(g) * g < cube) ++g;
        while (g > 0 && static_cast<unsigned __int128>(g - 1) * (g - 1) >= cube) --g;
        return g;
    }
    }
    throw std::invalid_argument("unknown gate rule");
}

double noisy_bound(double inner, double f, std::int64_t gates) {
    if (!(f > 0.0 && f <= 1.0)) {
        throw std::invalid_argument("gate fidelity must lie in (0, 1]");
    }
    if (gates < 0) {
        throw std::invalid_argument("gate count must be nonnegative");
    }
    const double fg = std::pow(f, static_cast<double>(gates));
    return std::min(1.0, (1.0 - fg) + fg * inner);
}

double noisy_rqc_bound(const RatePoint &pt, double h, std::size_t m, std::size_t n_blocks, double f, GateRule rule) {
    const auto n = static_cast<std::int64_t>(m * n_blocks);
    return noisy_bound(error_bound(pt, h, m, n_blocks), f, gate_count(n, rule));
}

bool AsymptoticRegion::contains(const RatePoint &pt) const {
    const double rhs = 1.0 - h_vn / static_cast<double>(m);
    return pt.c + 2.0 * pt.q <= rhs + kRateSlack && 2.0 * pt.q <= rhs + kRateSlack;
}

AsymptoticRegion asymptotic_boundary(double h_vn, std::size_t m) {
    check_h(h_vn, m);
    return {h_vn, m};
}

std::vector<RatePoint> rate_grid(std::size_t c_points, std::size_t q_points) {
    if (c_points == 0 || q_points == 0) {
        throw std::invalid_argument("grid needs at least one point per axis");
    }
    auto axis = [](std::size_t i, std::size_t n, double hi) {
        return n == 1 ? 0.0 : hi * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    std::vector<RatePoint> grid;
    grid.reserve(c_points * q_points);
    for (std::size_t i = 0; i < c_points; ++i) {
        for (std::size_t j = 0; j < q_points; ++j) {
            grid.push_back({axis(i, c_points, 2.0), axis(j, q_points, 1.0)});
        }
    }
    return grid;
}

ScenarioDataset region_grid(const NoiseSpec &noise, std::int64_t n_qubits, std::span<const RatePoint> grid,
                            const SolverConfig &cfg) {
    if (n_qubits <= 0) {
        throw std::invalid_argument("N must be positive");
    }
    const QuantumChannel ch = noise.channel();
    const auto he = h_channel_detail(std::span<const QuantumChannel>(&ch, 1), 1, cfg);
    const double h_vn = h_channel_von_neumann(ch);
    const auto region = asymptotic_boundary(h_vn, 1);
    const auto n = static_cast<std::size_t>(n_qubits);

    ScenarioDataset ds({"c", "q", "h", "delta1", "delta2", "delta_bound", "inside_asymptotic"});
    for (const auto &pt : grid) {
        pt.validate();
        const auto pair = min_delta_pair(pt, he.value, 1, n);
        ds.add_row({pt.c, pt.q, he.value, pt.c == 0.0 ? 0.0 : pair.delta1, pair.delta2, error_bound(pt, he.value, 1, n),
                    std::int64_t{region.contains(pt) ? 1 : 0}});
    }
    ds.meta["noise"] = std::string(noise_name(noise.kind));
    ds.meta["param"] = noise.param;
    ds.meta["N"] = n_qubits;
    ds.meta["h"] = he.value;
    ds.meta["h_von_neumann"] = h_vn;
    ds.meta["unconverged"] = he.unconverged;
    return ds;
}

}  // namespace qecbound
