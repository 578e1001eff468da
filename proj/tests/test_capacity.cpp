#include <gtest/gtest.h>

#include "qecbound/capacity.hpp"

using namespace qecbound;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

BlockEncodingState identity_blocks(std::size_t j) { return BlockEncodingState::uniform(max_entangled(1, "Sr", "A"), j); }

}  // namespace

TEST(BlockEncoding, JointStateLayout) {
    const auto enc = identity_blocks(2);
    const auto joint = enc.joint();
    EXPECT_EQ(joint.labels(), (std::vector<std::string>{"Sc", "Sr", "A"}));
    EXPECT_EQ(joint.dim(), 8u);
    EXPECT_LT(joint.reduce({"Sc", "Sr"}).matrix().max_abs_diff(ComplexMatrix::identity(4) * cplx(0.25)), 1e-15);
}

TEST(BlockEncoding, RejectsNonUniformMarginal) {
    const MultipartiteState bad(ComplexMatrix::diag({1, 0, 0, 0}).with_dims({2, 2}), {"Sr", "A"});
    EXPECT_THROW(BlockEncodingState({bad, bad}), std::domain_error);
}

TEST(AchievabilityCheck, IdentityBlocksReproduceDecomposition) {
    for (double p : {0.0, 0.2, 0.7}) {
        const double h = h_channel({dephasing(p)}, 1);
        const auto r = theorem1_check(identity_blocks(2), dephasing(p), {1.0, 0.0, 0.0, 0.0, 2.0}, 0.5, 0.5);
        EXPECT_NEAR(r.h_s_b, 1.0 + h, 1e-4);
        EXPECT_NEAR(r.h_sr_bsc, h, 1e-4);
        EXPECT_TRUE(r.converged);
    }
}

TEST(AchievabilityCheck, NoiselessQuantumOnlyEquality) {
    const double q = 0.25, e = 0.75;
    const double delta2 = std::exp2((q - e) - 1.0);
    const CapacityTuple tuple{0.0, q, e, 0.0, 2.0};
    const auto ok = theorem1_check(identity_blocks(2), identity_channel(2), tuple, 0.0, delta2);
    EXPECT_NEAR(ok.h_sr_bsc, -1.0, 1e-9);
    EXPECT_TRUE(ok.cond_a1);
    EXPECT_TRUE(ok.cond_a2);
    EXPECT_TRUE(ok.cond_a3);
    EXPECT_TRUE(ok.achievable);
    EXPECT_EQ(ok.delta1, 0.0);
    const auto tight = theorem1_check(identity_blocks(2), identity_channel(2), tuple, 0.0, delta2 / 2);
    EXPECT_FALSE(tight.achievable);
    const auto too_big = theorem1_check(identity_blocks(2), identity_channel(2), {0.0, 0.5, 0.75, 0.0, 2.0}, 0.0, 1.0);
    EXPECT_FALSE(too_big.cond_a1);
}

TEST(AchievabilityCheck, DeltaBoundArithmetic) {
    const auto r = theorem1_check(identity_blocks(2), dephasing(0.1), {1.0, 0.0, 0.0, 0.0, 2.0}, 1.0, 1.0);
    EXPECT_NEAR(r.delta_bound, std::sqrt(2.0), 1e-15);
    const auto eps = theorem1_check(identity_blocks(2), dephasing(0.1), {1.0, 0.0, 0.0, 0.01, 2.0}, 0.04, 0.09);
    EXPECT_NEAR(eps.delta_bound, std::sqrt(0.2 + 0.3 + 0.04), 1e-15);
}

TEST(AchievabilityCheck, Errors) {
    EXPECT_THROW(theorem1_check(identity_blocks(2), identity_channel(4), {0, 0, 0, 0, 2}, 1, 1), std::invalid_argument);
    EXPECT_THROW(theorem1_check(identity_blocks(2), identity_channel(2), {0, 0, 0, 0, 4}, 1, 1), std::invalid_argument);
    EXPECT_THROW(theorem1_check(identity_blocks(2), identity_channel(2), {0, 0, 0, 0, 2}, 1, 0), std::invalid_argument);
    EXPECT_THROW(CapacityTuple({2.0, 0, 0, 0, 2.0}).validate(), std::invalid_argument);
}

TEST(MinDeltaPair, Examples) {
    const auto d = min_delta_pair({0.5, 0.25}, 0.0, 1, 8, 65536.0);
    EXPECT_NEAR(d.delta1, 1.0 + 1.0 / 65535.0, 1e-15);
    EXPECT_DOUBLE_EQ(d.delta2, 0.0625);
    const auto noiseless = min_delta_pair({0.0, 0.3}, -1.0, 1, 10);
    EXPECT_NEAR(noiseless.delta2, std::exp2((0.6 - 2.0) * 10), 1e-18);
    const auto inf = min_delta_pair({0.5, 0.25}, 0.0, 1, 8, kInf);
    EXPECT_DOUBLE_EQ(inf.delta1, 1.0);
}

TEST(ErrorBound, Examples) {
    EXPECT_NEAR(error_bound({0.0, 0.0}, -1.0, 1, 20), std::exp2(-10.0), 1e-18);
    EXPECT_NEAR(error_bound({0.5, 0.0}, -1.0, 1, 20), std::sqrt(33.0) * std::exp2(-10.0), 1e-15);
    for (std::size_t n : {1, 5, 50, 500}) EXPECT_EQ(error_bound({0.0, 1.0}, 1.0, 1, n), 1.0);
    EXPECT_THROW(error_bound({0.0, 0.0}, 1.5, 1, 10), std::invalid_argument);
}

TEST(ErrorBound, MatchesDeltaPairAtLargeJ) {
    for (double c : {0.0, 0.1, 0.4}) {
        for (double q : {0.0, 0.05, 0.2}) {
            for (double h : {-1.0, -0.8, -0.3}) {
                const auto d = min_delta_pair({c, q}, h, 1, 30, std::exp2(64.0));
                const double d1 = c == 0.0 ? 0.0 : d.delta1;
                const double via_pair = std::sqrt(std::sqrt(d1) + std::sqrt(d.delta2));
                const double direct = error_bound({c, q}, h, 1, 30);
                if (direct < 1.0) EXPECT_NEAR(via_pair / direct, 1.0, 1e-12);
            }
        }
    }
}

TEST(ErrorBound, DiscontinuityAtZeroC) {
    const double at_zero = error_bound({0.0, 0.1}, -0.9, 1, 20);
    const double near_zero = error_bound({1e-14, 0.1}, -0.9, 1, 20);
    EXPECT_NEAR(near_zero / at_zero, std::sqrt(2.0), 1e-12);
}

TEST(ErrorBound, MonotoneInRatesAndEntropy) {
    for (double h : {-1.0, -0.5, 0.0}) {
        double prev_c = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const double v = error_bound({0.1 * i, 0.2}, h, 1, 20);
            EXPECT_GE(v, prev_c);
            prev_c = v;
        }
        double prev_q = 0.0;
        for (int j = 0; j <= 20; ++j) {
            const double v = error_bound({0.3, 0.05 * j}, h, 1, 20);
            EXPECT_GE(v, prev_q);
            prev_q = v;
        }
    }
    EXPECT_LE(error_bound({0.3, 0.1}, -0.9, 1, 20), error_bound({0.3, 0.1}, -0.5, 1, 20));
}

TEST(GateCount, CeilingOfThreeHalvesPower) {
    EXPECT_EQ(gate_count(0), 0);
    EXPECT_EQ(gate_count(1), 1);
    EXPECT_EQ(gate_count(4), 8);
    EXPECT_EQ(gate_count(9), 27);
    EXPECT_EQ(gate_count(20), 90);
    EXPECT_EQ(gate_count(60), 465);
}

TEST(NoisyBound, Examples) {
    EXPECT_DOUBLE_EQ(noisy_rqc_bound({0.2, 0.1}, -0.8, 1, 20, 1.0), error_bound({0.2, 0.1}, -0.8, 1, 20));
    EXPECT_NEAR(noisy_bound(0.0, 0.995, 1000), 0.9933460314211680, 1e-12);
    // high-precision scalar evaluation with G = 90
    EXPECT_NEAR(noisy_bound(0.001, 0.995, gate_count(20)), 0.36372808293201555, 1e-12);
    EXPECT_EQ(noisy_bound(1.0, 0.9, 10), 1.0);
    EXPECT_THROW(noisy_bound(0.1, 0.0, 10), std::invalid_argument);
}

TEST(AsymptoticBoundary, Examples) {
    const auto noiseless = asymptotic_boundary(-1.0, 1);
    EXPECT_TRUE(noiseless.contains({2.0, 0.0}));
    EXPECT_TRUE(noiseless.contains({0.0, 1.0}));
    EXPECT_FALSE(noiseless.contains({2.0, 0.05}));
    const auto full = asymptotic_boundary(0.0, 1);
    EXPECT_TRUE(full.contains({1.0, 0.0}));
    EXPECT_TRUE(full.contains({0.0, 0.5}));
    EXPECT_FALSE(full.contains({1.05, 0.0}));
    const auto worst = asymptotic_boundary(1.0, 1);
    EXPECT_TRUE(worst.contains({0.0, 0.0}));
    EXPECT_FALSE(worst.contains({0.05, 0.0}));
    EXPECT_FALSE(worst.contains({0.0, 0.05}));
}

TEST(AsymptoticBoundary, ContainsPointsWithVanishingBound) {
    for (double p : {0.01, 0.1, 0.5}) {
        const double h = h_channel({dephasing(p)}, 1);
        const double h_vn = h_channel_von_neumann(dephasing(p));
        ASSERT_LE(h_vn, h + 1e-9);
        const auto region = asymptotic_boundary(h_vn, 1);
        for (const auto &pt : rate_grid(21, 21)) {
            if (2 * pt.q + h - 1 < 0 && pt.c + 2 * pt.q + h - 1 < 0) EXPECT_TRUE(region.contains(pt));
        }
    }
}

TEST(RateGrid, Layout) {
    const auto g = rate_grid(41, 41);
    ASSERT_EQ(g.size(), 1681u);
    EXPECT_EQ(g.front().c, 0.0);
    EXPECT_EQ(g.back().c, 2.0);
    EXPECT_EQ(g.back().q, 1.0);
    EXPECT_EQ(g[1].c, 0.0);
    EXPECT_EQ(g[41].c, 0.05);
}

TEST(RegionGrid, DephasingExamples) {
    const auto grid = rate_grid(41, 41);
    const auto ds = region_grid({NoiseKind::Dephasing, 0.01}, 20, grid);
    ASSERT_EQ(ds.size(), 1681u);
    EXPECT_EQ(ds.columns(), (std::vector<std::string>{"c", "q", "h", "delta1", "delta2", "delta_bound", "inside_asymptotic"}));
    // h from the closed form, then formula arithmetic
    EXPECT_NEAR(ds.number(0, "delta_bound"), 0.0018891065602226382, 1e-10);
    EXPECT_EQ(ds.number(0, "delta1"), 0.0);
    EXPECT_EQ(ds.number(1680, "delta_bound"), 1.0);
    EXPECT_NEAR(ds.number(0, "h"), -0.8096160402961303, 1e-8);
    for (std::size_t i = 0; i < 41; ++i) {
        for (std::size_t j = 0; j + 1 < 41; ++j) {
            EXPECT_LE(ds.number(j * 41 + i, "delta_bound"), ds.number((j + 1) * 41 + i, "delta_bound"));
            EXPECT_LE(ds.number(i * 41 + j, "delta_bound"), ds.number(i * 41 + j + 1, "delta_bound"));
        }
    }
}

TEST(RegionGrid, LessNoiseGivesLargerRegion) {
    const auto grid = rate_grid(21, 21);
    const auto low = region_grid({NoiseKind::Dephasing, 0.01}, 20, grid);
    const auto high = region_grid({NoiseKind::Dephasing, 0.1}, 20, grid);
    for (std::size_t r = 0; r < grid.size(); ++r) {
        EXPECT_LE(low.number(r, "delta_bound"), high.number(r, "delta_bound"));
    }
}
