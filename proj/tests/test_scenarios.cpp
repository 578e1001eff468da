#include <gtest/gtest.h>

#include <sstream>

#include "qecbound/scenarios.hpp"

using namespace qecbound;

namespace {

std::string csv(const ScenarioDataset &ds) {
    std::ostringstream s;
    ds.write_csv(s);
    return s.str();
}

ChaosConfig small_chaos() {
    ChaosConfig cfg;
    cfg.p = 0.9;
    cfg.t_grid = {0.0, 0.5, 1.5};
    cfg.n_pairs = 10;
    cfg.samples = 6;
    cfg.seed = 42;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST(CounterRng, Deterministic) {
    const CounterRng a(7), b(7), c(8);
    EXPECT_EQ(a.bits(1, 2, 3, 4), b.bits(1, 2, 3, 4));
    EXPECT_NE(a.bits(1, 2, 3, 4), c.bits(1, 2, 3, 4));
    EXPECT_NE(a.bits(1, 2, 3, 4), a.bits(1, 2, 3, 5));
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const double u = a.uniform(k, 0, 0, 0);
        EXPECT_GT(u, 0.0);
        EXPECT_LE(u, 1.0);
    }
}

TEST(SampleCouplings, DegenerateAndRepeatable) {
    const CounterRng rng(3);
    const auto j = sample_couplings(rng, {4, 5}, 1.0, 0.0);
    for (int k = 0; k < 3; ++k) {
        EXPECT_EQ(j.j_left[k], 1.0);
        EXPECT_EQ(j.j_right[k], 1.0);
    }
    const auto x = sample_couplings(rng, {2, 9}, 1.0, 0.25);
    const auto y = sample_couplings(CounterRng(3), {2, 9}, 1.0, 0.25);
    EXPECT_EQ(x.j_left, y.j_left);
    EXPECT_EQ(x.j_right, y.j_right);
    EXPECT_THROW(sample_couplings(rng, {0, 0}, 1.0, -1.0), std::invalid_argument);
}

TEST(SampleCouplings, SampleMeanWithinStandardError) {
    const CounterRng rng(2024);
    const std::size_t draws = 100000;
    double sum = 0.0, sq = 0.0;
    for (std::size_t s = 0; s < draws; ++s) {
        const auto j = sample_couplings(rng, {0, s}, 1.0, 0.25);
        for (int k = 0; k < 3; ++k) {
            sum += j.j_left[k] + j.j_right[k];
            sq += j.j_left[k] * j.j_left[k] + j.j_right[k] * j.j_right[k];
        }
    }
    const double n = 6.0 * draws;
    const double mean = sum / n;
    EXPECT_NEAR(mean, 1.0, 5 * 0.25 / std::sqrt(n));
    EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 0.25, 0.01 * 0.25);
}

TEST(RegionDataset, FullDephasingSaturates) {
    const auto ds = rqc_region_dataset(NoiseKind::Dephasing, 1.0, 20, rate_grid(21, 11));
    for (std::size_t r = 0; r < ds.size(); ++r) {
        EXPECT_NEAR(ds.number(r, "h"), 0.0, 1e-9);
        if (ds.number(r, "c") + 2 * ds.number(r, "q") > 1.0 + 1e-12) EXPECT_EQ(ds.number(r, "delta_bound"), 1.0);
    }
}

TEST(RegionDataset, NoiselessChannelsAgree) {
    const auto grid = rate_grid(11, 11);
    const auto a = rqc_region_dataset(NoiseKind::AmplitudeDamping, 0.0, 20, grid);
    const auto b = rqc_region_dataset(NoiseKind::Dephasing, 0.0, 20, grid);
    for (std::size_t r = 0; r < grid.size(); ++r) {
        EXPECT_NEAR(a.number(r, "delta_bound"), b.number(r, "delta_bound"), 1e-12);
        EXPECT_EQ(a.number(r, "inside_asymptotic"), b.number(r, "inside_asymptotic"));
    }
}

TEST(NoisySweep, Columns) {
    const std::vector<double> qs = {0.1, 0.15, 0.2};
    const auto ds = rqc_noisy_sweep(0.05, 0.995, 0.9, qs, 10, 60);
    ASSERT_EQ(ds.size(), 153u);
    EXPECT_EQ(ds.columns(),
              (std::vector<std::string>{"N", "c", "q", "case_i_baseline", "case_ii_noiseless", "case_iii_noisy"}));
    EXPECT_NEAR(ds.number(10, "case_i_baseline"), 0.049375, 1e-12);
    EXPECT_EQ(ds.number(10, "N"), 20.0);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const double fg = std::pow(0.995, static_cast<double>(gate_count(static_cast<std::int64_t>(ds.number(r, "N")))));
        EXPECT_NEAR(ds.number(r, "case_iii_noisy"), (1 - fg) + fg * ds.number(r, "case_ii_noiseless"), 1e-12);
    }
}

TEST(NoisySweep, PerfectGatesAndLargeN) {
    const std::vector<double> qs = {0.1};
    const auto perfect = rqc_noisy_sweep(0.05, 1.0, 0.9, qs, 10, 20);
    for (std::size_t r = 0; r < perfect.size(); ++r) {
        EXPECT_EQ(perfect.number(r, "case_iii_noisy"), perfect.number(r, "case_ii_noiseless"));
    }
    const auto large = rqc_noisy_sweep(0.05, 0.995, 0.9, qs, 400, 400);
    EXPECT_GT(large.number(0, "case_iii_noisy"), 1.0 - 1e-12);
}

TEST(Chaos, TimeZeroIsIdentity) {
    ChaosConfig cfg;
    cfg.t_grid = {0.0};
    cfg.samples = 3;
    cfg.n_pairs = 100;
    for (double p : {0.5, 1.0}) {
        cfg.p = p;
        ChaosDiagnostics diag;
        const auto ds = chaos_error_curve(cfg, {}, &diag);
        EXPECT_NEAR(ds.number(0, "mean_bound") / std::exp2(-50.0), 1.0, 1e-8);
        EXPECT_NEAR(diag.h0_min, -2.0, 1e-9);
    }
}

TEST(Chaos, ZeroCouplingsNeverScramble) {
    auto cfg = small_chaos();
    cfg.coupling_mean = 0.0;
    cfg.coupling_std = 0.0;
    const auto ds = chaos_error_curve(cfg);
    for (std::size_t r = 0; r < cfg.t_grid.size(); ++r) {
        EXPECT_NEAR(ds.number(r, "mean_bound") / std::exp2(-5.0), 1.0, 1e-8);
    }
}

TEST(Chaos, LayoutAndAverageRow) {
    const auto cfg = small_chaos();
    ChaosDiagnostics diag;
    const auto ds = chaos_error_curve(cfg, {}, &diag);
    ASSERT_EQ(ds.size(), 4u);
    EXPECT_EQ(ds.columns(), (std::vector<std::string>{"t", "p", "mean_bound", "std_bound", "samples", "flagged"}));
    EXPECT_TRUE(std::isnan(ds.number(3, "t")));
    EXPECT_EQ(ds.number(3, "samples"), 18.0);
    const double avg = (ds.number(0, "mean_bound") + ds.number(1, "mean_bound") + ds.number(2, "mean_bound")) / 3.0;
    EXPECT_DOUBLE_EQ(ds.number(3, "mean_bound"), avg);
    EXPECT_GE(diag.h0_min, -2.0 - 1e-9);
    EXPECT_LE(diag.h0_max, 2.0 + 1e-9);
    EXPECT_EQ(diag.unconverged, 0u);
}

TEST(Chaos, DeterministicAcrossRunsAndThreads) {
    auto cfg = small_chaos();
    const std::string first = csv(chaos_error_curve(cfg));
    EXPECT_EQ(first, csv(chaos_error_curve(cfg)));
    cfg.threads = 3;
    EXPECT_EQ(first, csv(chaos_error_curve(cfg)));
    cfg.seed = 43;
    EXPECT_NE(first, csv(chaos_error_curve(cfg)));
}

TEST(Chaos, ClassicalRateFactor) {
    auto cfg = small_chaos();
    cfg.t_grid = {0.0};
    cfg.q = 0.1;
    const double base = chaos_error_curve(cfg).number(0, "mean_bound");
    cfg.c = 0.2;
    const double with_c = chaos_error_curve(cfg).number(0, "mean_bound");
    EXPECT_NEAR(with_c / base, std::sqrt(1.0 + std::exp2(0.2 * 20 / 2)), 1e-9);
}

TEST(Chaos, Validation) {
    auto cfg = small_chaos();
    cfg.p = 0.4;
    EXPECT_THROW(chaos_error_curve(cfg), std::invalid_argument);
    cfg = small_chaos();
    cfg.samples = 0;
    EXPECT_THROW(chaos_error_curve(cfg), std::invalid_argument);
    cfg = small_chaos();
    cfg.t_grid.clear();
    EXPECT_THROW(chaos_error_curve(cfg), std::invalid_argument);
}

TEST(TimeGrid, Uniform) {
    const auto g = uniform_time_grid(10.0, 0.1);
    ASSERT_EQ(g.size(), 101u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_NEAR(g.back(), 10.0, 1e-12);
    EXPECT_THROW(uniform_time_grid(1.0, 0.0), std::invalid_argument);
}

TEST(BaselineClosedForm, Examples) {
    EXPECT_EQ(baseline_closed_form({NoiseKind::Dephasing, 0.0, {0.5, 0.3}, 10}), 0.0);
    EXPECT_NEAR(baseline_closed_form({NoiseKind::Dephasing, 0.0, {1.5, 0.2}, 4}), 1.0 - std::exp2(-(0.5 + 0.4) * 4), 1e-15);
    EXPECT_NEAR(baseline_closed_form({NoiseKind::Dephasing, 0.2, {0.5, 0.5}, 2}), 0.1, 1e-15);
    EXPECT_NEAR(baseline_closed_form({NoiseKind::AmplitudeDamping, 1.0, {0.0, 1.0}, 1}), 0.75, 1e-15);
    EXPECT_NEAR(baseline_closed_form({NoiseKind::Dephasing, 0.05, {0.9, 0.1}, 20}), 0.049375, 1e-12);
    EXPECT_THROW(baseline_closed_form({NoiseKind::Dephasing, 0.1, {2.1, 0.0}, 2}), std::invalid_argument);
    EXPECT_THROW(baseline_closed_form({NoiseKind::Dephasing, 0.1, {0.0, 1.1}, 2}), std::invalid_argument);
}

TEST(BaselineClosedForm, CaseSplit) {
    EXPECT_EQ(baseline_case_id({1.0, 0.0}), 1);
    EXPECT_EQ(baseline_case_id({2.0, 1.0}), 1);
    EXPECT_EQ(baseline_case_id({0.5, 0.6}), 2);
    EXPECT_EQ(baseline_case_id({0.5, 0.5}), 3);
    EXPECT_EQ(baseline_case_id({0.9, 0.1}), 3);
    // both dephasing branches agree on c + q = 1
    const double p = 0.3;
    const double at_boundary = baseline_closed_form({NoiseKind::Dephasing, p, {0.4, 0.6}, 5});
    const double branch2 = 1.0 - std::pow(1 - p / 2, 0.6 * 5) * std::exp2(0.0);
    EXPECT_NEAR(at_boundary, branch2, 1e-15);
}

TEST(BaselineBruteForce, Examples) {
    EXPECT_NEAR(baseline_bruteforce({NoiseKind::Dephasing, 0.2, {0.5, 0.5}, 2}), 0.1, 1e-12);
    // 4x4 eigenproblem done by hand: (1 + sqrt 5) / 4
    EXPECT_NEAR(baseline_bruteforce({NoiseKind::AmplitudeDamping, 1.0, {0.0, 1.0}, 1}), 0.8090169943749474, 1e-12);
    EXPECT_NEAR(baseline_bruteforce({NoiseKind::Dephasing, 0.0, {0.5, 0.5}, 2}), 0.0, 1e-12);
    EXPECT_NEAR(baseline_bruteforce({NoiseKind::AmplitudeDamping, 0.0, {1.0 / 3, 1.0 / 3}, 3}), 0.0, 1e-12);
}

TEST(BaselineBruteForce, Errors) {
    EXPECT_THROW(baseline_bruteforce({NoiseKind::Dephasing, 0.1, {2.0, 1.0}, 3}), ResourceError);
    EXPECT_THROW(baseline_bruteforce({NoiseKind::Dephasing, 0.1, {0.25, 0.0}, 2}), std::invalid_argument);
}

TEST(BaselineBruteForce, LowerBoundedByClosedForm) {
    for (NoiseKind kind : {NoiseKind::Dephasing, NoiseKind::AmplitudeDamping}) {
        for (std::int64_t n = 1; n <= 2; ++n) {
            for (std::int64_t kc = 0; kc <= 2 * n; ++kc) {
                for (std::int64_t kq = 0; kq <= n; ++kq) {
                    const RatePoint pt{double(kc) / double(n), double(kq) / double(n)};
                    for (double param : {0.0, 0.4, 1.0}) {
                        const BaselineCase bc{kind, param, pt, n};
                        const double brute = baseline_bruteforce(bc);
                        EXPECT_GE(brute, baseline_closed_form(bc) - 1e-9);
                        if (kind == NoiseKind::Dephasing && baseline_case_id(pt) == 3) {
                            EXPECT_NEAR(brute, baseline_closed_form(bc), 1e-9);
                        }
                    }
                }
            }
        }
    }
}
