#include "qecbound/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oracle/bloch_oracle.hpp"
#include "qecbound/scenarios.hpp"

namespace qecbound {

namespace {

struct Outcome {
    bool passed = true;
    std::string failures;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            failures += (passed ? "" : "; ") + what;
            passed = false;
        }
    }
    std::string summary() const { return failures.empty() ? detail.str() : failures + " | " + detail.str(); }
};

struct Check {
    int id;
    const char *suite;
    const char *name;
    std::function<void(Outcome &, const VerifyOptions &)> body;
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(10);
    s << x;
    return s.str();
}

void entropy_trivial(Outcome &o, const VerifyOptions &) {
    const double phi1 = hmax_cond(max_entangled(1), {"A"}, {"B"}).value;
    const double phi2 = hmax_cond(max_entangled(2), {"A"}, {"B"}).value;
    const double omega = hmax_cond(classical_corr(1), {"M"}, {"R"}).value;
    const Mat s = (Mat(2, 2) << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3).finished();
    const auto prod = tensor(completely_mixed(1, "A"), MultipartiteState(ComplexMatrix(s), {"B"}));
    const double mixed = hmax_cond(prod, {"A"}, {"B"}).value;
    o.require(std::abs(phi1 + 1.0) <= 1e-6, "Phi_1 gave " + fmt(phi1));
    o.require(std::abs(phi2 + 2.0) <= 1e-6, "Phi_2 gave " + fmt(phi2));
    o.require(std::abs(omega) <= 1e-6, "Omega_1 gave " + fmt(omega));
    o.require(std::abs(mixed - 1.0) <= 1e-6, "pi x sigma gave " + fmt(mixed));
    o.detail << "Phi1=" << fmt(phi1) << " Phi2=" << fmt(phi2) << " Omega1=" << fmt(omega) << " pi(x)sigma=" << fmt(mixed);
}

void entropy_dephasing(Outcome &o, const VerifyOptions &opts) {
    double worst_closed = 0.0;
    double worst_oracle = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double p = 0.1 * k;
        const auto rho = choi_from_channel(dephasing(p));
        const double solver = hmax_cond(rho, {"A"}, {"B"}).value;
        double closed = dephasing_hmax_closed_form(p);
        if (opts.perturb_closed_form) {
            closed += 1e-3;
        }
        const double grid = oracle::hmax_qubit_grid(rho.matrix().mat()).value;
        worst_closed = std::max(worst_closed, std::abs(solver - closed));
        worst_oracle = std::max(worst_oracle, std::abs(solver - grid));
        o.require(std::abs(solver - closed) <= 1e-5,
                  "p=" + fmt(p) + " solver " + fmt(solver) + " vs closed form " + fmt(closed));
        o.require(std::abs(solver - grid) <= 1e-4, "p=" + fmt(p) + " solver " + fmt(solver) + " vs grid " + fmt(grid));
    }
    o.detail << "max |solver-closed|=" << fmt(worst_closed) << " max |solver-grid|=" << fmt(worst_oracle);
}

void entropy_additivity(Outcome &o, const VerifyOptions &) {
    const CounterRng rng(20240611);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const double p = rng.uniform(1, i, 0, 0);
        const double g = rng.uniform(1, i, 0, 1);
        const QuantumChannel a = dephasing(p);
        const QuantumChannel b = amplitude_damping(g);
        const double joint = hmax_cond(choi_from_channel(tensor_channel({a, b})), {"A"}, {"B"}).value;
        const double parts =
            hmax_cond(choi_from_channel(a), {"A"}, {"B"}).value + hmax_cond(choi_from_channel(b), {"A"}, {"B"}).value;
        worst = std::max(worst, std::abs(joint - parts));
        o.require(std::abs(joint - parts) <= 1e-5,
                  "p=" + fmt(p) + " gamma=" + fmt(g) + ": " + fmt(joint) + " vs " + fmt(parts));
    }
    o.detail << "20 pairs, max deviation " << fmt(worst);
}

void entropy_decomposition(Outcome &o, const VerifyOptions &) {
    const auto enc = BlockEncodingState::uniform(max_entangled(1, "Sr", "A"), 2);
    double worst = 0.0;
    for (double p : {0.0, 0.1, 0.5, 0.9}) {
        const double h = h_channel({dephasing(p)}, 1);
        const auto r = theorem1_check(enc, dephasing(p), CapacityTuple{1.0, 0.0, 0.0, 0.0, 2.0}, 1.0, 1.0);
        worst = std::max({worst, std::abs(r.h_s_b - (1.0 + h)), std::abs(r.h_sr_bsc - h)});
        o.require(std::abs(r.h_s_b - (1.0 + h)) <= 1e-4, "p=" + fmt(p) + " H(S|B)=" + fmt(r.h_s_b));
        o.require(std::abs(r.h_sr_bsc - h) <= 1e-4, "p=" + fmt(p) + " H(Sr|BSc)=" + fmt(r.h_sr_bsc));
    }
    o.detail << "J=2 n=1 m=1, max deviation " << fmt(worst);
}

void baseline_equality(Outcome &o, const VerifyOptions &) {
    const BaselineCase bc{NoiseKind::Dephasing, 0.2, {0.5, 0.5}, 2};
    const double brute = baseline_bruteforce(bc);
    const double closed = baseline_closed_form(bc);
    o.require(std::abs(brute - 0.1) <= 1e-9, "brute force " + fmt(brute));
    o.require(std::abs(closed - 0.1) <= 1e-9, "closed form " + fmt(closed));
    o.detail << "brute=" << fmt(brute) << " closed=" << fmt(closed);
}

void baseline_lower_bound(Outcome &o, const VerifyOptions &) {
    int configs[2] = {0, 0};
    int cases[2][4] = {};
    double worst = 1.0;
    for (NoiseKind kind : {NoiseKind::Dephasing, NoiseKind::AmplitudeDamping}) {
        const int ki = kind == NoiseKind::Dephasing ? 0 : 1;
        for (std::int64_t n = 1; n <= 3; ++n) {
            for (std::int64_t kc = 0; kc <= 2 * n; ++kc) {
                for (std::int64_t kq = 0; kq <= n; ++kq) {
                    if (kc + kq > 6 || kq > 4) {
                        continue;
                    }
                    const RatePoint pt{static_cast<double>(kc) / static_cast<double>(n),
                                       static_cast<double>(kq) / static_cast<double>(n)};
                    for (double param : {0.15, 0.5, 0.85}) {
                        const BaselineCase bc{kind, param, pt, n};
                        const double brute = baseline_bruteforce(bc);
                        const double closed = baseline_closed_form(bc);
                        ++configs[ki];
                        ++cases[ki][baseline_case_id(pt)];
                        worst = std::min(worst, brute - closed);
                        o.require(brute >= closed - 1e-9, std::string(noise_name(kind)) + " c=" + fmt(pt.c) +
                                                              " q=" + fmt(pt.q) + " N=" + std::to_string(n) +
                                                              ": brute " + fmt(brute) + " < closed " + fmt(closed));
                    }
                }
            }
        }
    }
    for (int ki = 0; ki < 2; ++ki) {
        o.require(configs[ki] >= 12, "too few configurations");
        for (int id = 1; id <= 3; ++id) {
            o.require(cases[ki][id] > 0, "case " + std::to_string(id) + " not sampled");
        }
    }
    o.detail << configs[0] << " dephasing + " << configs[1] << " amp_damp configs, min(brute-closed)=" << fmt(worst);
}

void region_checks(Outcome &o, const VerifyOptions &) {
    const auto grid = rate_grid(41, 41);
    const auto low = rqc_region_dataset(NoiseKind::Dephasing, 0.01, 20, grid);
    const auto high = rqc_region_dataset(NoiseKind::Dephasing, 0.1, 20, grid);
    auto at = [&](const ScenarioDataset &ds, std::size_t i, std::size_t j) {
        return ds.number(i * 41 + j, "delta_bound");
    };
    o.require(low.size() == 1681, "row count " + std::to_string(low.size()));
    o.require(at(low, 0, 0) < 0.01, "delta(0,0)=" + fmt(at(low, 0, 0)));
    o.require(at(low, 40, 40) == 1.0, "delta(2,1)=" + fmt(at(low, 40, 40)));
    int violations = 0;
    for (std::size_t i = 0; i < 41; ++i) {
        for (std::size_t j = 0; j < 41; ++j) {
            if (i + 1 < 41 && at(low, i + 1, j) < at(low, i, j)) ++violations;
            if (j + 1 < 41 && at(low, i, j + 1) < at(low, i, j)) ++violations;
            if (at(high, i, j) < 0.5 && !(at(low, i, j) < 0.5)) ++violations;
        }
    }
    o.require(violations == 0, std::to_string(violations) + " monotonicity/containment violations");
    o.detail << "delta(0,0)=" << fmt(at(low, 0, 0)) << " delta(2,1)=" << fmt(at(low, 40, 40))
             << " violations=" << violations;
}

void sweep_checks(Outcome &o, const VerifyOptions &) {
    const double f = 0.995;
    const std::vector<double> qs = {0.1, 0.15, 0.2};
    const auto ds = rqc_noisy_sweep(0.05, f, 0.9, qs, 10, 60);
    double worst_identity = 0.0;
    double case_i = std::nan("");
    bool vanishing = true;
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const auto n = static_cast<std::int64_t>(ds.number(r, "N"));
        const double fg = std::pow(f, static_cast<double>(gate_count(n)));
        const double inner = ds.number(r, "case_ii_noiseless");
        const double outer = ds.number(r, "case_iii_noisy");
        worst_identity = std::max(worst_identity, std::abs(outer - ((1.0 - fg) + fg * inner)));
        vanishing = vanishing && std::abs(outer - (1.0 - fg)) <= fg * inner + 1e-15;
        if (n == 20 && ds.number(r, "q") == 0.1) {
            case_i = ds.number(r, "case_i_baseline");
        }
    }
    const double first_inner = ds.number(0, "case_ii_noiseless");
    const double last_inner = ds.number(50, "case_ii_noiseless");
    o.require(ds.size() == 153, "row count " + std::to_string(ds.size()));
    o.require(worst_identity <= 1e-12, "column identity off by " + fmt(worst_identity));
    o.require(vanishing && last_inner < first_inner, "column (iii) does not approach 1-f^G");
    o.require(std::abs(case_i - 0.049375) <= 1e-9, "case (i) at q=0.1 N=20 is " + fmt(case_i));
    o.detail << "identity dev " << fmt(worst_identity) << ", case (i)=" << fmt(case_i);
}

void chaos_checks(Outcome &o, const VerifyOptions &) {
    ChaosConfig cfg;
    cfg.c = 0.0;
    cfg.q = 0.5;
    cfg.n_pairs = 100;
    cfg.samples = 50;
    cfg.seed = 7;
    cfg.t_grid = uniform_time_grid(10.0, 0.1);
    double avg[3];
    const double ps[3] = {1.0, 0.9, 0.5};
    std::string first_csv;
    for (int k = 0; k < 3; ++k) {
        cfg.p = ps[k];
        ChaosDiagnostics diag;
        const auto ds = chaos_error_curve(cfg, {}, &diag);
        avg[k] = ds.number(ds.size() - 1, "mean_bound");
        o.require(ds.number(0, "mean_bound") <= 1e-15, "p=" + fmt(ps[k]) + " t=0 mean " + fmt(ds.number(0, "mean_bound")));
        o.require(diag.h0_min >= -2.0 - 1e-9 && diag.h0_max <= 2.0 + 1e-9,
                  "h0 range [" + fmt(diag.h0_min) + ", " + fmt(diag.h0_max) + "]");
        if (k == 0) {
            std::ostringstream a;
            ds.write_csv(a);
            first_csv = a.str();
        }
    }
    cfg.p = 1.0;
    std::ostringstream again;
    chaos_error_curve(cfg).write_csv(again);
    o.require(again.str() == first_csv, "rerun at p=1 is not bitwise identical");
    o.require(avg[0] <= avg[1] && avg[1] <= avg[2],
              "time averages not ordered: " + fmt(avg[0]) + ", " + fmt(avg[1]) + ", " + fmt(avg[2]));
    o.detail << "avg(p=1)=" << fmt(avg[0]) << " avg(p=0.9)=" << fmt(avg[1]) << " avg(p=0.5)=" << fmt(avg[2]);
}

void channel_checks(Outcome &o, const VerifyOptions &) {
    const CounterRng rng(99);
    std::vector<QuantumChannel> chans = {dephasing(0.3), amplitude_damping(0.6), tensor_channel({dephasing(0.2), amplitude_damping(0.4)})};
    double worst_trip = 0.0;
    double worst_tp = 0.0;
    double worst_unital = 0.0;
    double worst_rank = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto j = sample_couplings(rng, {0, s}, 1.0, 0.25);
        const double t = 0.5 + 2.0 * rng.uniform(2, s, 0, 0);
        const auto h1 = heisenberg_channel(1.0, t, j);
        const auto hh = heisenberg_channel(0.5, t, j);
        chans.push_back(h1);
        worst_tp = std::max(worst_tp, h1.tp_defect());
        worst_tp = std::max(worst_tp, hh.tp_defect());
        worst_unital = std::max(worst_unital, (hh.apply(Mat::Identity(4, 4)) - Mat::Identity(4, 4)).cwiseAbs().maxCoeff());
        const RealVec ev = herm_eigvals(choi_from_channel(h1).matrix());
        worst_rank = std::max(worst_rank, std::abs(ev(2)));
    }
    for (const auto &ch : chans) {
        const auto choi = choi_from_channel(ch);
        const auto back = choi_from_channel(channel_from_choi(choi, ch.d_in(), ch.d_out()));
        worst_trip = std::max(worst_trip, choi.matrix().max_abs_diff(back.matrix()));
    }
    o.require(worst_trip <= 1e-8, "Choi round trip error " + fmt(worst_trip));
    o.require(worst_tp <= 1e-10, "trace preservation defect " + fmt(worst_tp));
    o.require(worst_unital <= 1e-10, "unitality defect at p=0.5 " + fmt(worst_unital));
    o.require(worst_rank < 1e-10, "third Choi eigenvalue at p=1 " + fmt(worst_rank));
    o.detail << "round trip " << fmt(worst_trip) << ", tp " << fmt(worst_tp) << ", unital " << fmt(worst_unital)
             << ", lambda3 " << fmt(worst_rank);
}

const std::vector<Check> &checks() {
    static const std::vector<Check> all = {
        {1, "entropy", "trivial-values", entropy_trivial},
        {2, "entropy", "dephasing-closed-form-and-grid-oracle", entropy_dephasing},
        {3, "entropy", "additivity", entropy_additivity},
        {4, "entropy", "block-decomposition", entropy_decomposition},
        {5, "baseline", "dephasing-equality-case", baseline_equality},
        {6, "baseline", "bruteforce-lower-bound", baseline_lower_bound},
        {7, "region", "dephasing-region-properties", region_checks},
        {8, "sweep", "noisy-rqc-identity", sweep_checks},
        {9, "chaos", "heisenberg-bath-properties", chaos_checks},
        {10, "channels", "channel-algebra", channel_checks},
    };
    return all;
}

}  // namespace

const std::vector<std::string> &verify_suites() {
    static const std::vector<std::string> suites = {"entropy", "baseline", "region", "sweep", "chaos", "channels"};
    return suites;
}

double dephasing_hmax_closed_form(double p) {
    return std::log2(1.0 + 2.0 * std::sqrt((p / 2.0) * (1.0 - p / 2.0))) - 1.0;
}

std::vector<CheckResult> run_verify(const VerifyOptions &opts, std::ostream &out) {
    if (!opts.only.empty() &&
        std::find(verify_suites().begin(), verify_suites().end(), opts.only) == verify_suites().end()) {
        throw std::invalid_argument("unknown suite '" + opts.only + "'");
    }
    std::vector<CheckResult> results;
    for (const auto &c : checks()) {
        if (!opts.only.empty() && opts.only != c.suite) {
            continue;
        }
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(o, opts);
        } catch (const std::exception &e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CheckResult r{c.id, c.suite, c.name, o.passed, o.summary(), secs};
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.suite << "/" << r.name << " (" << fmt(secs)
            << " s): " << r.detail << std::endl;
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace qecbound
