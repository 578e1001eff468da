#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qecbound/scenarios.hpp"
#include "qecbound/verify.hpp"

#ifndef QECBOUND_VERSION
#define QECBOUND_VERSION "dev"
#endif

namespace {

using nlohmann::json;
using namespace qecbound;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw UsageError("bad number '" + item + "' in list");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw UsageError("empty list");
    }
    return out;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string &text) {
    const auto x = text.find('x');
    try {
        if (x == std::string::npos) {
            const auto n = std::stoul(text);
            return {n, n};
        }
        return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
    } catch (const std::exception &) {
        throw UsageError("grid must look like 41x41");
    }
}

std::string json_scalar(const json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_float()) {
        std::ostringstream s;
        s.precision(17);
        s << v.get<double>();
        return s.str();
    }
    throw UsageError("unsupported config value " + v.dump());
}

// Turns a JSON object into flag tokens; they are placed before the
// command-line flags so that the latter win.
std::vector<std::string> config_tokens(const json &cfg) {
    std::vector<std::string> tokens;
    for (const auto &[key, value] : cfg.items()) {
        if (key == "command") continue;
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
            continue;
        }
        tokens.push_back(flag);
        if (value.is_array()) {
            std::string joined;
            for (const auto &e : value) joined += (joined.empty() ? "" : ",") + json_scalar(e);
            tokens.push_back(joined);
        } else {
            tokens.push_back(json_scalar(value));
        }
    }
    return tokens;
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_outputs(const ScenarioDataset &ds, const std::string &command, const json &params, std::uint64_t seed,
                   const std::string &output, double seconds) {
    const auto dir = std::filesystem::absolute(output).parent_path();
    std::filesystem::create_directories(dir);
    ds.write_csv(output);
    json manifest = {{"command", command},
                     {"params", params},
                     {"seed", seed},
                     {"version", QECBOUND_VERSION},
                     {"started_at", utc_now()},
                     {"wall_clock_seconds", seconds},
                     {"output", output},
                     {"rows", ds.size()},
                     {"dataset", ds.meta}};
    std::ofstream f(dir / "manifest.json");
    f << manifest.dump(2) << '\n';
    if (!f) {
        throw std::runtime_error("cannot write manifest.json in " + dir.string());
    }
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char **argv) {
    const auto t0 = std::chrono::steady_clock::now();

    // --config is resolved before CLI11 sees the arguments.
    std::vector<std::string> args(argv + 1, argv + argc);
    json config = json::object();
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            continue;
        }
        std::ifstream f(path);
        try {
            if (!f) throw std::runtime_error("cannot open");
            config = json::parse(f);
            if (!config.is_object()) throw std::runtime_error("not a JSON object");
        } catch (const std::exception &e) {
            std::cerr << "error: config " << path << ": " << e.what() << "\n";
            return kExitUsage;
        }
        break;
    }

    CLI::App app{"Error bounds for hybrid classical-quantum storage in noisy qubits", "qecbound"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", QECBOUND_VERSION);
    app.require_subcommand(1);
    app.add_option("--config", "JSON object whose keys mirror the flag names; flags override it");

    std::string noise;
    double param = 0.0;
    std::size_t m = 1;
    double tol = SolverConfig{}.tol;
    int max_iter = SolverConfig{}.max_iter;
    std::int64_t n_qubits = 0;
    std::string grid = "41x41";
    std::string output;
    double p = 0.0, f = 0.0, c = 0.0, q = 0.0;
    std::string q_list;
    std::int64_t n_min = 0, n_max = 0;
    std::size_t n_pairs = 0, samples = 0;
    std::uint64_t seed = 0;
    double t_max = 10.0, t_step = 0.1;
    double coupling_mean = 1.0, coupling_std = 0.25;
    unsigned threads = 0;
    bool bruteforce = false;
    std::string only;
    bool perturb = false;

    auto *hmax = app.add_subcommand("hmax", "H_max(A|B) of the Choi state of m copies of a qubit channel");
    hmax->add_option("--noise", noise, "dephasing | amp_damp")->required();
    hmax->add_option("--param", param, "p or gamma in [0,1]")->required();
    hmax->add_option("--m", m, "qubits per block")->capture_default_str();
    hmax->add_option("--tol", tol)->capture_default_str();
    hmax->add_option("--max-iter", max_iter)->capture_default_str();

    auto *region = app.add_subcommand("region", "delta bound over a (c, q) grid");
    region->add_option("--noise", noise)->required();
    region->add_option("--param", param)->required();
    region->add_option("--N", n_qubits, "number of noisy qubits")->required();
    region->add_option("--grid", grid, "points along c and q, e.g. 41x41")->capture_default_str();
    region->add_option("-o,--output", output, "CSV path")->required();

    auto *sweep = app.add_subcommand("noisy-sweep", "direct storage vs noiseless vs noisy random circuits");
    sweep->add_option("--p", p, "dephasing parameter")->required();
    sweep->add_option("--f", f, "gate fidelity")->required();
    sweep->add_option("--c", c)->required();
    sweep->add_option("--q-list", q_list, "comma separated q values")->required();
    sweep->add_option("--N-min", n_min)->required();
    sweep->add_option("--N-max", n_max)->required();
    sweep->add_option("-o,--output", output)->required();

    auto *chaos = app.add_subcommand("chaos", "Monte-Carlo bound for Heisenberg bath dynamics");
    chaos->add_option("--p", p, "bath Boltzmann factor in [0.5,1]")->required();
    chaos->add_option("--n", n_pairs, "system has 2n qubits")->required();
    chaos->add_option("--samples", samples)->required();
    chaos->add_option("--seed", seed)->capture_default_str();
    chaos->add_option("--t-max", t_max)->capture_default_str();
    chaos->add_option("--t-step", t_step)->capture_default_str();
    chaos->add_option("--c", c)->capture_default_str();
    chaos->add_option("--q", q)->default_val(0.5);
    chaos->add_option("--coupling-mean", coupling_mean)->capture_default_str();
    chaos->add_option("--coupling-std", coupling_std)->capture_default_str();
    chaos->add_option("--threads", threads, "0 = hardware concurrency")->capture_default_str();
    chaos->add_option("-o,--output", output)->required();

    auto *baseline = app.add_subcommand("baseline", "error of storing information without encoding");
    baseline->add_option("--noise", noise)->required();
    baseline->add_option("--param", param)->required();
    baseline->add_option("--c", c)->required();
    baseline->add_option("--q", q)->required();
    baseline->add_option("--N", n_qubits)->required();
    baseline->add_flag("--bruteforce", bruteforce, "also compute the exact trace distance");
    baseline->add_option("-o,--output", output)->required();

    auto *verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_option("--only", only, "entropy | baseline | region | sweep | chaos | channels");
    verify->add_flag("--perturb-closed-form", perturb)->group("");

    if (config.contains("command") && (args.empty() || args.front().empty() || args.front()[0] == '-')) {
        args.insert(args.begin(), config["command"].get<std::string>());
    }
    std::vector<std::string> tokens;
    try {
        const auto extra = config_tokens(config);
        tokens.push_back(args.empty() ? "" : args.front());
        tokens.insert(tokens.end(), extra.begin(), extra.end());
        tokens.insert(tokens.end(), args.empty() ? args.end() : args.begin() + 1, args.end());
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (args.empty()) {
        tokens.clear();
    }
    std::reverse(tokens.begin(), tokens.end());

    try {
        app.parse(tokens);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "verify") {
            VerifyOptions opts;
            opts.only = only;
            opts.perturb_closed_form = perturb;
            const auto results = run_verify(opts, std::cout);
            std::size_t failed = 0;
            for (const auto &r : results) failed += r.passed ? 0 : 1;
            std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
            return failed == 0 ? kExitOk : kExitVerifyFailed;
        }
        if (command == "hmax") {
            if (m == 0 || m > 3) throw UsageError("--m must be 1, 2 or 3");
            SolverConfig cfg;
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            const NoiseSpec spec{parse_noise_kind(noise), param};
            const QuantumChannel ch = tensor_channel(std::vector<QuantumChannel>(m, spec.channel()));
            const auto r = hmax_cond(choi_from_channel(ch), {"A"}, {"B"}, cfg);
            json out = {{"value", r.value},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"upper_bound", r.upper_bound},
                        {"last_improvement", r.last_improvement},
                        {"noise", noise_name(spec.kind)},
                        {"param", param},
                        {"m", m}};
            std::cout << out.dump() << "\n";
            return r.converged ? kExitOk : kExitNotConverged;
        }

        ScenarioDataset ds;
        json params;
        if (command == "region") {
            const auto [nc, nq] = parse_grid(grid);
            const auto points = rate_grid(nc, nq);
            ds = rqc_region_dataset(parse_noise_kind(noise), param, n_qubits, points);
            params = {{"noise", noise}, {"param", param}, {"N", n_qubits}, {"grid", grid}};
        } else if (command == "noisy-sweep") {
            const auto qs = parse_list(q_list);
            ds = rqc_noisy_sweep(p, f, c, qs, n_min, n_max);
            params = {{"p", p}, {"f", f}, {"c", c}, {"q-list", qs}, {"N-min", n_min}, {"N-max", n_max}};
        } else if (command == "chaos") {
            ChaosConfig cfg;
            cfg.p = p;
            cfg.t_grid = uniform_time_grid(t_max, t_step);
            cfg.n_pairs = n_pairs;
            cfg.c = c;
            cfg.q = q;
            cfg.samples = samples;
            cfg.coupling_mean = coupling_mean;
            cfg.coupling_std = coupling_std;
            cfg.seed = seed;
            cfg.threads = threads;
            ds = chaos_error_curve(cfg);
            params = {{"p", p},           {"n", n_pairs},       {"samples", samples},
                      {"t-max", t_max},   {"t-step", t_step},   {"c", c},
                      {"q", q},           {"coupling-mean", coupling_mean}, {"coupling-std", coupling_std}};
        } else if (command == "baseline") {
            const BaselineCase bc{parse_noise_kind(noise), param, {c, q}, n_qubits};
            ds = ScenarioDataset({"noise", "param", "c", "q", "N", "case_id", "closed_form", "bruteforce"});
            const Cell brute = bruteforce ? Cell{baseline_bruteforce(bc)} : Cell{};
            ds.add_row({std::string(noise_name(bc.noise)), param, c, q, n_qubits,
                        std::int64_t{baseline_case_id(bc.pt)}, baseline_closed_form(bc), brute});
            params = {{"noise", noise}, {"param", param}, {"c", c}, {"q", q}, {"N", n_qubits}, {"bruteforce", bruteforce}};
        }
        write_outputs(ds, command, params, seed, output, elapsed(t0));
        const auto unconverged = ds.meta.value("unconverged", 0);
        std::int64_t flagged = unconverged;
        if (command == "chaos") {
            flagged = static_cast<std::int64_t>(ds.number(ds.size() - 1, "flagged"));
        }
        if (flagged > 0) {
            std::cerr << "warning: " << flagged << " solver runs did not converge; rows flagged\n";
            return kExitNotConverged;
        }
        return kExitOk;
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
