// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: compute entropic quantities on state files, run the
// verification suites, and run chain-rule sweeps. Exit codes: 0 success,
// 1 verification failure, 2 usage/input error, 3 dimension/label error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "renyi/io.hpp"
#include "renyi/verify.hpp"

namespace {

#ifndef RENYI_VERSION
#define RENYI_VERSION "0.0.0"
#endif

std::vector<std::string> parse_labels(const std::string& side) {
    std::vector<std::string> out;
    if (side.find(',') != std::string::npos) {
        std::string cur;
        for (char c : side) {
            if (c == ',') {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
    } else {
        for (char c : side) out.emplace_back(1, c);
    }
    return out;
}

struct SystemsSpec {
    std::vector<std::string> target;
    std::vector<std::string> cond;
};

SystemsSpec parse_systems(const std::string& spec) {
    auto bar = spec.find('|');
    if (bar == std::string::npos)
        throw renyi::Error("systems must look like \"A|B\" or \"AB|C\"");
    return {parse_labels(spec.substr(0, bar)), parse_labels(spec.substr(bar + 1))};
}

int cmd_compute(const std::string& state_path, const std::string& quantity,
                const std::string& systems, double alpha,
                const std::optional<std::string>& sigma_path, std::uint64_t seed,
                const renyi::OptimizerConfig& cfg) {
    using namespace renyi;
    auto [mat, fact] = matrix_from_json(load_json_file(state_path));

    RenyiOrder order(alpha);
    SeededSampler sampler(seed);
    EntropyResult result;
    std::string systems_out = systems;

    if (quantity == "divergence") {
        if (!sigma_path) throw Error("divergence requires --sigma");
        auto [sig, sig_fact] = matrix_from_json(load_json_file(*sigma_path));
        if (sig.rows() != mat.rows())
            throw DimensionMismatch("state and sigma dimensions differ");
        result.method = order.is_von_neumann() ? "von_neumann" : "direct";
        result.value = divergence(mat, sig, order);
        systems_out = "";
    } else if (quantity == "entropy") {
        DensityOperator rho(mat, fact);
        SystemsSpec sys = parse_systems(systems);
        if (sigma_path) {
            auto [sig, sig_fact] = matrix_from_json(load_json_file(*sigma_path));
            result = cond_entropy_pinned(rho, sys.cond, sig, order);
        } else {
            result = cond_entropy(rho, sys.cond, order, cfg, sampler);
        }
    } else {
        throw Error("unknown quantity: " + quantity + " (use entropy|divergence)");
    }

    TensorFactorization sig_fact =
        quantity == "entropy" ? fact.restricted_to(parse_systems(systems).cond)
                              : TensorFactorization();
    Json out = entropy_result_to_json(result, quantity, systems_out, alpha, seed,
                                      result.optimizer_state ? &sig_fact : nullptr);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int trials,
               const std::string& out_dir, const renyi::OptimizerConfig& cfg) {
    using namespace renyi;
    SuiteResult res;
    if (suite == "duality") {
        res = run_duality_suite(seed, trials, cfg);
    } else if (suite == "lemma4") {
        res = run_lemma4_suite(seed, trials, cfg);
    } else if (suite == "lemma6") {
        res = run_lemma6_suite(seed, trials, cfg);
    } else if (suite == "interpolation") {
        res = run_interpolation_suite(seed, trials);
    } else {
        std::cerr << "unknown suite: " << suite
                  << " (use duality|lemma4|lemma6|interpolation)\n";
        return 2;
    }

    RunManifest manifest;
    manifest.command = "verify";
    manifest.parameters = {{"suite", suite}, {"trials", trials}};
    manifest.master_seed = seed;
    manifest.tool_version = RENYI_VERSION;

    Json report;
    report["manifest"] = manifest_to_json(manifest);
    report["suite"] = res.name;
    report["trials"] = res.trials;
    report["violations"] = res.violations;
    report["worst_residual"] = res.worst_residual;
    report["max_restart_gap"] = res.max_restart_gap;
    report["failures"] = res.failures;

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text_file(out_dir + "/verify_" + suite + ".json", report.dump(2) + "\n");
    }
    std::cout << report.dump(2) << "\n";
    return res.violations == 0 ? 0 : 1;
}

int cmd_sweep(const std::string& triples_spec, std::optional<double> beta,
              std::optional<double> gamma, const std::string& ensemble, int trials,
              std::uint64_t seed, const std::string& out_dir, const std::string& format,
              const std::vector<int>& dims, int rank, int threads, bool optimized,
              const renyi::OptimizerConfig& cfg) {
    using namespace renyi;
    std::vector<ChainTriple> triples;
    if (beta && gamma) {
        triples.push_back(complete_triple(RenyiOrder(*beta), RenyiOrder(*gamma)));
    } else if (triples_spec == "grid") {
        triples = default_triple_grid();
    } else {
        throw Error("give --beta/--gamma or --triples grid");
    }

    SweepSpec spec;
    std::vector<std::string> labels = {"A", "B", "C"};
    if (dims.size() != 3) throw DimensionMismatch("--dims must have three entries");
    spec.factorization = TensorFactorization(labels, dims);
    spec.trials = trials;
    spec.rank = rank > 0 ? rank : spec.factorization.total_dim();
    spec.ensemble = ensemble;
    spec.include_optimized = optimized;
    spec.threads = threads;

    SeededSampler master(seed);
    SweepResult res = sweep(triples, spec, cfg, master);

    RunManifest manifest;
    manifest.command = "sweep";
    manifest.parameters = {{"triples", triples_spec}, {"ensemble", ensemble},
                           {"trials", trials},        {"dims", dims},
                           {"rank", spec.rank},       {"optimized", optimized}};
    manifest.master_seed = seed;
    manifest.tool_version = RENYI_VERSION;

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        if (format == "json" || format == "both")
            write_text_file(out_dir + "/sweep.jsonl", sweep_to_jsonl(res, manifest));
        if (format == "csv" || format == "both")
            write_text_file(out_dir + "/sweep.csv", sweep_to_csv(res));
    }

    Json summary;
    summary["manifest"] = manifest_to_json(manifest);
    summary["violations"] = res.violations;
    summary["worst_margin_bits"] = json_value_bits(res.worst_margin);
    summary["max_restart_gap"] = res.max_restart_gap;
    Json per_triple = Json::array();
    for (const auto& s : res.summaries) {
        per_triple.push_back({{"triple", s.triple_id},
                              {"trials", s.trials},
                              {"min_margin_bits", json_value_bits(s.min_margin)},
                              {"violations", s.violations},
                              {"theorem1_product_vs_one_disagrees", s.product_disagrees}});
    }
    summary["triples"] = per_triple;
    std::cout << summary.dump(2) << "\n";
    return res.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sandwiched Renyi divergences, conditional entropies, and chain-rule "
                 "verification harnesses"};
    app.set_version_flag("--version", std::string(RENYI_VERSION));
    app.set_config("--config");
    app.require_subcommand(1);

    renyi::OptimizerConfig cfg;
    std::uint64_t seed = 1;
    app.add_option("--restarts", cfg.restarts, "optimizer restarts")->capture_default_str();
    app.add_option("--max-iters", cfg.max_iters, "optimizer iterations per restart")
        ->capture_default_str();
    app.add_option("--rel-tol", cfg.rel_tol, "optimizer relative tolerance")
        ->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();

    auto* compute = app.add_subcommand("compute", "compute one quantity on a state file");
    compute->fallthrough();
    std::string state_path, quantity = "entropy", systems = "A|B";
    std::string sigma_path;
    double alpha = 2.0;
    compute->add_option("--state", state_path, "state file (matrix JSON)")->required();
    compute->add_option("--quantity", quantity, "entropy|divergence")->capture_default_str();
    compute->add_option("--systems", systems, "system split, e.g. A|B or AB|C")
        ->capture_default_str();
    compute->add_option("--alpha", alpha, "Renyi order")->required();
    compute->add_option("--sigma", sigma_path, "conditioning/reference state file");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->fallthrough();
    std::string suite;
    int trials = 100;
    std::string out_dir;
    verify->add_option("--suite", suite, "duality|lemma4|lemma6|interpolation")->required();
    verify->add_option("--trials", trials, "trials per suite")->capture_default_str();
    verify->add_option("--out", out_dir, "report output directory");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a chain-rule sweep");
    sweep_cmd->fallthrough();
    std::string triples_spec = "grid", ensemble = "both", format = "both";
    std::vector<int> dims = {2, 2, 2};
    int rank = 0, threads = 1, sweep_trials = 50;
    double beta_opt = 0.0, gamma_opt = 0.0;
    bool optimized = false;
    bool has_beta = false, has_gamma = false;
    sweep_cmd->add_option("--triples", triples_spec, "grid")->capture_default_str();
    auto* bopt = sweep_cmd->add_option("--beta", beta_opt, "beta order for a single triple");
    auto* gopt = sweep_cmd->add_option("--gamma", gamma_opt, "gamma order for a single triple");
    sweep_cmd->add_option("--alpha", alpha, "(ignored; alpha is derived from the constraint)");
    sweep_cmd->add_option("--ensemble", ensemble, "ginibre|corners|both")
        ->capture_default_str();
    sweep_cmd->add_option("--trials", sweep_trials, "Ginibre trials per triple")
        ->capture_default_str();
    sweep_cmd->add_option("--dims", dims, "three subsystem dimensions")
        ->capture_default_str();
    sweep_cmd->add_option("--rank", rank, "state rank (default full)");
    sweep_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
    sweep_cmd->add_option("--out", out_dir, "report output directory");
    sweep_cmd->add_option("--format", format, "json|csv|both")->capture_default_str();
    sweep_cmd->add_flag("--optimized", optimized, "also evaluate fully optimized variants");

    try {
        app.parse(argc, argv);
        has_beta = bopt->count() > 0;
        has_gamma = gopt->count() > 0;

        if (compute->parsed()) {
            return cmd_compute(state_path, quantity, systems, alpha,
                               sigma_path.empty() ? std::nullopt
                                                  : std::optional<std::string>(sigma_path),
                               seed, cfg);
        }
        if (verify->parsed()) return cmd_verify(suite, seed, trials, out_dir, cfg);
        if (sweep_cmd->parsed()) {
            return cmd_sweep(triples_spec,
                             has_beta ? std::optional<double>(beta_opt) : std::nullopt,
                             has_gamma ? std::optional<double>(gamma_opt) : std::nullopt,
                             ensemble, sweep_trials, seed, out_dir, format, dims, rank,
                             threads, optimized, cfg);
        }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const renyi::DimensionMismatch& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return 3;
    } catch (const renyi::UnknownLabel& e) {
        std::cerr << "label error: " << e.what() << "\n";
        return 3;
    } catch (const renyi::LabelPartitionInvalid& e) {
        std::cerr << "label error: " << e.what() << "\n";
        return 3;
    } catch (const renyi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
