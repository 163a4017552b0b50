#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "morp/errors.hpp"
#include "morp/scenario.hpp"
#include "morp/sim.hpp"
#include "morp/solve.hpp"
#include "morp/synth.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;    // failed condition, infeasibility, incompatibility
constexpr int kBadInput = 2;  // unreadable or malformed input

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

morp::synth::Strategy pick_strategy(const morp::io::Scenario& scenario,
                                    const std::string& override_name) {
    if (override_name.empty()) {
        return scenario.design.strategy;
    }
    return override_name == "one" ? morp::synth::Strategy::PartitionDependent
                                  : morp::synth::Strategy::PartitionIndependent;
}

morp::synth::DesignOutcome run_design(const morp::io::Scenario& scenario,
                                      morp::synth::Strategy strategy) {
    const auto& transform = scenario.schedule.segments.front().transform;
    if (strategy == morp::synth::Strategy::PartitionDependent) {
        return morp::synth::design_strategy_one(scenario.model, transform,
                                                scenario.design.options);
    }
    return morp::synth::design_strategy_two(scenario.model, transform, scenario.design.options);
}

int cmd_check(const morp::io::Scenario& scenario, const std::string& strategy_name,
              const std::string& out_path) {
    const auto strategy = pick_strategy(scenario, strategy_name);
    const auto checks =
        morp::synth::check_conditions(scenario.model, scenario.schedule.segments[0].transform,
                                      strategy);
    bool required_ok = true;
    for (const auto& check : checks) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name
                  << (check.required ? "" : " (informational)") << "\n";
        for (const auto& failure : check.failures) {
            std::cout << "       follower " << failure.follower << ": " << failure.detail
                      << "\n";
        }
        if (check.required && !check.passed) {
            required_ok = false;
        }
    }
    if (!out_path.empty()) {
        write_text_file(out_path, morp::io::checks_json(checks).dump(2) + "\n");
    }
    return required_ok ? kOk : kFailed;
}

int cmd_design(const morp::io::Scenario& scenario, const std::string& strategy_name,
               std::string out_path) {
    const auto strategy = pick_strategy(scenario, strategy_name);
    const auto outcome = run_design(scenario, strategy);
    if (!outcome.ok()) {
        std::cout << morp::io::failure_json("design conditions failed", outcome.failures).dump(2)
                  << std::endl;
        return kFailed;
    }
    if (out_path.empty()) {
        out_path = scenario.name + "_design.json";
    }
    const auto report = morp::io::design_report_json(*outcome.design, scenario.model);
    write_text_file(out_path, report.dump(2) + "\n");
    std::cout << "design ok: mu = " << outcome.design->mu
              << ", solver calls = " << outcome.design->solver_calls << ", report at "
              << out_path << "\n";
    return kOk;
}

int cmd_sim(const morp::io::Scenario& scenario, const std::string& design_path,
            std::string csv_path, std::string summary_path) {
    morp::synth::ControllerDesign design;
    if (!design_path.empty()) {
        std::ifstream in(design_path);
        if (!in) {
            std::cerr << "cannot open design artifact: " << design_path << "\n";
            return kBadInput;
        }
        nlohmann::json j;
        in >> j;
        design = morp::io::design_from_json(j);
        if (design.size() != static_cast<int>(scenario.model.followers.size())) {
            std::cout << morp::io::failure_json("design artifact does not match scenario", {})
                             .dump(2)
                      << std::endl;
            return kFailed;
        }
        for (size_t i = 0; i < scenario.model.followers.size(); ++i) {
            const auto& fol = scenario.model.followers[i];
            const auto& gains = design.followers[i];
            if (gains.k1.rows() != fol.input_dim() || gains.k1.cols() != fol.state_dim() ||
                gains.k2.rows() != fol.input_dim() ||
                gains.k2.cols() != scenario.model.exosystem.dim()) {
                std::cout << morp::io::failure_json("design gains do not match model dimensions",
                                                    {})
                                 .dump(2)
                          << std::endl;
                return kFailed;
            }
        }
    } else {
        auto outcome = run_design(scenario, scenario.design.strategy);
        if (!outcome.ok()) {
            std::cout
                << morp::io::failure_json("design conditions failed", outcome.failures).dump(2)
                << std::endl;
            return kFailed;
        }
        design = std::move(*outcome.design);
    }

    const auto result = morp::sim::simulate(scenario.model, design, scenario.schedule,
                                            scenario.sim);

    if (csv_path.empty()) {
        csv_path = scenario.name + "_sim.csv";
    }
    if (summary_path.empty()) {
        summary_path = scenario.name + "_summary.json";
    }
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + csv_path);
        }
        morp::io::write_sim_csv(scenario.model, result, out);
    }
    write_text_file(summary_path,
                    morp::io::sim_summary_json(scenario.model, design, result).dump(2) + "\n");

    for (size_t k = 0; k < result.segments.size(); ++k) {
        const auto& seg = result.segments[k];
        std::cout << "segment " << k << " [" << seg.t_start << ", " << seg.t_end
                  << "]: tail max error = " << seg.tail_max_error
                  << ", observer error at end = " << seg.end_observer_error << "\n";
    }
    std::cout << "trajectories at " << csv_path << ", summary at " << summary_path << "\n";
    return kOk;
}

int cmd_bench(const morp::io::Scenario& scenario, int terms_override, int reps_override,
              std::optional<std::uint64_t> seed_override, std::string csv_path) {
    morp::io::BenchSpec spec = scenario.bench.value_or(morp::io::BenchSpec{});
    if (terms_override >= 0) {
        spec.terms = terms_override;
    }
    if (reps_override > 0) {
        spec.repetitions = reps_override;
    }
    if (seed_override) {
        spec.seed = *seed_override;
    }
    if (const char* env = std::getenv("MORP_SEED")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            std::cerr << "MORP_SEED is not an unsigned integer: " << env << "\n";
            return kBadInput;
        }
        spec.seed = parsed;
    }
    if (spec.follower < 0 ||
        spec.follower >= static_cast<int>(scenario.model.followers.size())) {
        std::cerr << "bench follower index out of range\n";
        return kBadInput;
    }

    const auto terms = morp::bench::random_terms(spec.terms, spec.seed);
    morp::bench::BenchReport report;
    try {
        report = morp::bench::run_benchmark(
            scenario.model.followers[static_cast<size_t>(spec.follower)], scenario.model.exosystem,
            terms, spec.repetitions);
    } catch (const morp::NotApplicable& e) {
        std::cout << morp::io::failure_json(e.what(), {}).dump(2) << std::endl;
        return kFailed;
    }
    report.seed = spec.seed;

    if (csv_path.empty()) {
        csv_path = scenario.name + "_bench.csv";
    }
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + csv_path);
    }
    morp::bench::write_csv(report, out);

    std::cout << "seed " << report.seed << ", repetitions " << report.repetitions << "\n";
    if (!report.term_counts.empty()) {
        const size_t last = report.term_counts.size() - 1;
        const double speedup = report.elapsed_two[last] > 0.0
                                   ? report.elapsed_one[last] / report.elapsed_two[last]
                                   : 0.0;
        std::cout << "M = " << report.term_counts[last]
                  << ": partition-dependent " << report.elapsed_one[last]
                  << " s, partition-independent " << report.elapsed_two[last]
                  << " s (speedup " << speedup << "x, solves " << report.solver_calls_one[last]
                  << " vs " << report.solver_calls_two[last] << ")\n";
    }
    std::cout << "report at " << csv_path << "\n";
    return kOk;
}

int cmd_scenarios(const std::string& dir) {
    if (dir.empty()) {
        for (const auto& name : morp::io::builtin_names()) {
            std::cout << name << "\n";
        }
        return kOk;
    }
    for (const auto& name : morp::io::builtin_names()) {
        const auto scenario = morp::io::builtin_scenario(name);
        write_text_file(dir + "/" + name + ".json", morp::io::to_json(scenario).dump(2) + "\n");
    }
    std::cout << "wrote " << morp::io::builtin_names().size() << " scenarios to " << dir << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthesis, verification and simulation of distributed feedforward "
                 "controllers for multi-agent output regulation"};
    app.require_subcommand(1);

    std::string scenario_arg, strategy_name, out_path, design_path, csv_path, summary_path;
    std::string dump_dir;
    int terms_override = -1;
    int reps_override = 0;
    std::optional<std::uint64_t> seed_override;

    auto* check = app.add_subcommand("check", "evaluate the design conditions for a scenario");
    check->add_option("scenario", scenario_arg, "scenario file or built-in name")->required();
    check->add_option("--strategy", strategy_name, "one|two (default: scenario setting)")
        ->check(CLI::IsMember({"one", "two"}));
    check->add_option("--out", out_path, "write the checks as JSON");

    auto* design = app.add_subcommand("design", "synthesize controller gains");
    design->add_option("scenario", scenario_arg, "scenario file or built-in name")->required();
    design->add_option("--strategy", strategy_name, "one|two (default: scenario setting)")
        ->check(CLI::IsMember({"one", "two"}));
    design->add_option("--out", out_path, "design report path (default <name>_design.json)");

    auto* sim = app.add_subcommand("sim", "simulate the closed loop over the schedule");
    sim->add_option("scenario", scenario_arg, "scenario file or built-in name")->required();
    sim->add_option("--design", design_path, "use a previously written design artifact");
    sim->add_option("--csv", csv_path, "trajectory CSV path (default <name>_sim.csv)");
    sim->add_option("--summary", summary_path, "summary JSON path (default <name>_summary.json)");

    auto* bench = app.add_subcommand("bench", "compare per-term cost of both strategies");
    bench->add_option("scenario", scenario_arg, "scenario file or built-in name")->required();
    bench->add_option("--terms", terms_override, "number of random transformation terms");
    bench->add_option("--reps", reps_override, "repetitions per measurement");
    bench->add_option("--seed", seed_override, "RNG seed (MORP_SEED env wins)");
    bench->add_option("--csv", csv_path, "report CSV path (default <name>_bench.csv)");

    auto* scenarios = app.add_subcommand("scenarios", "list or export the built-in scenarios");
    scenarios->add_option("--dir", dump_dir, "write every built-in as <dir>/<name>.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (scenarios->parsed()) {
            return cmd_scenarios(dump_dir);
        }
        morp::io::Scenario scenario;
        try {
            scenario = morp::io::load_scenario(scenario_arg);
        } catch (const std::exception& e) {
            std::cerr << "scenario error: " << e.what() << "\n";
            return kBadInput;
        }
        if (check->parsed()) {
            return cmd_check(scenario, strategy_name, out_path);
        }
        if (design->parsed()) {
            return cmd_design(scenario, strategy_name, out_path);
        }
        if (sim->parsed()) {
            return cmd_sim(scenario, design_path, csv_path, summary_path);
        }
        if (bench->parsed()) {
            return cmd_bench(scenario, terms_override, reps_override, seed_override, csv_path);
        }
    } catch (const morp::ConditionFailed& e) {
        std::cout << morp::io::failure_json(e.what(), {}).dump(2) << std::endl;
        return kFailed;
    } catch (const morp::ConfigError& e) {
        std::cout << morp::io::failure_json(e.what(), {}).dump(2) << std::endl;
        return kFailed;
    } catch (const morp::DomainError& e) {
        std::cout << morp::io::failure_json(e.what(), {}).dump(2) << std::endl;
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kOk;
}
