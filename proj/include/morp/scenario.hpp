#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "morp/bench.hpp"
#include "morp/partition.hpp"
#include "morp/plant.hpp"
#include "morp/sim.hpp"
#include "morp/synth.hpp"

namespace morp::io {

struct DesignSpec {
    synth::Strategy strategy = synth::Strategy::PartitionIndependent;
    synth::DesignOptions options;
};

struct BenchSpec {
    int terms = 1000;
    int repetitions = 5;
    std::uint64_t seed = 42;
    int follower = 0;
};

// A complete experiment description: plant, schedule, simulation setup and
// design selection, with an optional benchmark section.
struct Scenario {
    int version = 1;
    std::string name;
    plant::MasModel model;
    partition::PartitionSchedule schedule;
    sim::SimConfig sim;
    DesignSpec design;
    std::optional<BenchSpec> bench;
};

// JSON round trip. Matrices are nested arrays of finite doubles; parsing
// rejects non-finite entries and malformed shapes with std::runtime_error.
nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

// Loads a scenario from a file path, or from the built-in set when the
// argument names one (an existing file of the same name wins).
Scenario load_scenario(const std::string& path_or_name);

std::vector<std::string> builtin_names();
Scenario builtin_scenario(const std::string& name); // throws std::out_of_range

// Controller design artifact round trip, including spectral certificates.
nlohmann::json design_report_json(const synth::ControllerDesign& d, const plant::MasModel& m);
synth::ControllerDesign design_from_json(const nlohmann::json& j);

// Machine-readable failure body for commands that abort on conditions.
nlohmann::json failure_json(const std::string& error,
                            const std::vector<synth::ConditionFailure>& failures);

nlohmann::json checks_json(const std::vector<synth::ConditionCheck>& checks);

// Trajectory CSV: t, leader state, then per follower x, eta, u, e columns.
void write_sim_csv(const plant::MasModel& m, const sim::SimResult& r, std::ostream& os);

// Per-segment tail norms plus the design's spectral certificates.
nlohmann::json sim_summary_json(const plant::MasModel& m, const synth::ControllerDesign& d,
                                const sim::SimResult& r);

// Shortest round-trip decimal formatting (used by all CSV writers).
std::string format_double(double value);

} // namespace morp::io
