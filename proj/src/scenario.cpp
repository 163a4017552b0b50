#include "morp/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "morp/solve.hpp"

namespace morp::io {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

double finite_number(const json& j, const std::string& where) {
    if (!j.is_number()) {
        throw std::runtime_error(where + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw std::runtime_error(where + ": entries must be finite");
    }
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw std::runtime_error(where + ": expected a nonempty array of rows");
    }
    const size_t rows = j.size();
    if (!j[0].is_array()) {
        throw std::runtime_error(where + ": expected nested arrays");
    }
    const size_t cols = j[0].size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw std::runtime_error(where + ": rows must have equal length");
        }
        for (size_t k = 0; k < cols; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                finite_number(j[i][k], where);
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw std::runtime_error(where + ": expected an array");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = finite_number(j[i], where);
    }
    return v;
}

const json& field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw std::runtime_error(where + ": missing field '" + key + "'");
    }
    return *it;
}

std::string strategy_to_string(synth::Strategy s) {
    return s == synth::Strategy::PartitionDependent ? "one" : "two";
}

synth::Strategy strategy_from_string(const std::string& s) {
    if (s == "one") {
        return synth::Strategy::PartitionDependent;
    }
    if (s == "two") {
        return synth::Strategy::PartitionIndependent;
    }
    throw std::runtime_error("design.strategy must be \"one\" or \"two\"");
}

} // namespace

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

json to_json(const Scenario& s) {
    json j;
    j["version"] = s.version;
    j["name"] = s.name;

    json model;
    model["exosystem"] = matrix_to_json(s.model.exosystem.a0);
    json followers = json::array();
    for (const auto& fol : s.model.followers) {
        json f;
        f["a"] = matrix_to_json(fol.a);
        f["b"] = matrix_to_json(fol.b);
        f["c"] = matrix_to_json(fol.c);
        f["d"] = matrix_to_json(fol.d);
        f["e"] = matrix_to_json(fol.e);
        f["g"] = matrix_to_json(fol.g);
        f["f"] = matrix_to_json(fol.f);
        followers.push_back(std::move(f));
    }
    model["followers"] = std::move(followers);
    model["graph"] = {{"adjacency", matrix_to_json(s.model.graph.adjacency)},
                      {"pinning", vector_to_json(s.model.graph.pinning)}};
    j["model"] = std::move(model);

    json schedule;
    schedule["horizon"] = s.schedule.horizon;
    json segments = json::array();
    for (const auto& seg : s.schedule.segments) {
        segments.push_back(
            {{"t_start", seg.t_start}, {"terms", vector_to_json(seg.transform.terms)}});
    }
    schedule["segments"] = std::move(segments);
    j["schedule"] = std::move(schedule);

    json sim;
    sim["dt"] = s.sim.dt;
    sim["tail_fraction"] = s.sim.tail_fraction;
    sim["store_stride"] = s.sim.store_stride;
    json initial;
    json x0 = json::array();
    for (const auto& x : s.sim.initial.x) {
        x0.push_back(vector_to_json(x));
    }
    json eta0 = json::array();
    for (const auto& eta : s.sim.initial.eta) {
        eta0.push_back(vector_to_json(eta));
    }
    initial["x"] = std::move(x0);
    initial["eta"] = std::move(eta0);
    initial["v"] = vector_to_json(s.sim.initial.v);
    sim["initial"] = std::move(initial);
    j["sim"] = std::move(sim);

    j["design"] = {{"strategy", strategy_to_string(s.design.strategy)},
                   {"mu_min", s.design.options.mu_min},
                   {"q_scale", s.design.options.q_scale},
                   {"r_scale", s.design.options.r_scale}};

    if (s.bench) {
        j["bench"] = {{"terms", s.bench->terms},
                      {"repetitions", s.bench->repetitions},
                      {"seed", s.bench->seed},
                      {"follower", s.bench->follower}};
    }
    return j;
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.version = field(j, "version", "scenario").get<int>();
    if (s.version != 1) {
        throw std::runtime_error("unsupported scenario version");
    }
    s.name = j.value("name", std::string("scenario"));

    const json& model = field(j, "model", "scenario");
    s.model.exosystem.a0 = matrix_from_json(field(model, "exosystem", "model"), "exosystem");
    for (const auto& f : field(model, "followers", "model")) {
        plant::FollowerModel fol;
        fol.a = matrix_from_json(field(f, "a", "follower"), "follower.a");
        fol.b = matrix_from_json(field(f, "b", "follower"), "follower.b");
        fol.c = matrix_from_json(field(f, "c", "follower"), "follower.c");
        fol.d = matrix_from_json(field(f, "d", "follower"), "follower.d");
        fol.e = matrix_from_json(field(f, "e", "follower"), "follower.e");
        fol.g = matrix_from_json(field(f, "g", "follower"), "follower.g");
        fol.f = matrix_from_json(field(f, "f", "follower"), "follower.f");
        s.model.followers.push_back(std::move(fol));
    }
    const json& graph = field(model, "graph", "model");
    s.model.graph.adjacency = matrix_from_json(field(graph, "adjacency", "graph"), "adjacency");
    s.model.graph.pinning = vector_from_json(field(graph, "pinning", "graph"), "pinning");

    const json& schedule = field(j, "schedule", "scenario");
    s.schedule.horizon = finite_number(field(schedule, "horizon", "schedule"), "horizon");
    for (const auto& seg : field(schedule, "segments", "schedule")) {
        partition::ScheduleSegment segment;
        segment.t_start = finite_number(field(seg, "t_start", "segment"), "t_start");
        segment.transform.terms = vector_from_json(field(seg, "terms", "segment"), "terms");
        s.schedule.segments.push_back(std::move(segment));
    }
    s.schedule.validate();

    const json& sim = field(j, "sim", "scenario");
    s.sim.dt = finite_number(field(sim, "dt", "sim"), "dt");
    s.sim.tail_fraction = sim.value("tail_fraction", 0.1);
    s.sim.store_stride = sim.value("store_stride", 10);
    s.sim.horizon = s.schedule.horizon;
    const json& initial = field(sim, "initial", "sim");
    for (const auto& x : field(initial, "x", "initial")) {
        s.sim.initial.x.push_back(vector_from_json(x, "initial.x"));
    }
    for (const auto& eta : field(initial, "eta", "initial")) {
        s.sim.initial.eta.push_back(vector_from_json(eta, "initial.eta"));
    }
    s.sim.initial.v = vector_from_json(field(initial, "v", "initial"), "initial.v");

    const json& design = field(j, "design", "scenario");
    s.design.strategy = strategy_from_string(field(design, "strategy", "design").get<std::string>());
    s.design.options.mu_min = design.value("mu_min", 1.0);
    s.design.options.q_scale = design.value("q_scale", 1.0);
    s.design.options.r_scale = design.value("r_scale", 1.0);

    if (j.contains("bench")) {
        BenchSpec bench;
        const json& b = j["bench"];
        bench.terms = b.value("terms", 1000);
        bench.repetitions = b.value("repetitions", 5);
        bench.seed = b.value("seed", static_cast<std::uint64_t>(42));
        bench.follower = b.value("follower", 0);
        s.bench = bench;
    }

    const auto report = plant::validate(s.model);
    if (!report.ok()) {
        throw std::runtime_error("scenario model failed validation: " + report.to_string());
    }
    if (s.schedule.segments.front().transform.size() !=
        static_cast<int>(s.model.followers.size())) {
        throw std::runtime_error("schedule terms do not match follower count");
    }
    return s;
}

Scenario load_scenario(const std::string& path_or_name) {
    namespace fs = std::filesystem;
    if (!fs::exists(path_or_name)) {
        std::string name = path_or_name;
        if (name.size() > 5 && name.ends_with(".json")) {
            name = name.substr(0, name.size() - 5);
        }
        for (const auto& builtin : builtin_names()) {
            if (builtin == name) {
                return builtin_scenario(name);
            }
        }
        throw std::runtime_error("no such scenario file or built-in: " + path_or_name);
    }
    std::ifstream in(path_or_name);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path_or_name);
    }
    json j;
    in >> j;
    return scenario_from_json(j);
}

json design_report_json(const synth::ControllerDesign& d, const plant::MasModel& m) {
    json j;
    j["version"] = 1;
    j["strategy"] = strategy_to_string(d.strategy);
    j["mu"] = d.mu;
    j["mu_bound"] = d.mu_bound;
    j["terms"] = vector_to_json(d.terms);
    j["solver_calls"] = d.solver_calls;

    json followers = json::array();
    double worst_feedback = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < d.followers.size(); ++i) {
        const auto& gains = d.followers[i];
        json f;
        f["k1"] = matrix_to_json(gains.k1);
        f["k2"] = matrix_to_json(gains.k2);
        f["x"] = matrix_to_json(gains.x);
        f["u"] = matrix_to_json(gains.u);
        f["y"] = gains.y ? matrix_to_json(*gains.y) : json();
        f["regulator_residual"] = gains.regulator_residual;
        f["lme_residual"] = gains.lme_residual;
        const Eigen::MatrixXd closed = m.followers[i].a + m.followers[i].b * gains.k1;
        const double abscissa = solve::eigenvalues(closed).real().maxCoeff();
        f["feedback_spectral_abscissa"] = abscissa;
        worst_feedback = std::max(worst_feedback, abscissa);
        followers.push_back(std::move(f));
    }
    j["followers"] = std::move(followers);

    const Eigen::MatrixXd a_mu = solve::observer_matrix(m.exosystem, m.graph, d.mu);
    j["certificates"] = {
        {"max_feedback_spectral_abscissa", worst_feedback},
        {"observer_spectral_abscissa", solve::eigenvalues(a_mu).real().maxCoeff()}};
    return j;
}

synth::ControllerDesign design_from_json(const json& j) {
    synth::ControllerDesign d;
    d.strategy = strategy_from_string(field(j, "strategy", "design").get<std::string>());
    d.mu = finite_number(field(j, "mu", "design"), "mu");
    d.mu_bound = finite_number(field(j, "mu_bound", "design"), "mu_bound");
    d.terms = vector_from_json(field(j, "terms", "design"), "terms");
    d.solver_calls = j.value("solver_calls", 0ULL);
    for (const auto& f : field(j, "followers", "design")) {
        synth::FollowerGains gains;
        gains.k1 = matrix_from_json(field(f, "k1", "gains"), "k1");
        gains.k2 = matrix_from_json(field(f, "k2", "gains"), "k2");
        gains.x = matrix_from_json(field(f, "x", "gains"), "x");
        gains.u = matrix_from_json(field(f, "u", "gains"), "u");
        if (f.contains("y") && !f["y"].is_null()) {
            gains.y = matrix_from_json(f["y"], "y");
        }
        gains.regulator_residual = f.value("regulator_residual", 0.0);
        gains.lme_residual = f.value("lme_residual", 0.0);
        d.followers.push_back(std::move(gains));
    }
    if (d.terms.size() != static_cast<Eigen::Index>(d.followers.size())) {
        throw std::runtime_error("design terms do not match follower gains");
    }
    return d;
}

json failure_json(const std::string& error, const std::vector<synth::ConditionFailure>& failures) {
    json body;
    body["error"] = error;
    json list = json::array();
    for (const auto& failure : failures) {
        list.push_back({{"condition", synth::condition_name(failure.which)},
                        {"follower", failure.follower},
                        {"detail", failure.detail}});
    }
    body["failures"] = std::move(list);
    return body;
}

json checks_json(const std::vector<synth::ConditionCheck>& checks) {
    json list = json::array();
    for (const auto& check : checks) {
        json entry;
        entry["name"] = check.name;
        entry["required"] = check.required;
        entry["passed"] = check.passed;
        json failures = json::array();
        for (const auto& failure : check.failures) {
            failures.push_back({{"follower", failure.follower}, {"detail", failure.detail}});
        }
        entry["failures"] = std::move(failures);
        list.push_back(std::move(entry));
    }
    return json{{"checks", std::move(list)}};
}

void write_sim_csv(const plant::MasModel& m, const sim::SimResult& r, std::ostream& os) {
    os << "t";
    for (Eigen::Index j = 0; j < m.exosystem.dim(); ++j) {
        os << ",v" << j;
    }
    for (size_t i = 0; i < m.followers.size(); ++i) {
        const auto& fol = m.followers[i];
        for (int j = 0; j < fol.state_dim(); ++j) {
            os << ",f" << i << "_x" << j;
        }
        for (Eigen::Index j = 0; j < m.exosystem.dim(); ++j) {
            os << ",f" << i << "_eta" << j;
        }
        for (int j = 0; j < fol.input_dim(); ++j) {
            os << ",f" << i << "_u" << j;
        }
        for (int j = 0; j < fol.output_dim(); ++j) {
            os << ",f" << i << "_e" << j;
        }
    }
    os << '\n';
    for (int s = 0; s < r.samples(); ++s) {
        os << format_double(r.time[static_cast<size_t>(s)]);
        for (Eigen::Index j = 0; j < r.v.cols(); ++j) {
            os << ',' << format_double(r.v(s, j));
        }
        for (size_t i = 0; i < m.followers.size(); ++i) {
            for (Eigen::Index j = 0; j < r.x[i].cols(); ++j) {
                os << ',' << format_double(r.x[i](s, j));
            }
            for (Eigen::Index j = 0; j < r.eta[i].cols(); ++j) {
                os << ',' << format_double(r.eta[i](s, j));
            }
            for (Eigen::Index j = 0; j < r.u[i].cols(); ++j) {
                os << ',' << format_double(r.u[i](s, j));
            }
            for (Eigen::Index j = 0; j < r.e[i].cols(); ++j) {
                os << ',' << format_double(r.e[i](s, j));
            }
        }
        os << '\n';
    }
}

json sim_summary_json(const plant::MasModel& m, const synth::ControllerDesign& d,
                      const sim::SimResult& r) {
    json j;
    j["version"] = 1;
    j["mu"] = r.mu;
    json segments = json::array();
    for (size_t k = 0; k < r.segments.size(); ++k) {
        segments.push_back({{"t_start", r.segments[k].t_start},
                            {"t_end", r.segments[k].t_end},
                            {"terms", vector_to_json(r.segment_terms[k])},
                            {"tail_max_error", r.segments[k].tail_max_error},
                            {"end_observer_error", r.segments[k].end_observer_error}});
    }
    j["segments"] = std::move(segments);

    double worst_feedback = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < d.followers.size(); ++i) {
        const Eigen::MatrixXd closed = m.followers[i].a + m.followers[i].b * d.followers[i].k1;
        worst_feedback = std::max(worst_feedback, solve::eigenvalues(closed).real().maxCoeff());
    }
    const Eigen::MatrixXd a_mu = solve::observer_matrix(m.exosystem, m.graph, d.mu);
    j["certificates"] = {
        {"max_feedback_spectral_abscissa", worst_feedback},
        {"observer_spectral_abscissa", solve::eigenvalues(a_mu).real().maxCoeff()}};
    return j;
}

} // namespace morp::io
