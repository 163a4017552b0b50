#include "morp/synth.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "morp/errors.hpp"
#include "morp/solve.hpp"

namespace morp::synth {

namespace {

void require_valid(const plant::MasModel& m, const partition::PartitionTransform& p) {
    const auto report = plant::validate(m);
    if (!report.ok()) {
        throw std::invalid_argument("model failed validation: " + report.to_string());
    }
    if (p.size() != static_cast<int>(m.followers.size())) {
        throw std::invalid_argument("transformation term count does not match follower count");
    }
}

std::string residual_detail(double residual) {
    std::ostringstream os;
    os << "least-squares residual " << residual;
    return os.str();
}

// mu = max(bound*1.1 + 0.01, mu_min), lifted if that still does not clear
// the bound (possible for very negative bounds with a negative mu_min).
double pick_mu(double bound, double mu_min) {
    double mu = std::max(bound * 1.1 + 0.01, mu_min);
    if (mu <= bound) {
        mu = bound + 0.01 * (1.0 + std::abs(bound));
    }
    return mu;
}

struct CommonChecks {
    std::vector<ConditionFailure> failures;
    double mu_bound = 0.0;
    bool graph_ok = false;
};

// Conditions shared by both strategies: stabilizability and spanning tree.
// Computes the observer gain bound when the graph admits it.
CommonChecks run_common_checks(const plant::MasModel& m) {
    CommonChecks out;
    for (size_t i = 0; i < m.followers.size(); ++i) {
        if (!solve::is_stabilizable(m.followers[i].a, m.followers[i].b)) {
            out.failures.push_back({ConditionId::Stabilizable, static_cast<int>(i),
                                    "pair (A, B) fails the PBH rank test"});
        }
    }
    if (!graph::has_spanning_tree(m.graph)) {
        out.failures.push_back({ConditionId::SpanningTree, -1,
                                "some follower is unreachable from the leader"});
        return out;
    }
    out.graph_ok = true;
    const auto spectral = graph::h_matrix(m.graph);
    out.mu_bound = solve::mu_lower_bound(m.exosystem, spectral);
    return out;
}

} // namespace

std::string condition_name(ConditionId id) {
    switch (id) {
        case ConditionId::Stabilizable: return "stabilizability";
        case ConditionId::RegulatorEquations: return "regulator equations";
        case ConditionId::MatchedDisturbance: return "matched disturbance";
        case ConditionId::SpanningTree: return "spanning tree";
    }
    return "unknown";
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> pair_for_term(const Eigen::MatrixXd& x,
                                                          const Eigen::MatrixXd& u,
                                                          const Eigen::MatrixXd& y, double s) {
    return {s * x, s * (u + y) - y};
}

DesignOutcome design_strategy_one(const plant::MasModel& m,
                                  const partition::PartitionTransform& p,
                                  const DesignOptions& opts) {
    require_valid(m, p);
    const size_t n_followers = m.followers.size();

    DesignOutcome outcome;
    CommonChecks common = run_common_checks(m);
    outcome.failures = std::move(common.failures);

    std::vector<solve::RegulatorSolution> solutions(n_followers);
    std::uint64_t calls = 0;
    for (size_t i = 0; i < n_followers; ++i) {
        solutions[i] = solve::solve_regulator(m.followers[i], m.exosystem,
                                              p.terms(static_cast<Eigen::Index>(i)));
        ++calls;
        if (!solutions[i].feasible) {
            outcome.failures.push_back({ConditionId::RegulatorEquations, static_cast<int>(i),
                                        residual_detail(solutions[i].residual)});
        }
    }
    if (!outcome.failures.empty()) {
        return outcome;
    }

    ControllerDesign design;
    design.strategy = Strategy::PartitionDependent;
    design.mu_bound = common.mu_bound;
    design.mu = pick_mu(common.mu_bound, opts.mu_min);
    design.terms = p.terms;
    design.solver_calls = calls;
    design.followers.resize(n_followers);
    for (size_t i = 0; i < n_followers; ++i) {
        auto& gains = design.followers[i];
        gains.k1 = solve::stabilizing_gain(m.followers[i].a, m.followers[i].b, opts.q_scale,
                                           opts.r_scale);
        gains.x = solutions[i].x;
        gains.u = solutions[i].u;
        gains.regulator_residual = solutions[i].residual;
        gains.k2 = gains.u - gains.k1 * gains.x;
    }
    outcome.design = std::move(design);
    return outcome;
}

DesignOutcome design_strategy_two(const plant::MasModel& m,
                                  const partition::PartitionTransform& p,
                                  const DesignOptions& opts) {
    require_valid(m, p);
    const size_t n_followers = m.followers.size();

    DesignOutcome outcome;
    CommonChecks common = run_common_checks(m);
    outcome.failures = std::move(common.failures);

    std::vector<solve::RegulatorSolution> regulator(n_followers);
    std::vector<solve::LmeSolution> matched(n_followers);
    std::uint64_t calls = 0;
    for (size_t i = 0; i < n_followers; ++i) {
        regulator[i] = solve::solve_regulator(m.followers[i], m.exosystem, 1.0);
        matched[i] = solve::solve_lme(m.followers[i]);
        calls += 2;
        if (!regulator[i].feasible) {
            outcome.failures.push_back({ConditionId::RegulatorEquations, static_cast<int>(i),
                                        residual_detail(regulator[i].residual)});
        }
        if (!matched[i].feasible) {
            outcome.failures.push_back({ConditionId::MatchedDisturbance, static_cast<int>(i),
                                        residual_detail(matched[i].residual)});
        }
    }
    if (!outcome.failures.empty()) {
        return outcome;
    }

    ControllerDesign design;
    design.strategy = Strategy::PartitionIndependent;
    design.mu_bound = common.mu_bound;
    design.mu = pick_mu(common.mu_bound, opts.mu_min);
    design.terms = p.terms;
    design.solver_calls = calls;
    design.followers.resize(n_followers);
    for (size_t i = 0; i < n_followers; ++i) {
        auto& gains = design.followers[i];
        gains.k1 = solve::stabilizing_gain(m.followers[i].a, m.followers[i].b, opts.q_scale,
                                           opts.r_scale);
        gains.x = regulator[i].x;
        gains.u = regulator[i].u;
        gains.y = matched[i].y;
        gains.regulator_residual = regulator[i].residual;
        gains.lme_residual = matched[i].residual;
        const auto [xt, ut] =
            pair_for_term(gains.x, gains.u, *gains.y, p.terms(static_cast<Eigen::Index>(i)));
        gains.k2 = ut - gains.k1 * xt;
    }
    outcome.design = std::move(design);
    return outcome;
}

DesignOutcome retarget(const ControllerDesign& d, const partition::PartitionTransform& p_new,
                       const plant::MasModel& m) {
    if (p_new.size() != d.size()) {
        throw std::invalid_argument("retarget transformation size does not match design");
    }
    DesignOutcome outcome;
    if (p_new.terms.size() == d.terms.size() && (p_new.terms.array() == d.terms.array()).all()) {
        outcome.design = d;
        outcome.design->solver_calls = 0;
        return outcome;
    }

    ControllerDesign next = d;
    next.terms = p_new.terms;
    next.solver_calls = 0;

    if (d.strategy == Strategy::PartitionIndependent) {
        for (int i = 0; i < d.size(); ++i) {
            auto& gains = next.followers[static_cast<size_t>(i)];
            const auto [xt, ut] = pair_for_term(gains.x, gains.u, *gains.y, p_new.terms(i));
            gains.k2 = ut - gains.k1 * xt;
        }
        outcome.design = std::move(next);
        return outcome;
    }

    for (int i = 0; i < d.size(); ++i) {
        if (p_new.terms(i) == d.terms(i)) {
            continue;
        }
        const auto sol = solve::solve_regulator(m.followers[static_cast<size_t>(i)],
                                                m.exosystem, p_new.terms(i));
        ++next.solver_calls;
        if (!sol.feasible) {
            outcome.failures.push_back(
                {ConditionId::RegulatorEquations, i, residual_detail(sol.residual)});
            continue;
        }
        auto& gains = next.followers[static_cast<size_t>(i)];
        gains.x = sol.x;
        gains.u = sol.u;
        gains.regulator_residual = sol.residual;
        gains.k2 = gains.u - gains.k1 * gains.x;
    }
    if (!outcome.failures.empty()) {
        return outcome;
    }
    outcome.design = std::move(next);
    return outcome;
}

std::vector<ConditionCheck> check_conditions(const plant::MasModel& m,
                                             const partition::PartitionTransform& p,
                                             Strategy strategy) {
    require_valid(m, p);
    std::vector<ConditionCheck> checks;

    // Informational: exosystem spectrum inside the closed right half plane.
    {
        ConditionCheck check;
        check.name = "exosystem spectrum in CRHP";
        check.required = false;
        check.passed = true;
        const auto eigs = solve::eigenvalues(m.exosystem.a0);
        for (Eigen::Index j = 0; j < eigs.size(); ++j) {
            if (eigs(j).real() < -solve::kHurwitzMargin) {
                check.passed = false;
                std::ostringstream os;
                os << "eigenvalue with Re = " << eigs(j).real();
                check.failures.push_back({ConditionId::RegulatorEquations, -1, os.str()});
            }
        }
        checks.push_back(std::move(check));
    }

    {
        ConditionCheck check;
        check.name = condition_name(ConditionId::Stabilizable);
        for (size_t i = 0; i < m.followers.size(); ++i) {
            if (!solve::is_stabilizable(m.followers[i].a, m.followers[i].b)) {
                check.failures.push_back({ConditionId::Stabilizable, static_cast<int>(i),
                                          "pair (A, B) fails the PBH rank test"});
            }
        }
        check.passed = check.failures.empty();
        checks.push_back(std::move(check));
    }

    if (strategy == Strategy::PartitionDependent) {
        ConditionCheck check;
        check.name = "regulator equations (partition-dependent)";
        for (size_t i = 0; i < m.followers.size(); ++i) {
            const auto sol = solve::solve_regulator(m.followers[i], m.exosystem,
                                                    p.terms(static_cast<Eigen::Index>(i)));
            if (!sol.feasible) {
                check.failures.push_back({ConditionId::RegulatorEquations, static_cast<int>(i),
                                          residual_detail(sol.residual)});
            }
        }
        check.passed = check.failures.empty();
        checks.push_back(std::move(check));
    } else {
        ConditionCheck regulator_check;
        regulator_check.name = "regulator equations (partition-independent)";
        ConditionCheck matched_check;
        matched_check.name = condition_name(ConditionId::MatchedDisturbance);
        for (size_t i = 0; i < m.followers.size(); ++i) {
            const auto sol = solve::solve_regulator(m.followers[i], m.exosystem, 1.0);
            if (!sol.feasible) {
                regulator_check.failures.push_back({ConditionId::RegulatorEquations,
                                                    static_cast<int>(i),
                                                    residual_detail(sol.residual)});
            }
            // Rank characterization; must agree with the least-squares solve.
            if (!solve::lme_rank_feasible(m.followers[i])) {
                matched_check.failures.push_back({ConditionId::MatchedDisturbance,
                                                  static_cast<int>(i),
                                                  "rank [B E; D G] exceeds rank [B; D]"});
            }
        }
        regulator_check.passed = regulator_check.failures.empty();
        matched_check.passed = matched_check.failures.empty();
        checks.push_back(std::move(regulator_check));
        checks.push_back(std::move(matched_check));
    }

    {
        ConditionCheck check;
        check.name = condition_name(ConditionId::SpanningTree);
        check.passed = graph::has_spanning_tree(m.graph);
        if (!check.passed) {
            check.failures.push_back({ConditionId::SpanningTree, -1,
                                      "some follower is unreachable from the leader"});
        }
        checks.push_back(std::move(check));
    }
    return checks;
}

} // namespace morp::synth
