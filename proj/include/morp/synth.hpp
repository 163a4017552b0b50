#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morp/partition.hpp"
#include "morp/plant.hpp"

namespace morp::synth {

// PartitionDependent re-solves the regulator equations at each follower's
// transformation term; PartitionIndependent solves term-free equations once
// and rescales the solution per term.
enum class Strategy { PartitionDependent, PartitionIndependent };

struct DesignOptions {
    double mu_min = 1.0;   // floor for the observer coupling gain
    double q_scale = 1.0;  // state weight for the feedback gain design
    double r_scale = 1.0;  // input weight for the feedback gain design
};

struct FollowerGains {
    Eigen::MatrixXd k1; // m x n
    Eigen::MatrixXd k2; // m x n0
    // Regulator pair the gains were built from. Partition-dependent designs
    // store the pair for the follower's current term; partition-independent
    // designs store the term-free pair plus the matched-disturbance gain y.
    Eigen::MatrixXd x; // n x n0
    Eigen::MatrixXd u; // m x n0
    std::optional<Eigen::MatrixXd> y; // m x n0
    double regulator_residual = 0.0;
    double lme_residual = 0.0;
};

struct ControllerDesign {
    Strategy strategy = Strategy::PartitionDependent;
    double mu = 0.0;
    double mu_bound = 0.0;         // the lower bound mu strictly exceeds
    Eigen::VectorXd terms;         // transformation terms the gains target
    std::vector<FollowerGains> followers;
    std::uint64_t solver_calls = 0; // linear-system solves used to build this

    int size() const { return static_cast<int>(followers.size()); }
};

enum class ConditionId {
    Stabilizable,        // every (A_i, B_i) stabilizable
    RegulatorEquations,  // regulator equations solvable (strategy-specific)
    MatchedDisturbance,  // [B; D] Y = [E; G] solvable
    SpanningTree,        // leader reaches every follower
};

std::string condition_name(ConditionId id);

struct ConditionFailure {
    ConditionId which;
    int follower = -1; // -1: graph/model-level
    std::string detail;
};

struct DesignOutcome {
    std::optional<ControllerDesign> design;
    std::vector<ConditionFailure> failures;

    bool ok() const { return design.has_value(); }
};

// One entry of a diagnostics run; informational checks never gate.
struct ConditionCheck {
    std::string name;
    bool required = true;
    bool passed = false;
    std::vector<ConditionFailure> failures;
};

// Evaluates every condition the given strategy relies on, plus the
// informational exosystem-spectrum check.
std::vector<ConditionCheck> check_conditions(const plant::MasModel& m,
                                             const partition::PartitionTransform& p,
                                             Strategy strategy);

// Regulator pair for transformation term s, built from a term-free pair
// (x, u) and a matched-disturbance gain y:  x~ = s*x,  u~ = s*(u + y) - y.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> pair_for_term(const Eigen::MatrixXd& x,
                                                          const Eigen::MatrixXd& u,
                                                          const Eigen::MatrixXd& y, double s);

// Partition-dependent synthesis: per-follower regulator solve at its term,
// K1 from the Riccati design, K2 = U - K1 X.
DesignOutcome design_strategy_one(const plant::MasModel& m,
                                  const partition::PartitionTransform& p,
                                  const DesignOptions& opts = {});

// Partition-independent synthesis: term-free regulator and matched-
// disturbance solves once per follower, K2 = u~ - K1 x~ via pair_for_term.
DesignOutcome design_strategy_two(const plant::MasModel& m,
                                  const partition::PartitionTransform& p,
                                  const DesignOptions& opts = {});

// Rebuilds K2 for a new transformation. Partition-independent designs need
// no equation solves; partition-dependent designs re-solve the regulator
// equations for each follower whose term changed. K1 and mu are unchanged.
DesignOutcome retarget(const ControllerDesign& d, const partition::PartitionTransform& p_new,
                       const plant::MasModel& m);

} // namespace morp::synth
