#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "morp/graph.hpp"
#include "morp/plant.hpp"

namespace morp::solve {

// Feasibility threshold for equation solves, scaled by (1 + rhs norm).
inline constexpr double kFeasibilityTol = 1e-8;
// Relative singular-value cutoff for rank decisions.
inline constexpr double kRankTol = 1e-10;
// Spectra within [-kHurwitzMargin, 0] are classified not Hurwitz.
inline constexpr double kHurwitzMargin = 1e-9;

// Process-wide count of linear-system solves (regulator and matched-
// disturbance equations). Used to instrument the design strategies.
std::uint64_t solver_call_count();
void reset_solver_calls();

// Eigenvalues of a real square matrix. Throws EigenFailure on
// non-convergence of the dense iteration.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a);

// True iff max Re(lambda) < -kHurwitzMargin.
bool is_hurwitz(const Eigen::MatrixXd& a);

// PBH test: true iff rank [A - lambda*I, B] = n for every eigenvalue of A
// with Re(lambda) >= 0.
bool is_stabilizable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Numerical rank via singular values with relative cutoff kRankTol.
int rank_of(const Eigen::MatrixXd& m);
int rank_of(const Eigen::MatrixXcd& m);

// Solution of the regulator equations
//   X A0 = A X + B U + E
//   0    = C X + D U + G + s*F
// for one follower. residual is the max Frobenius norm of the two equation
// defects; feasible iff residual <= kFeasibilityTol * (1 + rhs norm).
struct RegulatorSolution {
    Eigen::MatrixXd x; // n x n0
    Eigen::MatrixXd u; // m x n0
    double residual = 0.0;
    bool feasible = false;
};

// Stacks both equations into one linear system in [vec X; vec U] via
// Kronecker identities and solves by minimum-norm least squares.
RegulatorSolution solve_regulator(const plant::FollowerModel& m, const plant::Exosystem& exo,
                                  double s);

// Minimum-norm least-squares solution of [B; D] Y = [E; G].
struct LmeSolution {
    Eigen::MatrixXd y; // m x n0
    double residual = 0.0;
    bool feasible = false;
};

LmeSolution solve_lme(const plant::FollowerModel& m);

// Rank characterization of the matched-disturbance equation:
// rank [B E; D G] = rank [B; D].
bool lme_rank_feasible(const plant::FollowerModel& m);

// True iff rank [A - lambda*I, B; C, D] = n + p at every exosystem
// eigenvalue lambda (complex-valued rank computation).
bool transmission_zeros_ok(const plant::FollowerModel& m, const plant::Exosystem& exo);

// Lower bound for the observer coupling gain:
//   max over (j, i) of Re(lambda_j(A0)) / Re(lambda_i(H)).
// Callers must pick mu strictly greater. Throws DomainError unless every
// Re(lambda_i(H)) > 0.
double mu_lower_bound(const plant::Exosystem& exo, const graph::SpectralReport& spectral);

// Distributed-observer system matrix A_mu = (I_N (x) A0) - mu (H (x) I_n0).
// Its eigenvalues are lambda_j(A0) - mu*lambda_i(H).
Eigen::MatrixXd observer_matrix(const plant::Exosystem& exo, const graph::SignedDigraph& g,
                                double mu);

// State-feedback gain K1 with A + B K1 Hurwitz, from the continuous
// algebraic Riccati equation for (A, B, q_scale*I, r_scale*I) solved by an
// ordered Schur decomposition of the Hamiltonian; K1 = -R^-1 B^T P.
// Throws NotStabilizable or CareFailure.
Eigen::MatrixXd stabilizing_gain(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 double q_scale, double r_scale);

// Stabilizing solution of A^T P + P A - P B R^-1 B^T P + Q = 0.
Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& r);

} // namespace morp::solve
