#pragma once

#include <Eigen/Core>
#include <vector>

#include "morp/partition.hpp"
#include "morp/plant.hpp"
#include "morp/synth.hpp"

namespace morp::sim {

struct SimInitial {
    std::vector<Eigen::VectorXd> x;   // per follower, length n_i
    std::vector<Eigen::VectorXd> eta; // per follower, length n0
    Eigen::VectorXd v;                // length n0
};

struct SimConfig {
    double dt = 1e-3;
    double horizon = 0.0;
    SimInitial initial;
    double tail_fraction = 0.1; // fraction of each segment used for tail metrics
    int store_stride = 10;      // keep every store_stride-th step
};

struct SegmentMetrics {
    double t_start = 0.0;
    double t_end = 0.0;
    double tail_max_error = 0.0;      // max over tail window of max_i |e_i|_2
    double end_observer_error = 0.0;  // max_i |eta_i - v|_2 at segment end
};

struct SimResult {
    std::vector<double> time;            // downsampled grid
    Eigen::MatrixXd v;                   // samples x n0
    std::vector<Eigen::MatrixXd> x;      // per follower, samples x n_i
    std::vector<Eigen::MatrixXd> eta;    // per follower, samples x n0
    std::vector<Eigen::MatrixXd> u;      // per follower, samples x m_i
    std::vector<Eigen::MatrixXd> e;      // per follower, samples x p_i
    std::vector<int> segment_of_sample;  // active schedule segment per sample
    std::vector<Eigen::VectorXd> segment_terms;
    std::vector<SegmentMetrics> segments;
    double mu = 0.0;

    int samples() const { return static_cast<int>(time.size()); }
};

// u_i = K1_i x_i + K2_i eta_i.
Eigen::VectorXd control_input(const synth::ControllerDesign& d, int follower,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& eta);

// Stacked right-hand side of the distributed observer,
//   eta_i' = A0 eta_i + mu (sum_j |a_ij| (eta_j - eta_i) + f_i (v - eta_i)),
// evaluated follower by follower from the absolute adjacency weights.
Eigen::VectorXd observer_rhs(const plant::Exosystem& exo, const graph::SignedDigraph& g,
                             double mu, const Eigen::VectorXd& eta, const Eigen::VectorXd& v);

// Tracking error e_i = C x_i + D u_i + G v + s F v. Shared between the
// integrator and its tests so stored errors recompute exactly.
Eigen::VectorXd tracking_error(const plant::FollowerModel& m, double s,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v);

// Closed-loop simulation with classical fixed-step 4th-order integration.
// At every schedule switch the design is retargeted (K2 only for partition-
// independent designs) and all states are carried continuously. Throws
// ConfigError on grid problems and ConditionFailed if a retarget fails.
SimResult simulate(const plant::MasModel& m, const synth::ControllerDesign& d,
                   const partition::PartitionSchedule& sched, const SimConfig& cfg);

} // namespace morp::sim
