#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "morp/graph.hpp"

namespace morp::plant {

// Leader dynamics v' = A0 v generating references and disturbances.
struct Exosystem {
    Eigen::MatrixXd a0;

    int dim() const { return static_cast<int>(a0.rows()); }
};

// One follower of the heterogeneous plant
//   x' = A x + B u + E v
//   y  = C x + D u + G v
// with reference -F v. Dimensions: A n x n, B n x m, C p x n, D p x m,
// E n x n0, G p x n0, F p x n0.
struct FollowerModel {
    Eigen::MatrixXd a, b, c, d, e, g, f;

    int state_dim() const { return static_cast<int>(a.rows()); }
    int input_dim() const { return static_cast<int>(b.cols()); }
    int output_dim() const { return static_cast<int>(c.rows()); }
};

// Leader + followers + follower communication graph.
struct MasModel {
    Exosystem exosystem;
    std::vector<FollowerModel> followers;
    graph::SignedDigraph graph;
};

struct DimensionIssue {
    int follower = -1; // -1: model-level issue
    std::string matrix;
    std::string message;
};

struct ValidationReport {
    std::vector<DimensionIssue> issues;

    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

// Lists every dimension mismatch with follower index and matrix name.
// An empty report means the model is well-formed.
ValidationReport validate(const MasModel& m);

// Direct exosystem-to-error gain of the error output for term s: G + s*F.
Eigen::MatrixXd output_offset(const FollowerModel& m, double s);

} // namespace morp::plant
