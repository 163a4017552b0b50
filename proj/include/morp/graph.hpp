#pragma once

#include <Eigen/Core>

namespace morp::graph {

// Follower communication graph with real (signed) edge weights plus the
// leader pinning gains. adjacency(i, j) = a_ij is the weight of edge j -> i
// between followers; pinning(i) = f_i > 0 encodes a leader -> i edge.
// Follower indices are 0-based throughout; the leader is a separate node.
struct SignedDigraph {
    Eigen::MatrixXd adjacency; // N x N, zero diagonal
    Eigen::VectorXd pinning;   // length N, entries >= 0

    int size() const { return static_cast<int>(pinning.size()); }

    // Throws std::invalid_argument on shape mismatch, nonzero diagonal,
    // or negative pinning gains.
    void validate() const;
};

// H = L_u + diag(pinning) together with its spectrum.
struct SpectralReport {
    Eigen::MatrixXd h_matrix;
    Eigen::VectorXcd eigenvalues;
    double min_real_part = 0.0;
};

// Laplacian of the unsigned graph obtained by replacing each weight with its
// absolute value: L_u = diag(row sums of |A|) - |A|. Rows sum to zero.
Eigen::MatrixXd unsigned_laplacian(const SignedDigraph& g);

// H = L_u + F and its eigenvalues. Throws EigenFailure if the dense
// eigenvalue iteration does not converge.
SpectralReport h_matrix(const SignedDigraph& g);

// True iff every follower is reachable from the leader in the augmented
// graph, where leader -> i exists for pinning(i) > 0 and j -> i exists for
// adjacency(i, j) != 0. Breadth-first reachability.
bool has_spanning_tree(const SignedDigraph& g);

} // namespace morp::graph
