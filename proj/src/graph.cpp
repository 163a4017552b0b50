#include "morp/graph.hpp"

#include <Eigen/Eigenvalues>
#include <queue>
#include <stdexcept>
#include <vector>

#include "morp/errors.hpp"

namespace morp::graph {

void SignedDigraph::validate() const {
    const auto n = pinning.size();
    if (n < 1) {
        throw std::invalid_argument("graph must have at least one follower");
    }
    if (adjacency.rows() != n || adjacency.cols() != n) {
        throw std::invalid_argument("adjacency must be N x N with N = pinning length");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (adjacency(i, i) != 0.0) {
            throw std::invalid_argument("adjacency diagonal must be zero (no self-loops)");
        }
        if (pinning(i) < 0.0) {
            throw std::invalid_argument("pinning gains must be nonnegative");
        }
    }
}

Eigen::MatrixXd unsigned_laplacian(const SignedDigraph& g) {
    g.validate();
    const Eigen::MatrixXd abs_adj = g.adjacency.cwiseAbs();
    Eigen::MatrixXd lap = -abs_adj;
    lap.diagonal() += abs_adj.rowwise().sum();
    return lap;
}

SpectralReport h_matrix(const SignedDigraph& g) {
    SpectralReport report;
    report.h_matrix = unsigned_laplacian(g);
    report.h_matrix.diagonal() += g.pinning;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(report.h_matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("eigenvalue iteration for H did not converge");
    }
    report.eigenvalues = solver.eigenvalues();
    report.min_real_part = report.eigenvalues.real().minCoeff();
    return report;
}

bool has_spanning_tree(const SignedDigraph& g) {
    g.validate();
    const int n = g.size();
    std::vector<char> reached(static_cast<size_t>(n), 0);
    std::queue<int> frontier;

    // Seed with the followers pinned to the leader.
    for (int i = 0; i < n; ++i) {
        if (g.pinning(i) > 0.0) {
            reached[static_cast<size_t>(i)] = 1;
            frontier.push(i);
        }
    }
    int count = static_cast<int>(frontier.size());
    while (!frontier.empty()) {
        const int j = frontier.front();
        frontier.pop();
        for (int i = 0; i < n; ++i) {
            // Edge j -> i exists iff a_ij != 0.
            if (!reached[static_cast<size_t>(i)] && g.adjacency(i, j) != 0.0) {
                reached[static_cast<size_t>(i)] = 1;
                frontier.push(i);
                ++count;
            }
        }
    }
    return count == n;
}

} // namespace morp::graph
