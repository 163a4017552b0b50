#include "morp/plant.hpp"

#include <sstream>

namespace morp::plant {

namespace {

void check_shape(std::vector<DimensionIssue>& issues, int follower, const char* name,
                 const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols) {
    if (m.rows() != rows || m.cols() != cols) {
        std::ostringstream os;
        os << "expected " << rows << "x" << cols << ", got " << m.rows() << "x" << m.cols();
        issues.push_back({follower, name, os.str()});
    }
}

} // namespace

std::string ValidationReport::to_string() const {
    if (ok()) {
        return "model ok";
    }
    std::ostringstream os;
    for (const auto& issue : issues) {
        if (issue.follower >= 0) {
            os << "follower " << issue.follower << " ";
        }
        os << issue.matrix << ": " << issue.message << "\n";
    }
    return os.str();
}

ValidationReport validate(const MasModel& m) {
    ValidationReport report;
    auto& issues = report.issues;

    const Eigen::Index n0 = m.exosystem.a0.rows();
    if (n0 < 1 || m.exosystem.a0.cols() != n0) {
        issues.push_back({-1, "a0", "exosystem matrix must be square with n0 >= 1"});
    }
    if (static_cast<Eigen::Index>(m.followers.size()) != m.graph.pinning.size()) {
        std::ostringstream os;
        os << "graph has " << m.graph.pinning.size() << " nodes but model has "
           << m.followers.size() << " followers";
        issues.push_back({-1, "graph", os.str()});
    }
    if (m.graph.adjacency.rows() != m.graph.pinning.size() ||
        m.graph.adjacency.cols() != m.graph.pinning.size()) {
        issues.push_back({-1, "graph", "adjacency must be N x N with N = pinning length"});
    }

    for (size_t idx = 0; idx < m.followers.size(); ++idx) {
        const auto& fol = m.followers[idx];
        const int i = static_cast<int>(idx);
        const Eigen::Index n = fol.a.rows();
        const Eigen::Index mu = fol.b.cols();
        const Eigen::Index p = fol.c.rows();
        if (fol.a.cols() != n || n < 1) {
            issues.push_back({i, "a", "state matrix must be square with n >= 1"});
            continue; // remaining shapes are relative to n
        }
        check_shape(issues, i, "b", fol.b, n, mu);
        check_shape(issues, i, "c", fol.c, p, n);
        check_shape(issues, i, "d", fol.d, p, mu);
        check_shape(issues, i, "e", fol.e, n, n0);
        check_shape(issues, i, "g", fol.g, p, n0);
        check_shape(issues, i, "f", fol.f, p, n0);
    }
    return report;
}

Eigen::MatrixXd output_offset(const FollowerModel& m, double s) {
    return m.g + s * m.f;
}

} // namespace morp::plant
