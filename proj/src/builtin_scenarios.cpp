#include <stdexcept>

#include "morp/scenario.hpp"

namespace morp::io {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    MatrixXd m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (const double v : row) {
            m(i, j++) = v;
        }
        ++i;
    }
    return m;
}

VectorXd vec(std::initializer_list<double> values) {
    VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const double x : values) {
        v(i++) = x;
    }
    return v;
}

// Planar rotation generating a slowly revolving reference.
MatrixXd slow_rotation() { return mat({{0.0, 0.0025}, {-0.0025, 0.0}}); }

// Planar double integrator (hand-position dynamics).
plant::FollowerModel hand_position_follower() {
    plant::FollowerModel f;
    f.a = MatrixXd::Zero(4, 4);
    f.a.topRightCorner(2, 2) = MatrixXd::Identity(2, 2);
    f.b = MatrixXd::Zero(4, 2);
    f.b.bottomRows(2) = MatrixXd::Identity(2, 2);
    f.c = MatrixXd::Zero(2, 4);
    f.c.leftCols(2) = MatrixXd::Identity(2, 2);
    f.d = MatrixXd::Zero(2, 2);
    f.e = MatrixXd::Zero(4, 2);
    f.g = MatrixXd::Zero(2, 2);
    f.f = -MatrixXd::Identity(2, 2);
    return f;
}

// Scalar single-agent plant whose regulator equations are solvable only at
// one transformation term; its matched-disturbance equation has no solution.
Scenario make_remark4() {
    Scenario s;
    s.name = "remark4";
    s.model.exosystem.a0 = mat({{0.0}});
    plant::FollowerModel f;
    f.a = mat({{1.0}});
    f.b = mat({{1.0}});
    f.c = mat({{1.0}});
    f.d = mat({{1.0}});
    f.e = mat({{-2.0}});
    f.g = mat({{0.0}});
    f.f = mat({{-1.0}});
    s.model.followers.push_back(f);
    s.model.graph.adjacency = MatrixXd::Zero(1, 1);
    s.model.graph.pinning = vec({1.0});
    s.schedule.horizon = 10.0;
    s.schedule.segments = {{0.0, {vec({2.0})}}};
    s.sim.dt = 1e-3;
    s.sim.horizon = s.schedule.horizon;
    s.sim.initial.x = {vec({0.5})};
    s.sim.initial.eta = {vec({0.0})};
    s.sim.initial.v = vec({1.0});
    s.design.strategy = synth::Strategy::PartitionDependent;
    return s;
}

// Single agent with an oscillatory leader: the term-free equations and the
// matched-disturbance equation are solvable, but the Rosenbrock matrix
// loses rank at the leader's eigenvalues.
Scenario make_remark8_phi_not_theta() {
    Scenario s;
    s.name = "remark8_phi_not_theta";
    s.model.exosystem.a0 = mat({{0.0, 1.0}, {-1.0, 0.0}});
    plant::FollowerModel f;
    f.a = mat({{0.0, 1.0}, {0.0, 0.0}});
    f.b = mat({{0.0}, {1.0}});
    f.c = MatrixXd::Identity(2, 2);
    f.d = MatrixXd::Zero(2, 1);
    f.e = mat({{0.0, 0.0}, {0.0, 0.5}});
    f.g = MatrixXd::Zero(2, 2);
    f.f = -MatrixXd::Identity(2, 2);
    s.model.followers.push_back(f);
    s.model.graph.adjacency = MatrixXd::Zero(1, 1);
    s.model.graph.pinning = vec({1.0});
    s.schedule.horizon = 20.0;
    s.schedule.segments = {{0.0, {vec({1.5})}}};
    s.sim.dt = 1e-3;
    s.sim.horizon = s.schedule.horizon;
    s.sim.initial.x = {vec({0.5, 0.0})};
    s.sim.initial.eta = {vec({0.0, 0.0})};
    s.sim.initial.v = vec({1.0, 0.0});
    s.design.strategy = synth::Strategy::PartitionIndependent;
    return s;
}

// Same plant as remark4 but with an unstable scalar leader: the Rosenbrock
// rank test passes while the matched-disturbance equation stays infeasible.
Scenario make_remark8_theta_not_phi() {
    Scenario s = make_remark4();
    s.name = "remark8_theta_not_phi";
    s.model.exosystem.a0 = mat({{1.0}});
    s.schedule.horizon = 5.0;
    s.sim.horizon = 5.0;
    s.sim.initial.v = vec({0.1});
    s.design.strategy = synth::Strategy::PartitionDependent;
    s.design.options.mu_min = 3.0;
    return s;
}

// Disturbance-free variant where both sufficient conditions hold.
Scenario make_remark8_intersection() {
    Scenario s = make_remark8_theta_not_phi();
    s.name = "remark8_intersection";
    s.model.followers[0].e = mat({{0.0}});
    s.design.strategy = synth::Strategy::PartitionIndependent;
    return s;
}

// Three hand-position robots on a chain graph tracking term multiples of a
// slowly revolving reference under a three-segment schedule.
Scenario make_experiment1() {
    Scenario s;
    s.name = "experiment1";
    s.model.exosystem.a0 = slow_rotation();
    for (int i = 0; i < 3; ++i) {
        s.model.followers.push_back(hand_position_follower());
    }
    s.model.graph.adjacency = MatrixXd::Zero(3, 3);
    s.model.graph.adjacency(1, 0) = -1.0;
    s.model.graph.adjacency(2, 1) = 5.0;
    s.model.graph.pinning = vec({1.0, 0.0, 0.0});
    s.schedule.horizon = 212.0;
    s.schedule.segments = {{0.0, {vec({1.0, 0.75, 0.5})}},
                           {86.5, {vec({2.3, 1.65, 1.0})}},
                           {161.0, {vec({1.0, 0.75, 0.5})}}};
    s.sim.dt = 1e-3;
    s.sim.horizon = s.schedule.horizon;
    s.sim.initial.x = {vec({1.2, 1.5, 0.0, 0.0}), vec({0.1, 1.7, 0.0, 0.0}),
                       vec({-0.5, 1.3, 0.0, 0.0})};
    s.sim.initial.eta = {vec({0.0, 0.0}), vec({0.0, 0.0}), vec({0.0, 0.0})};
    s.sim.initial.v = vec({0.0, 1.0});
    s.design.strategy = synth::Strategy::PartitionIndependent;
    s.design.options.mu_min = 10.0;
    return s;
}

// One hundred mixed-order followers on a star graph with a constant leader;
// the alternating gauge terms split the outputs to +1 and -1.
Scenario make_example2() {
    Scenario s;
    s.name = "example2";
    s.model.exosystem.a0 = mat({{0.0}});

    plant::FollowerModel low;
    low.a = mat({{0.2, 3.0}, {0.1, -0.1}});
    low.b = mat({{0.0, 3.0}, {1.0, 0.0}});
    low.c = mat({{1.0, 0.0}});
    low.d = MatrixXd::Zero(1, 2);
    low.e = MatrixXd::Zero(2, 1);
    low.g = MatrixXd::Zero(1, 1);
    low.f = mat({{-1.0}});

    plant::FollowerModel high;
    high.a = MatrixXd::Zero(4, 4);
    high.a.topRightCorner(2, 2) = MatrixXd::Identity(2, 2);
    high.b = MatrixXd::Zero(4, 2);
    high.b.bottomRows(2) = MatrixXd::Identity(2, 2);
    high.c = mat({{1.0, 0.0, 0.0, 0.0}});
    high.d = MatrixXd::Zero(1, 2);
    high.e = MatrixXd::Zero(4, 1);
    high.g = MatrixXd::Zero(1, 1);
    high.f = mat({{-1.0}});

    const int n = 100;
    s.model.graph.adjacency = MatrixXd::Zero(n, n);
    s.model.graph.pinning = VectorXd::Zero(n);
    s.model.graph.pinning(0) = 1.0;
    VectorXd terms(n);
    for (int i = 0; i < n; ++i) {
        s.model.followers.push_back(i < 50 ? low : high);
        if (i > 0) {
            s.model.graph.adjacency(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
        }
        terms(i) = (i % 2 == 0) ? 1.0 : -1.0;
        const double spread = 3.0 * (i + 1) / 50.0;
        if (i < 50) {
            s.sim.initial.x.push_back(vec({spread, 0.0}));
        } else {
            s.sim.initial.x.push_back(vec({-spread + 3.0, 0.0, 0.0, 0.0}));
        }
        s.sim.initial.eta.push_back(vec({0.0}));
    }
    s.sim.initial.v = vec({1.0});
    s.schedule.horizon = 30.0;
    s.schedule.segments = {{0.0, {terms}}};
    s.sim.dt = 1e-3;
    s.sim.horizon = s.schedule.horizon;
    s.sim.store_stride = 100;
    s.design.strategy = synth::Strategy::PartitionIndependent;
    s.design.options.q_scale = 15.0;
    return s;
}

// Single follower with matched disturbance and direct feedthrough used to
// compare the per-term cost of both design strategies.
Scenario make_example3() {
    Scenario s;
    s.name = "example3";
    s.model.exosystem.a0 = mat({{0.0}});
    plant::FollowerModel f;
    f.a = mat({{0.2, 3.0}, {0.1, -0.1}});
    f.b = mat({{0.0, 3.0}, {1.0, 0.0}});
    f.c = mat({{1.0, 0.0}});
    f.d = mat({{0.0, 1.0}});
    f.e = mat({{0.0}, {-4.0}});
    f.g = mat({{0.0}});
    f.f = mat({{-1.0}});
    s.model.followers.push_back(f);
    s.model.graph.adjacency = MatrixXd::Zero(1, 1);
    s.model.graph.pinning = vec({1.0});
    s.schedule.horizon = 10.0;
    s.schedule.segments = {{0.0, {vec({1.0})}}};
    s.sim.dt = 1e-3;
    s.sim.horizon = s.schedule.horizon;
    s.sim.initial.x = {vec({1.0, 0.0})};
    s.sim.initial.eta = {vec({0.0})};
    s.sim.initial.v = vec({1.0});
    s.design.strategy = synth::Strategy::PartitionIndependent;
    s.bench = BenchSpec{};
    return s;
}

} // namespace

std::vector<std::string> builtin_names() {
    return {"remark4",     "remark8_phi_not_theta", "remark8_theta_not_phi",
            "remark8_intersection", "experiment1",  "example2",
            "example3"};
}

Scenario builtin_scenario(const std::string& name) {
    if (name == "remark4") return make_remark4();
    if (name == "remark8_phi_not_theta") return make_remark8_phi_not_theta();
    if (name == "remark8_theta_not_phi") return make_remark8_theta_not_phi();
    if (name == "remark8_intersection") return make_remark8_intersection();
    if (name == "experiment1") return make_experiment1();
    if (name == "example2") return make_example2();
    if (name == "example3") return make_example3();
    throw std::out_of_range("unknown built-in scenario: " + name);
}

} // namespace morp::io
