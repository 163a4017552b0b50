#include "morp/sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "morp/errors.hpp"

namespace morp::sim {

namespace {

struct Layout {
    std::vector<Eigen::Index> x_offset;
    Eigen::Index eta_offset = 0;
    Eigen::Index v_offset = 0;
    Eigen::Index total = 0;
};

Layout make_layout(const plant::MasModel& m) {
    Layout layout;
    Eigen::Index pos = 0;
    layout.x_offset.reserve(m.followers.size());
    for (const auto& fol : m.followers) {
        layout.x_offset.push_back(pos);
        pos += fol.state_dim();
    }
    const Eigen::Index n0 = m.exosystem.dim();
    layout.eta_offset = pos;
    pos += static_cast<Eigen::Index>(m.followers.size()) * n0;
    layout.v_offset = pos;
    layout.total = pos + n0;
    return layout;
}

// Closed-loop right-hand side with per-segment feedforward blocks folded in.
class Dynamics {
public:
    Dynamics(const plant::MasModel& m, const Layout& layout, double mu)
        : model_(m), layout_(layout), mu_(mu), n0_(m.exosystem.dim()) {
        const int n = static_cast<int>(m.followers.size());
        neighbors_.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double w = m.graph.adjacency(i, j);
                if (w != 0.0) {
                    neighbors_[static_cast<size_t>(i)].push_back({j, std::abs(w)});
                }
            }
        }
        a_cl_.resize(static_cast<size_t>(n));
        b_k2_.resize(static_cast<size_t>(n));
        coupling_.resize(n0_);
    }

    void bind_design(const synth::ControllerDesign& d) {
        for (size_t i = 0; i < model_.followers.size(); ++i) {
            a_cl_[i] = model_.followers[i].a + model_.followers[i].b * d.followers[i].k1;
            b_k2_[i] = model_.followers[i].b * d.followers[i].k2;
        }
    }

    void operator()(const Eigen::VectorXd& z, Eigen::VectorXd& dz) {
        const auto v = z.segment(layout_.v_offset, n0_);
        dz.segment(layout_.v_offset, n0_).noalias() = model_.exosystem.a0 * v;
        for (size_t i = 0; i < model_.followers.size(); ++i) {
            const auto& fol = model_.followers[i];
            const Eigen::Index xo = layout_.x_offset[i];
            const Eigen::Index eo = layout_.eta_offset + static_cast<Eigen::Index>(i) * n0_;
            const auto x = z.segment(xo, fol.state_dim());
            const auto eta = z.segment(eo, n0_);

            auto dx = dz.segment(xo, fol.state_dim());
            dx.noalias() = a_cl_[i] * x;
            dx.noalias() += b_k2_[i] * eta;
            dx.noalias() += fol.e * v;

            coupling_ = model_.graph.pinning(static_cast<Eigen::Index>(i)) * (v - eta);
            for (const auto& [j, w] : neighbors_[i]) {
                coupling_ += w * (z.segment(layout_.eta_offset +
                                            static_cast<Eigen::Index>(j) * n0_, n0_) -
                                  eta);
            }
            auto deta = dz.segment(eo, n0_);
            deta.noalias() = model_.exosystem.a0 * eta;
            deta += mu_ * coupling_;
        }
    }

private:
    const plant::MasModel& model_;
    const Layout& layout_;
    double mu_;
    Eigen::Index n0_;
    std::vector<std::vector<std::pair<int, double>>> neighbors_;
    std::vector<Eigen::MatrixXd> a_cl_;
    std::vector<Eigen::MatrixXd> b_k2_;
    Eigen::VectorXd coupling_;
};

long long snap_to_grid(double t, double dt) { return std::llround(t / dt); }

} // namespace

Eigen::VectorXd control_input(const synth::ControllerDesign& d, int follower,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& eta) {
    const auto& gains = d.followers.at(static_cast<size_t>(follower));
    if (gains.k1.cols() != x.size() || gains.k2.cols() != eta.size()) {
        throw std::invalid_argument("control_input state dimensions do not match gains");
    }
    return gains.k1 * x + gains.k2 * eta;
}

Eigen::VectorXd observer_rhs(const plant::Exosystem& exo, const graph::SignedDigraph& g,
                             double mu, const Eigen::VectorXd& eta, const Eigen::VectorXd& v) {
    const Eigen::Index n0 = exo.dim();
    const int n = g.size();
    if (eta.size() != static_cast<Eigen::Index>(n) * n0 || v.size() != n0) {
        throw std::invalid_argument("observer state dimensions do not match graph/exosystem");
    }
    Eigen::VectorXd deta(eta.size());
    for (int i = 0; i < n; ++i) {
        const auto eta_i = eta.segment(static_cast<Eigen::Index>(i) * n0, n0);
        Eigen::VectorXd coupling = g.pinning(i) * (v - eta_i);
        for (int j = 0; j < n; ++j) {
            const double w = std::abs(g.adjacency(i, j));
            if (w != 0.0) {
                coupling += w * (eta.segment(static_cast<Eigen::Index>(j) * n0, n0) - eta_i);
            }
        }
        deta.segment(static_cast<Eigen::Index>(i) * n0, n0) = exo.a0 * eta_i + mu * coupling;
    }
    return deta;
}

Eigen::VectorXd tracking_error(const plant::FollowerModel& m, double s,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v) {
    return m.c * x + m.d * u + m.g * v + s * (m.f * v);
}

SimResult simulate(const plant::MasModel& m, const synth::ControllerDesign& d,
                   const partition::PartitionSchedule& sched, const SimConfig& cfg) {
    const auto report = plant::validate(m);
    if (!report.ok()) {
        throw std::invalid_argument("model failed validation: " + report.to_string());
    }
    sched.validate();
    const int n_followers = static_cast<int>(m.followers.size());
    const Eigen::Index n0 = m.exosystem.dim();
    if (sched.segments.front().transform.size() != n_followers) {
        throw ConfigError("schedule follower count does not match model");
    }
    if (d.size() != n_followers) {
        throw ConfigError("design follower count does not match model");
    }
    if (cfg.dt <= 0.0) {
        throw ConfigError("dt must be positive");
    }
    if (cfg.horizon < cfg.dt) {
        throw ConfigError("horizon must cover at least one step");
    }
    if (cfg.store_stride < 1) {
        throw ConfigError("store_stride must be at least 1");
    }
    if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction < 1.0)) {
        throw ConfigError("tail_fraction must lie in (0, 1)");
    }
    if (static_cast<int>(cfg.initial.x.size()) != n_followers ||
        static_cast<int>(cfg.initial.eta.size()) != n_followers ||
        cfg.initial.v.size() != n0) {
        throw ConfigError("initial state count does not match model");
    }
    for (int i = 0; i < n_followers; ++i) {
        if (cfg.initial.x[static_cast<size_t>(i)].size() !=
                m.followers[static_cast<size_t>(i)].state_dim() ||
            cfg.initial.eta[static_cast<size_t>(i)].size() != n0) {
            throw ConfigError("initial state dimensions do not match model");
        }
    }

    const long long steps_total = snap_to_grid(cfg.horizon, cfg.dt);
    if (steps_total < 1) {
        throw ConfigError("horizon shorter than one step after grid snapping");
    }

    // Switch times snapped to the step grid; segments are left-closed.
    const size_t n_segments = sched.segments.size();
    std::vector<long long> switch_step(n_segments, 0);
    for (size_t k = 1; k < n_segments; ++k) {
        switch_step[k] = snap_to_grid(sched.segments[k].t_start, cfg.dt);
        if (switch_step[k] <= switch_step[k - 1] || switch_step[k] >= steps_total) {
            std::ostringstream os;
            os << "segment start " << sched.segments[k].t_start
               << " does not land strictly inside the grid";
            throw ConfigError(os.str());
        }
    }
    std::vector<long long> segment_last(n_segments);
    for (size_t k = 0; k + 1 < n_segments; ++k) {
        segment_last[k] = switch_step[k + 1] - 1;
    }
    segment_last[n_segments - 1] = steps_total;

    const Layout layout = make_layout(m);
    Eigen::VectorXd z(layout.total);
    for (int i = 0; i < n_followers; ++i) {
        z.segment(layout.x_offset[static_cast<size_t>(i)],
                  m.followers[static_cast<size_t>(i)].state_dim()) =
            cfg.initial.x[static_cast<size_t>(i)];
        z.segment(layout.eta_offset + i * n0, n0) = cfg.initial.eta[static_cast<size_t>(i)];
    }
    z.segment(layout.v_offset, n0) = cfg.initial.v;

    // Align the design with the first segment before integrating.
    synth::ControllerDesign design = d;
    {
        auto outcome = synth::retarget(design, sched.segments[0].transform, m);
        if (!outcome.ok()) {
            throw ConditionFailed("design cannot be retargeted to the first segment");
        }
        design = std::move(*outcome.design);
    }

    Dynamics dynamics(m, layout, design.mu);
    dynamics.bind_design(design);

    SimResult result;
    result.mu = design.mu;
    result.segment_terms.reserve(n_segments);
    result.segments.resize(n_segments);
    for (size_t k = 0; k < n_segments; ++k) {
        result.segment_terms.push_back(sched.segments[k].transform.terms);
        result.segments[k].t_start = static_cast<double>(k == 0 ? 0 : switch_step[k]) * cfg.dt;
        result.segments[k].t_end = static_cast<double>(segment_last[k]) * cfg.dt;
    }
    const int est_samples = static_cast<int>(steps_total / cfg.store_stride) + 2;
    result.v.resize(est_samples, n0);
    result.x.resize(static_cast<size_t>(n_followers));
    result.eta.resize(static_cast<size_t>(n_followers));
    result.u.resize(static_cast<size_t>(n_followers));
    result.e.resize(static_cast<size_t>(n_followers));
    for (int i = 0; i < n_followers; ++i) {
        const auto& fol = m.followers[static_cast<size_t>(i)];
        result.x[static_cast<size_t>(i)].resize(est_samples, fol.state_dim());
        result.eta[static_cast<size_t>(i)].resize(est_samples, n0);
        result.u[static_cast<size_t>(i)].resize(est_samples, fol.input_dim());
        result.e[static_cast<size_t>(i)].resize(est_samples, fol.output_dim());
    }

    std::vector<long long> tail_start(n_segments);
    for (size_t k = 0; k < n_segments; ++k) {
        const long long first = k == 0 ? 0 : switch_step[k];
        const long long len = segment_last[k] - first;
        tail_start[k] = segment_last[k] -
                        static_cast<long long>(cfg.tail_fraction * static_cast<double>(len));
    }

    Eigen::VectorXd k1(layout.total), k2(layout.total), k3(layout.total), k4(layout.total);
    Eigen::VectorXd ztmp(layout.total);
    int sample = 0;
    size_t seg = 0;

    for (long long step = 0; step <= steps_total; ++step) {
        if (seg + 1 < n_segments && step == switch_step[seg + 1]) {
            ++seg;
            auto outcome = synth::retarget(design, sched.segments[seg].transform, m);
            if (!outcome.ok()) {
                std::ostringstream os;
                os << "retarget failed at t = " << static_cast<double>(step) * cfg.dt;
                throw ConditionFailed(os.str());
            }
            design = std::move(*outcome.design);
            dynamics.bind_design(design);
        }

        const bool record = (step % cfg.store_stride == 0) || step == steps_total;
        const bool in_tail = step >= tail_start[seg] && step <= segment_last[seg];
        const bool at_end = step == segment_last[seg];
        if (record || in_tail || at_end) {
            const auto v = z.segment(layout.v_offset, n0);
            double max_err = 0.0;
            double max_obs = 0.0;
            for (int i = 0; i < n_followers; ++i) {
                const auto& fol = m.followers[static_cast<size_t>(i)];
                const auto x = z.segment(layout.x_offset[static_cast<size_t>(i)],
                                         fol.state_dim());
                const auto eta = z.segment(layout.eta_offset + i * n0, n0);
                const Eigen::VectorXd u_i = control_input(design, i, x, eta);
                const Eigen::VectorXd e_i =
                    tracking_error(fol, design.terms(i), x, u_i, v);
                max_err = std::max(max_err, e_i.norm());
                max_obs = std::max(max_obs, (eta - v).norm());
                if (record) {
                    result.x[static_cast<size_t>(i)].row(sample) = x;
                    result.eta[static_cast<size_t>(i)].row(sample) = eta;
                    result.u[static_cast<size_t>(i)].row(sample) = u_i;
                    result.e[static_cast<size_t>(i)].row(sample) = e_i;
                }
            }
            if (record) {
                result.v.row(sample) = v;
                result.time.push_back(static_cast<double>(step) * cfg.dt);
                result.segment_of_sample.push_back(static_cast<int>(seg));
                ++sample;
            }
            if (in_tail) {
                result.segments[seg].tail_max_error =
                    std::max(result.segments[seg].tail_max_error, max_err);
            }
            if (at_end) {
                result.segments[seg].end_observer_error = max_obs;
            }
        }

        if (step == steps_total) {
            break;
        }

        dynamics(z, k1);
        ztmp = z + (0.5 * cfg.dt) * k1;
        dynamics(ztmp, k2);
        ztmp = z + (0.5 * cfg.dt) * k2;
        dynamics(ztmp, k3);
        ztmp = z + cfg.dt * k3;
        dynamics(ztmp, k4);
        z += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    result.v.conservativeResize(sample, Eigen::NoChange);
    for (int i = 0; i < n_followers; ++i) {
        result.x[static_cast<size_t>(i)].conservativeResize(sample, Eigen::NoChange);
        result.eta[static_cast<size_t>(i)].conservativeResize(sample, Eigen::NoChange);
        result.u[static_cast<size_t>(i)].conservativeResize(sample, Eigen::NoChange);
        result.e[static_cast<size_t>(i)].conservativeResize(sample, Eigen::NoChange);
    }
    return result;
}

} // namespace morp::sim
