#include "morp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "morp/errors.hpp"
#include "morp/solve.hpp"
#include "morp/synth.hpp"

namespace morp::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<int> prefix_sizes(int total) {
    // Up to ten roughly even checkpoints, always ending at the full set.
    std::vector<int> sizes;
    const int points = std::min(10, total);
    for (int k = 1; k <= points; ++k) {
        const int m = static_cast<int>(std::llround(static_cast<double>(total) * k / points));
        if (sizes.empty() || m > sizes.back()) {
            sizes.push_back(m);
        }
    }
    return sizes;
}

} // namespace

std::vector<double> random_terms(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::vector<double> terms(static_cast<size_t>(std::max(count, 0)));
    for (auto& t : terms) {
        t = dist(rng);
    }
    return terms;
}

BenchReport run_benchmark(const plant::FollowerModel& m, const plant::Exosystem& exo,
                          const std::vector<double>& terms, int repetitions) {
    if (repetitions < 1) {
        throw DomainError("benchmark needs at least one repetition");
    }
    BenchReport report;
    report.repetitions = repetitions;
    if (terms.empty()) {
        return report;
    }

    if (!solve::is_stabilizable(m.a, m.b)) {
        throw NotApplicable("benchmark follower is not stabilizable");
    }
    const auto setup_start = Clock::now();
    const auto independent = solve::solve_regulator(m, exo, 1.0);
    const auto matched = solve::solve_lme(m);
    report.setup_seconds = seconds_since(setup_start);
    if (!independent.feasible) {
        throw NotApplicable("term-free regulator equations are infeasible for this follower");
    }
    if (!matched.feasible) {
        throw NotApplicable("matched-disturbance equation is infeasible for this follower");
    }
    const Eigen::MatrixXd k1 = solve::stabilizing_gain(m.a, m.b, 1.0, 1.0);

    report.term_counts = prefix_sizes(static_cast<int>(terms.size()));
    double sink = 0.0;
    for (const int count : report.term_counts) {
        std::vector<double> times_one, times_two;
        std::uint64_t calls_one = 0, calls_two = 0;
        for (int rep = 0; rep < repetitions; ++rep) {
            const auto before_one = solve::solver_call_count();
            auto start = Clock::now();
            for (int t = 0; t < count; ++t) {
                const auto sol = solve::solve_regulator(m, exo, terms[static_cast<size_t>(t)]);
                const Eigen::MatrixXd k2 = sol.u - k1 * sol.x;
                sink += k2(0, 0);
            }
            times_one.push_back(seconds_since(start));
            calls_one = solve::solver_call_count() - before_one;

            const auto before_two = solve::solver_call_count();
            start = Clock::now();
            for (int t = 0; t < count; ++t) {
                const auto [xt, ut] = synth::pair_for_term(independent.x, independent.u,
                                                           matched.y,
                                                           terms[static_cast<size_t>(t)]);
                const Eigen::MatrixXd k2 = ut - k1 * xt;
                sink += k2(0, 0);
            }
            times_two.push_back(seconds_since(start));
            calls_two = solve::solver_call_count() - before_two;
        }
        report.elapsed_one.push_back(median(times_one));
        report.elapsed_two.push_back(median(times_two));
        report.solver_calls_one.push_back(calls_one);
        report.solver_calls_two.push_back(calls_two);
    }
    if (!std::isfinite(sink)) {
        throw NotApplicable("benchmark produced non-finite gains");
    }

    // Spot check: both strategies' pairs must satisfy the regulator
    // equations at a sample of terms.
    const size_t stride = std::max<size_t>(1, terms.size() / 10);
    for (size_t t = 0; t < terms.size(); t += stride) {
        const double s = terms[t];
        const auto direct = solve::solve_regulator(m, exo, s);
        const auto [xt, ut] = synth::pair_for_term(independent.x, independent.u, matched.y, s);
        const double defect_direct =
            std::max((direct.x * exo.a0 - m.a * direct.x - m.b * direct.u - m.e).norm(),
                     (m.c * direct.x + m.d * direct.u + plant::output_offset(m, s)).norm());
        const double defect_scaled =
            std::max((xt * exo.a0 - m.a * xt - m.b * ut - m.e).norm(),
                     (m.c * xt + m.d * ut + plant::output_offset(m, s)).norm());
        report.max_identity_residual =
            std::max({report.max_identity_residual, defect_direct, defect_scaled});
    }
    return report;
}

void write_csv(const BenchReport& report, std::ostream& os) {
    os << "M,elapsed_one_s,elapsed_two_s,calls_one,calls_two\n";
    for (size_t k = 0; k < report.term_counts.size(); ++k) {
        os << report.term_counts[k] << ',' << report.elapsed_one[k] << ','
           << report.elapsed_two[k] << ',' << report.solver_calls_one[k] << ','
           << report.solver_calls_two[k] << '\n';
    }
}

} // namespace morp::bench
