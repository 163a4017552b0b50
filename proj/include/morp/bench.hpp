#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "morp/plant.hpp"

namespace morp::bench {

// Elapsed times of the partition-dependent phase of both design strategies
// over growing prefixes of a set of transformation terms. Times are medians
// over the repetitions; the one-time term-free solves of the partition-
// independent strategy are excluded and reported in setup_seconds.
struct BenchReport {
    std::vector<int> term_counts;
    std::vector<double> elapsed_one;              // seconds per prefix
    std::vector<double> elapsed_two;              // seconds per prefix
    std::vector<std::uint64_t> solver_calls_one;  // equation solves per prefix
    std::vector<std::uint64_t> solver_calls_two;
    double setup_seconds = 0.0;
    double max_identity_residual = 0.0; // spot check of the regulator identity
    int repetitions = 0;
    std::uint64_t seed = 0; // seed the term set was drawn from, when applicable
};

// Uniform terms on [-3, 3] from a seeded generator.
std::vector<double> random_terms(int count, std::uint64_t seed);

// Times, for each prefix of the term set, the per-term regulator re-solve of
// the partition-dependent strategy against the per-term gain rescaling of
// the partition-independent strategy. Throws NotApplicable when either
// strategy's preconditions fail for the follower.
BenchReport run_benchmark(const plant::FollowerModel& m, const plant::Exosystem& exo,
                          const std::vector<double>& terms, int repetitions);

// Plot-ready CSV: M, elapsed_one_s, elapsed_two_s, calls_one, calls_two.
void write_csv(const BenchReport& report, std::ostream& os);

} // namespace morp::bench
