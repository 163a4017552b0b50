#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace morp::partition {

// Diagonal transformation S = diag(s_1..s_N). The number k of distinct terms
// induces a k-partition of the followers: followers sharing a term share a
// set. Term comparison is exact; scenario files are authoritative.
struct PartitionTransform {
    Eigen::VectorXd terms;

    int size() const { return static_cast<int>(terms.size()); }

    void validate() const; // throws std::invalid_argument if empty
};

struct ScheduleSegment {
    double t_start = 0.0;
    PartitionTransform transform;
};

// Piecewise-constant transformation schedule. Segment k is active on
// [t_k, t_{k+1}) and the last segment runs to the horizon.
struct PartitionSchedule {
    std::vector<ScheduleSegment> segments;
    double horizon = 0.0;

    // Throws std::invalid_argument unless start times are strictly
    // increasing from 0 and all transforms share one follower count.
    void validate() const;
};

// The sets of follower indices induced by equal terms, ordered by first
// occurrence. Sets are nonempty, pairwise disjoint, and cover 0..N-1.
std::vector<std::vector<int>> partition_sets(const PartitionTransform& p);

// True iff every term is exactly +1 or -1 (which forces k <= 2).
bool is_gauge(const PartitionTransform& p);

// Number of k-partitions of an n-set (Stirling number of the second kind),
// exact for n <= 20. Throws DomainError outside 1 <= k <= n <= 20.
std::uint64_t stirling2(int n, int k);

// Number of all partitions of an n-set (Bell number), exact for n <= 20.
std::uint64_t bell(int n);

} // namespace morp::partition
