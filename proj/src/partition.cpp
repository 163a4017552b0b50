#include "morp/partition.hpp"

#include <stdexcept>

#include "morp/errors.hpp"

namespace morp::partition {

void PartitionTransform::validate() const {
    if (terms.size() < 1) {
        throw std::invalid_argument("partition transform needs at least one term");
    }
}

void PartitionSchedule::validate() const {
    if (segments.empty()) {
        throw std::invalid_argument("schedule needs at least one segment");
    }
    if (segments.front().t_start != 0.0) {
        throw std::invalid_argument("first schedule segment must start at t = 0");
    }
    const int n = segments.front().transform.size();
    double prev = -1.0;
    for (const auto& seg : segments) {
        seg.transform.validate();
        if (seg.transform.size() != n) {
            throw std::invalid_argument("all schedule segments must have the same follower count");
        }
        if (seg.t_start <= prev) {
            throw std::invalid_argument("schedule segment start times must be strictly increasing");
        }
        prev = seg.t_start;
    }
}

std::vector<std::vector<int>> partition_sets(const PartitionTransform& p) {
    p.validate();
    std::vector<double> seen;    // distinct values in first-occurrence order
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < p.size(); ++i) {
        const double v = p.terms(i);
        bool placed = false;
        for (size_t k = 0; k < seen.size(); ++k) {
            if (seen[k] == v) {
                sets[k].push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            seen.push_back(v);
            sets.push_back({i});
        }
    }
    return sets;
}

bool is_gauge(const PartitionTransform& p) {
    p.validate();
    for (int i = 0; i < p.size(); ++i) {
        if (p.terms(i) != 1.0 && p.terms(i) != -1.0) {
            return false;
        }
    }
    return true;
}

std::uint64_t stirling2(int n, int k) {
    if (n < 1 || n > 20 || k < 1 || k > n) {
        throw DomainError("stirling2 requires 1 <= k <= n <= 20");
    }
    // S(n,k) = k*S(n-1,k) + S(n-1,k-1); row-by-row, S(i,0) = 0 for i >= 1.
    std::vector<std::uint64_t> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1; // S(0,0)
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j >= 1; --j) {
            row[static_cast<size_t>(j)] =
                static_cast<std::uint64_t>(j) * row[static_cast<size_t>(j)] + row[static_cast<size_t>(j) - 1];
        }
        row[0] = 0;
    }
    return row[static_cast<size_t>(k)];
}

std::uint64_t bell(int n) {
    if (n < 1 || n > 20) {
        throw DomainError("bell requires 1 <= n <= 20");
    }
    std::uint64_t total = 0;
    for (int k = 1; k <= n; ++k) {
        total += stirling2(n, k);
    }
    return total;
}

} // namespace morp::partition
