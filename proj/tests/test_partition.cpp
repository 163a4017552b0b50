#include "morp/partition.hpp"

#include <gtest/gtest.h>
#include <random>

#include "morp/errors.hpp"

using morp::partition::bell;
using morp::partition::is_gauge;
using morp::partition::partition_sets;
using morp::partition::PartitionSchedule;
using morp::partition::PartitionTransform;
using morp::partition::stirling2;

namespace {

PartitionTransform transform(std::initializer_list<double> terms) {
    PartitionTransform p;
    p.terms.resize(static_cast<Eigen::Index>(terms.size()));
    Eigen::Index i = 0;
    for (const double t : terms) {
        p.terms(i++) = t;
    }
    return p;
}

// Counts k-partitions of an n-set by enumerating restricted growth strings.
std::uint64_t count_partitions(int n, int k) {
    std::vector<int> assignment(static_cast<size_t>(n), 0);
    std::uint64_t count = 0;
    const auto recurse = [&](auto&& self, int element, int blocks) -> void {
        if (element == n) {
            if (blocks == k) {
                ++count;
            }
            return;
        }
        for (int block = 0; block <= blocks && block < k; ++block) {
            assignment[static_cast<size_t>(element)] = block;
            self(self, element + 1, std::max(blocks, block + 1));
        }
    };
    recurse(recurse, 0, 0);
    return count;
}

} // namespace

TEST(PartitionSets, DistinctTerms) {
    const auto sets = partition_sets(transform({1.0, 0.75, 0.5}));
    ASSERT_EQ(sets.size(), 3u);
    EXPECT_EQ(sets[0], std::vector<int>{0});
    EXPECT_EQ(sets[1], std::vector<int>{1});
    EXPECT_EQ(sets[2], std::vector<int>{2});
}

TEST(PartitionSets, AllEqualTerms) {
    const auto sets = partition_sets(transform({1.0, 1.0, 1.0, 1.0}));
    ASSERT_EQ(sets.size(), 1u);
    EXPECT_EQ(sets[0], (std::vector<int>{0, 1, 2, 3}));
}

TEST(PartitionSets, GaugeBipartition) {
    const auto sets = partition_sets(transform({1.0, -1.0, 1.0}));
    ASSERT_EQ(sets.size(), 2u);
    EXPECT_EQ(sets[0], (std::vector<int>{0, 2}));
    EXPECT_EQ(sets[1], std::vector<int>{1});
}

TEST(PartitionSets, LawsHoldOnRandomTerms) {
    std::mt19937_64 rng(3);
    const double values[] = {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_int_distribution<int> size(1, 12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = size(rng);
        PartitionTransform p;
        p.terms.resize(n);
        for (int i = 0; i < n; ++i) {
            p.terms(i) = values[pick(rng)];
        }
        const auto sets = partition_sets(p);

        std::vector<int> seen(static_cast<size_t>(n), 0);
        for (const auto& set : sets) {
            EXPECT_FALSE(set.empty());
            for (const int i : set) {
                ++seen[static_cast<size_t>(i)];
            }
        }
        for (const int count : seen) {
            EXPECT_EQ(count, 1); // disjoint and covering
        }
        std::vector<double> distinct(p.terms.begin(), p.terms.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        EXPECT_EQ(sets.size(), distinct.size());
    }
}

TEST(IsGauge, Cases) {
    EXPECT_TRUE(is_gauge(transform({1.0, -1.0, -1.0, 1.0})));
    EXPECT_FALSE(is_gauge(transform({1.0, 0.75, 0.5})));
    EXPECT_TRUE(is_gauge(transform({-1.0, -1.0})));
}

TEST(Stirling, KnownRow) {
    EXPECT_EQ(stirling2(5, 1), 1u);
    EXPECT_EQ(stirling2(5, 2), 15u);
    EXPECT_EQ(stirling2(5, 3), 25u);
    EXPECT_EQ(stirling2(5, 4), 10u);
    EXPECT_EQ(stirling2(5, 5), 1u);
    EXPECT_EQ(stirling2(6, 2), 31u);
}

TEST(Stirling, MatchesBruteForceEnumeration) {
    for (int n = 1; n <= 10; ++n) {
        std::uint64_t total = 0;
        for (int k = 1; k <= n; ++k) {
            EXPECT_EQ(stirling2(n, k), count_partitions(n, k)) << "n=" << n << " k=" << k;
            total += stirling2(n, k);
        }
        EXPECT_EQ(bell(n), total);
    }
}

TEST(Bell, KnownValues) {
    EXPECT_EQ(bell(1), 1u);
    EXPECT_EQ(bell(4), 15u);
    EXPECT_EQ(bell(5), 52u);
    EXPECT_EQ(bell(20), 51724158235372ull);
}

TEST(Counting, DomainErrors) {
    EXPECT_THROW(stirling2(0, 1), morp::DomainError);
    EXPECT_THROW(stirling2(5, 0), morp::DomainError);
    EXPECT_THROW(stirling2(5, 6), morp::DomainError);
    EXPECT_THROW(stirling2(21, 3), morp::DomainError);
    EXPECT_THROW(bell(0), morp::DomainError);
    EXPECT_THROW(bell(21), morp::DomainError);
}

TEST(Schedule, ValidatesSegments) {
    PartitionSchedule sched;
    sched.horizon = 10.0;
    sched.segments = {{0.0, transform({1.0, 2.0})}, {5.0, transform({2.0, 2.0})}};
    EXPECT_NO_THROW(sched.validate());

    sched.segments[0].t_start = 1.0;
    EXPECT_THROW(sched.validate(), std::invalid_argument);

    sched.segments[0].t_start = 0.0;
    sched.segments[1].t_start = 0.0;
    EXPECT_THROW(sched.validate(), std::invalid_argument);

    sched.segments[1].t_start = 5.0;
    sched.segments[1].transform = transform({1.0});
    EXPECT_THROW(sched.validate(), std::invalid_argument);
}
