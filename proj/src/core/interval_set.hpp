#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cppa {

/// Closed interval over a discrete unsigned domain.
struct Interval {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0; // inclusive

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Normalized union of disjoint, non-adjacent, sorted closed intervals.
/// This is the backing representation for every selector field (addresses,
/// ports, protocol numbers treated as integers).
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(std::uint64_t lo, std::uint64_t hi) { insert(lo, hi); }

    static IntervalSet single(std::uint64_t v) { return IntervalSet(v, v); }

    void insert(std::uint64_t lo, std::uint64_t hi);

    bool empty() const { return ivals_.empty(); }
    bool contains(std::uint64_t v) const;
    std::uint64_t count() const; // number of member values

    const std::vector<Interval>& intervals() const { return ivals_; }

    bool operator==(const IntervalSet& other) const { return ivals_ == other.ivals_; }

    /// Subset test: every member of *this is a member of other.
    bool subset_of(const IntervalSet& other) const;
    bool intersects(const IntervalSet& other) const;

    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet subtract(const IntervalSet& other) const;

    /// Complement within [domain_lo, domain_hi].
    IntervalSet complement(std::uint64_t domain_lo, std::uint64_t domain_hi) const;

    std::string str() const;

private:
    std::vector<Interval> ivals_;
};

} // namespace cppa
