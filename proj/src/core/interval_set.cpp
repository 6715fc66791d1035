#include "core/interval_set.hpp"

#include <algorithm>
#include <cassert>

namespace cppa {

void IntervalSet::insert(std::uint64_t lo, std::uint64_t hi) {
    assert(lo <= hi);
    ivals_.push_back({lo, hi});
    std::sort(ivals_.begin(), ivals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    merged.reserve(ivals_.size());
    for (const Interval& iv : ivals_) {
        if (!merged.empty()) {
            Interval& last = merged.back();
            // Merge overlapping or adjacent intervals.
            if (iv.lo <= last.hi || (last.hi != UINT64_MAX && iv.lo == last.hi + 1)) {
                last.hi = std::max(last.hi, iv.hi);
                continue;
            }
        }
        merged.push_back(iv);
    }
    ivals_ = std::move(merged);
}

bool IntervalSet::contains(std::uint64_t v) const {
    auto it = std::upper_bound(ivals_.begin(), ivals_.end(), v,
                               [](std::uint64_t x, const Interval& iv) { return x < iv.lo; });
    if (it == ivals_.begin()) return false;
    --it;
    return v >= it->lo && v <= it->hi;
}

std::uint64_t IntervalSet::count() const {
    std::uint64_t n = 0;
    for (const Interval& iv : ivals_) n += iv.hi - iv.lo + 1;
    return n;
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
    for (const Interval& iv : ivals_) {
        auto it = std::upper_bound(other.ivals_.begin(), other.ivals_.end(), iv.lo,
                                   [](std::uint64_t x, const Interval& o) { return x < o.lo; });
        if (it == other.ivals_.begin()) return false;
        --it;
        if (iv.lo < it->lo || iv.hi > it->hi) return false;
    }
    return true;
}

bool IntervalSet::intersects(const IntervalSet& other) const {
    std::size_t i = 0, j = 0;
    while (i < ivals_.size() && j < other.ivals_.size()) {
        const Interval& a = ivals_[i];
        const Interval& b = other.ivals_[j];
        if (a.hi < b.lo) {
            ++i;
        } else if (b.hi < a.lo) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    IntervalSet out = *this;
    for (const Interval& iv : other.ivals_) out.insert(iv.lo, iv.hi);
    return out;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    IntervalSet out;
    std::size_t i = 0, j = 0;
    while (i < ivals_.size() && j < other.ivals_.size()) {
        const Interval& a = ivals_[i];
        const Interval& b = other.ivals_[j];
        const std::uint64_t lo = std::max(a.lo, b.lo);
        const std::uint64_t hi = std::min(a.hi, b.hi);
        if (lo <= hi) out.ivals_.push_back({lo, hi});
        if (a.hi < b.hi) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
    IntervalSet out;
    for (Interval iv : ivals_) {
        std::uint64_t lo = iv.lo;
        bool alive = true;
        for (const Interval& cut : other.ivals_) {
            if (cut.hi < lo) continue;
            if (cut.lo > iv.hi) break;
            if (cut.lo > lo) out.ivals_.push_back({lo, cut.lo - 1});
            if (cut.hi >= iv.hi) {
                alive = false;
                break;
            }
            lo = cut.hi + 1;
        }
        if (alive && lo <= iv.hi) out.ivals_.push_back({lo, iv.hi});
    }
    return out;
}

IntervalSet IntervalSet::complement(std::uint64_t domain_lo, std::uint64_t domain_hi) const {
    IntervalSet domain(domain_lo, domain_hi);
    return domain.subtract(*this);
}

std::string IntervalSet::str() const {
    if (ivals_.empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < ivals_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(ivals_[i].lo);
        if (ivals_[i].hi != ivals_[i].lo) out += "-" + std::to_string(ivals_[i].hi);
    }
    return out;
}

} // namespace cppa
