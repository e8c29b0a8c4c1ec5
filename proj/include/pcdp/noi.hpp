#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pcdp {

struct interval {
    double a;
    double b;
    bool operator==(const interval&) const = default;
};

// Disjoint closed intervals keyed by upper endpoint. Inserting merges with
// everything the new interval overlaps or touches.
class noi_set {
public:
    // stored interval with minimal b such that b >= z
    std::optional<interval> closest_larger(double z) const;
    void insert(double a, double b);
    bool contains(double x) const;

    std::size_t size() const { return by_hi_.size(); }
    bool empty() const { return by_hi_.empty(); }
    void clear() { by_hi_.clear(); }
    std::vector<interval> intervals() const;

private:
    std::map<double, double> by_hi_; // b -> a
};

} // namespace pcdp
