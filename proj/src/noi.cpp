#include "pcdp/noi.hpp"

#include <algorithm>

#include "pcdp/error.hpp"

namespace pcdp {

std::optional<interval> noi_set::closest_larger(double z) const {
    auto it = by_hi_.lower_bound(z);
    if (it == by_hi_.end()) return std::nullopt;
    return interval{it->second, it->first};
}

void noi_set::insert(double a, double b) {
    if (!(a < b)) fail(errc::empty_interval, "interval must satisfy a < b");
    auto it = by_hi_.lower_bound(a);
    while (it != by_hi_.end() && it->second <= b) {
        a = std::min(a, it->second);
        b = std::max(b, it->first);
        it = by_hi_.erase(it);
    }
    by_hi_.emplace(b, a);
}

bool noi_set::contains(double x) const {
    auto it = by_hi_.lower_bound(x);
    return it != by_hi_.end() && it->second <= x;
}

std::vector<interval> noi_set::intervals() const {
    std::vector<interval> out;
    out.reserve(by_hi_.size());
    for (const auto& [b, a] : by_hi_) out.push_back({a, b});
    return out;
}

} // namespace pcdp
