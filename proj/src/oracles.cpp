#include "pcdp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace pcdp::oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void need(bool ok, const char* what) {
    if (!ok) fail(errc::budget_exceeded, what);
}

} // namespace

double step_fn::at(double x) const {
    std::size_t k = 0;
    while (k + 1 < starts.size() && starts[k + 1] <= x) ++k;
    return ys[k];
}

namespace {

template <class Better>
double split_scan(const step_fn& f1, const step_fn& f2, double x, double worst, Better better) {
    const double lo = std::max(f1.lo, x - f2.hi);
    const double hi = std::min(f1.hi, x - f2.lo);
    if (lo > hi) return worst;
    // every xbar where either operand may change value, then cells between them
    std::vector<double> pts{lo, hi};
    for (double s : f1.starts) if (s > lo && s < hi) pts.push_back(s);
    for (double s : f2.starts) if (x - s > lo && x - s < hi) pts.push_back(x - s);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double best = worst;
    auto try_at = [&](double xb) {
        double v = f1.at(xb) + f2.at(x - xb);
        if (better(v, best)) best = v;
    };
    for (std::size_t k = 0; k < pts.size(); ++k) {
        try_at(pts[k]);
        if (k + 1 < pts.size()) try_at(0.5 * (pts[k] + pts[k + 1]));
    }
    return best;
}

} // namespace

double convolution_at(const step_fn& f1, const step_fn& f2, double x) {
    return split_scan(f1, f2, x, kInf, [](double a, double b) { return a < b; });
}

double maxplus_at(const step_fn& f1, const step_fn& f2, double x) {
    return split_scan(f1, f2, x, -kInf, [](double a, double b) { return a > b; });
}

std::vector<double> convolution(const step_fn& f1, const step_fn& f2, const std::vector<double>& grid) {
    need(grid.size() <= budget::grid, "grid too large for the convolution oracle");
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid) out.push_back(convolution_at(f1, f2, x));
    return out;
}

std::vector<std::size_t> knapsack_set(const std::vector<item>& items, double x) {
    need(items.size() <= budget::knapsack_n, "too many items for the knapsack oracle");
    const std::size_t n = items.size();
    double best = 0;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double p = 0, w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) {
                p += items[i].p;
                w += items[i].w;
            }
        if (w <= x && p > best) {
            best = p;
            best_mask = mask;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (best_mask >> i & 1u) out.push_back(i);
    return out;
}

double knapsack(const std::vector<item>& items, double x) {
    double p = 0;
    for (auto i : knapsack_set(items, x)) p += items[i].p;
    return p;
}

double partition(int n, const std::vector<edge>& edges, const std::vector<int>& weight, int k) {
    int total = 0;
    for (int w : weight) total += w;
    return partition(n, edges, weight, k, (total + k - 1) / k);
}

double partition(int n, const std::vector<edge>& edges, const std::vector<int>& weight, int k, int part_cap) {
    need(n <= static_cast<int>(budget::tree_n), "too many vertices for the partition oracle");
    std::vector<int> part(n, 0), load(k, 0);
    double best = kInf;
    // parts are interchangeable: vertex i may only open part max_used+1
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (i == n) {
            double cut = 0;
            for (const auto& e : edges)
                if (part[e.u] != part[e.v]) cut += e.cap;
            best = std::min(best, cut);
            return;
        }
        for (int p = 0; p < std::min(k, used + 1); ++p) {
            if (load[p] + weight[i] > part_cap) continue;
            part[i] = p;
            load[p] += weight[i];
            rec(i + 1, std::max(used, p + 1));
            load[p] -= weight[i];
        }
    };
    rec(0, 0);
    return best;
}

double makespan(const std::vector<double>& jobs, int k) {
    need(jobs.size() <= 14, "too many jobs for the makespan oracle");
    if (jobs.empty()) return 0;
    std::vector<double> load(static_cast<std::size_t>(k), 0);
    double best = kInf;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == jobs.size()) {
            best = std::min(best, *std::max_element(load.begin(), load.end()));
            return;
        }
        for (auto& l : load) {
            l += jobs[i];
            rec(i + 1);
            l -= jobs[i];
        }
    };
    rec(0);
    return best;
}

size_classes::size_classes(double eps, int k, int total_w) {
    const double base = eps * ((total_w + k - 1) / k);
    // t - 1 is the least j with (1+eps)^j >= 1/eps
    double p = 1;
    int j = 0;
    while (p * eps < 1) {
        p *= 1 + eps;
        ++j;
    }
    t = j + 1;
    M = static_cast<int>(std::ceil(k / eps)) + 1;
    p = 1;
    for (int i = 0; i < t; ++i) {
        xi.push_back(p * base);
        p *= 1 + eps;
    }
}

std::optional<int> size_classes::of(int x) const {
    if (x < xi[0]) return -1;
    for (int j = 0; j < t; ++j)
        if (x <= xi[static_cast<std::size_t>(j)]) return j;
    return std::nullopt;
}

sig_entries partition_entries(const std::vector<int>& parent, const std::vector<double>& up_cap,
                              const std::vector<int>& weight, int v, const size_classes& sc) {
    const int n_all = static_cast<int>(parent.size());
    int W = 0;
    for (int w : weight) W += w;
    std::vector<std::vector<int>> kids(static_cast<std::size_t>(n_all));
    for (int u = 0; u < n_all; ++u)
        if (parent[u] >= 0) kids[static_cast<std::size_t>(parent[u])].push_back(u);
    std::vector<int> sub{v};
    for (std::size_t i = 0; i < sub.size(); ++i)
        for (int c : kids[static_cast<std::size_t>(sub[i])]) sub.push_back(c);
    need(sub.size() <= budget::tree_n, "subtree too large for the entry oracle");
    // edges below v, one per non-root vertex of the subtree
    std::vector<int> lower(sub.begin() + 1, sub.end());
    const std::size_t m = lower.size();

    using vec = std::vector<int>;
    std::map<vec, double> cut;
    std::map<vec, std::vector<double>> keep;

    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        // comp[u] = representative of u's component; bit i set means edge above lower[i] is cut
        std::map<int, int> comp;
        double cost = 0;
        for (int u : sub) comp[u] = u;
        for (std::size_t i = 0; i < m; ++i) {
            int c = lower[i];
            if (mask >> i & 1u) cost += up_cap[static_cast<std::size_t>(c)];
            else comp[c] = comp[parent[c]]; // sub lists parents first
        }
        std::map<int, std::vector<int>> members;
        for (int u : sub) members[comp[u]].push_back(u);

        auto claims = [&](const std::vector<int>& mem) {
            int wt = 0;
            for (int u : mem) wt += weight[static_cast<std::size_t>(u)];
            std::set<int> out;
            const std::size_t d = kids[static_cast<std::size_t>(mem[0])].size();
            const bool exact = mem.size() == 1 && (d == 0 || d == 2);
            for (int x = wt; x <= (exact ? wt : std::max(wt, W)); ++x)
                if (auto c = sc.of(x)) out.insert(*c);
            return out;
        };
        auto reach = [&](bool close_v) {
            std::set<vec> s{vec(static_cast<std::size_t>(sc.t), 0)};
            for (const auto& [r, mem] : members) {
                if (r == v && !close_v) continue;
                std::set<vec> next;
                for (int c : claims(mem))
                    for (vec g : s) {
                        if (c >= 0 && ++g[static_cast<std::size_t>(c)] > sc.M - 1) continue;
                        next.insert(g);
                    }
                s = std::move(next);
            }
            return s;
        };

        if (up_cap[static_cast<std::size_t>(v)] < kInf) {
            const double c = cost + up_cap[static_cast<std::size_t>(v)];
            for (const auto& g : reach(true)) {
                auto [it, fresh] = cut.emplace(g, c);
                if (!fresh) it->second = std::min(it->second, c);
            }
        }
        int open_w = 0;
        for (int u : members[v]) open_w += weight[static_cast<std::size_t>(u)];
        for (const auto& g : reach(false)) {
            auto [it, fresh] = keep.emplace(g, std::vector<double>(static_cast<std::size_t>(W + 1), kInf));
            for (int x = open_w; x <= W; ++x)
                it->second[static_cast<std::size_t>(x)] = std::min(it->second[static_cast<std::size_t>(x)], cost);
        }
    }
    sig_entries out;
    out.cut.assign(cut.begin(), cut.end());
    for (auto& [g, a] : keep)
        if (std::any_of(a.begin(), a.end(), [](double y) { return y < kInf; })) out.keep.emplace_back(g, a);
    return out;
}

namespace {

struct rooted {
    std::vector<int> parent;
    std::vector<double> up_cap; // capacity of the edge to the parent
    std::vector<std::vector<int>> kids;
    std::vector<int> order; // parents before children
};

rooted root_at(const ssl_instance& in, const std::vector<int>& roots) {
    rooted r;
    r.parent.assign(in.n, -2);
    r.up_cap.assign(in.n, 0);
    r.kids.assign(in.n, {});
    std::vector<std::vector<std::pair<int, double>>> adj(in.n);
    for (const auto& e : in.edges) {
        adj[e.u].push_back({e.v, e.cap});
        adj[e.v].push_back({e.u, e.cap});
    }
    auto grow = [&](int s) {
        r.parent[s] = -1;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            r.order.push_back(u);
            for (auto [v, c] : adj[u])
                if (r.parent[v] == -2) {
                    r.parent[v] = u;
                    r.up_cap[v] = c;
                    r.kids[u].push_back(v);
                    stack.push_back(v);
                }
        }
    };
    for (int s : roots) if (r.parent[s] == -2) grow(s);
    for (int s = 0; s < in.n; ++s) if (r.parent[s] == -2) grow(s);
    return r;
}

// least inflow each vertex needs from its parent; +inf = impossible, -inf = source
std::vector<double> needs(const ssl_instance& in, const rooted& r, const std::vector<bool>& source) {
    std::vector<double> nd(in.n, 0);
    for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
        int u = *it;
        double x = source[u] ? -kInf : in.demand[u];
        for (int c : r.kids[u]) {
            if (nd[c] > r.up_cap[c]) {
                x = kInf;
                break;
            }
            x += std::max(nd[c], -r.up_cap[c]);
        }
        nd[u] = x;
    }
    return nd;
}

} // namespace

bool ssl_feasible(const ssl_instance& in, const std::vector<bool>& source) {
    auto r = root_at(in, {});
    auto nd = needs(in, r, source);
    for (int u = 0; u < in.n; ++u)
        if (r.parent[u] == -1 && nd[u] > 0) return false;
    return true;
}

std::optional<int> ssl(const ssl_instance& in) {
    need(in.n <= static_cast<int>(budget::tree_n), "too many vertices for the ssl oracle");
    std::optional<int> best;
    for (std::uint32_t mask = 0; mask < (1u << in.n); ++mask) {
        int cnt = __builtin_popcount(mask);
        if (best && cnt >= *best) continue;
        std::vector<bool> src(in.n);
        bool ok = true;
        for (int u = 0; u < in.n; ++u) {
            src[u] = mask >> u & 1u;
            if (src[u] && !in.source_ok[u]) ok = false;
        }
        if (ok && ssl_feasible(in, src)) best = cnt;
    }
    return best;
}

double ssl_f(const ssl_instance& in, int root, int v, int i) {
    need(in.n <= static_cast<int>(budget::tree_n), "too many vertices for the ssl oracle");
    auto r = root_at(in, {root});
    std::vector<bool> inside(in.n, false);
    std::vector<int> stack{v};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        inside[u] = true;
        for (int c : r.kids[u]) stack.push_back(c);
    }
    double best = kInf;
    for (std::uint32_t mask = 0; mask < (1u << in.n); ++mask) {
        if (__builtin_popcount(mask) > i) continue;
        std::vector<bool> src(in.n);
        bool ok = true;
        for (int u = 0; u < in.n; ++u) {
            src[u] = mask >> u & 1u;
            if (src[u] && (!in.source_ok[u] || !inside[u])) ok = false;
        }
        if (!ok) continue;
        best = std::min(best, needs(in, r, src)[v]);
    }
    return best;
}

double necklace_shift(const std::vector<double>& x, const std::vector<double>& y, int s) {
    const int n = static_cast<int>(x.size());
    double lo = kInf, hi = -kInf;
    for (int i = 0; i < n; ++i) {
        double z = x[i] - y[(i + s) % n];
        lo = std::min(lo, z);
        hi = std::max(hi, z);
    }
    return 0.5 * (hi - lo);
}

necklace_result necklace(const std::vector<double>& x, const std::vector<double>& y) {
    need(x.size() <= budget::necklace_n, "too many beads for the necklace oracle");
    if (x.size() != y.size()) fail(errc::length_mismatch, "necklaces differ in length");
    if (x.empty()) return {0.0, 0, 0.0};
    const int n = static_cast<int>(x.size());
    necklace_result best{kInf, 0, 0.0};
    for (int s = 0; s < n; ++s) {
        double v = necklace_shift(x, y, s);
        if (v < best.value) {
            double lo = kInf, hi = -kInf;
            for (int i = 0; i < n; ++i) {
                double z = x[i] - y[(i + s) % n];
                lo = std::min(lo, z);
                hi = std::max(hi, z);
            }
            double c = -0.5 * (lo + hi);
            c -= std::floor(c);
            best = {v, s, c};
        }
    }
    return best;
}

} // namespace pcdp::oracles
