#include "pcdp/dpengine.hpp"

#include <algorithm>

namespace pcdp::dp {

rooted_forest::rooted_forest(std::size_t n) : parent_(n, npos), kids_(n), cap_(n, 0.0) {}

std::size_t rooted_forest::add_vertex() {
    parent_.push_back(npos);
    kids_.emplace_back();
    cap_.push_back(0.0);
    return parent_.size() - 1;
}

void rooted_forest::check(std::size_t v) const {
    if (v >= parent_.size()) fail(errc::bad_argument, "no vertex " + std::to_string(v));
}

void rooted_forest::set_parent_cap(std::size_t v, double c) {
    check(v);
    cap_[v] = c;
}

std::size_t rooted_forest::root_of(std::size_t v) const {
    check(v);
    while (parent_[v] != npos) v = parent_[v];
    return v;
}

std::size_t rooted_forest::depth(std::size_t v) const {
    check(v);
    std::size_t d = 0;
    while (parent_[v] != npos) {
        v = parent_[v];
        ++d;
    }
    return d;
}

std::size_t rooted_forest::height() const {
    std::size_t h = 0;
    std::vector<std::size_t> stack;
    for (std::size_t r : roots()) stack.push_back(r);
    std::vector<std::size_t> d(size(), 0);
    while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        h = std::max(h, d[u]);
        for (std::size_t c : kids_[u]) {
            d[c] = d[u] + 1;
            stack.push_back(c);
        }
    }
    return h;
}

std::vector<std::size_t> rooted_forest::roots() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(); ++v)
        if (parent_[v] == npos) out.push_back(v);
    return out;
}

std::vector<std::size_t> rooted_forest::path_to_root(std::size_t v) const {
    check(v);
    std::vector<std::size_t> out{v};
    while (parent_[v] != npos) {
        v = parent_[v];
        out.push_back(v);
    }
    return out;
}

std::vector<std::size_t> rooted_forest::postorder() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::size_t r : roots()) {
        std::vector<std::pair<std::size_t, std::size_t>> stack{{r, 0}};
        while (!stack.empty()) {
            auto& [u, k] = stack.back();
            if (k < kids_[u].size()) {
                std::size_t c = kids_[u][k++];
                stack.push_back({c, 0});
            } else {
                out.push_back(u);
                stack.pop_back();
            }
        }
    }
    return out;
}

bool rooted_forest::has_edge(std::size_t u, std::size_t v) const {
    check(u);
    check(v);
    return parent_[v] == u || parent_[u] == v;
}

void rooted_forest::attach(std::size_t u, std::size_t v, double cap) {
    parent_[v] = u;
    cap_[v] = cap;
    kids_[u].push_back(v);
}

void rooted_forest::detach(std::size_t v) {
    std::size_t p = parent_[v];
    std::erase(kids_[p], v);
    parent_[v] = npos;
    cap_[v] = 0.0;
}

std::vector<std::size_t> rooted_forest::cut(std::size_t u, std::size_t v) {
    check(u);
    check(v);
    std::size_t child;
    if (parent_[v] == u) child = v;
    else if (parent_[u] == v) child = u;
    else fail(errc::no_such_edge, "no edge " + std::to_string(u) + "-" + std::to_string(v));
    std::size_t p = parent_[child];
    detach(child);
    std::vector<std::size_t> out{child};
    for (std::size_t w : path_to_root(p)) out.push_back(w);
    return out;
}

std::vector<std::size_t> rooted_forest::link(std::size_t u, std::size_t v, double cap) {
    check(u);
    check(v);
    if (root_of(u) == root_of(v))
        fail(errc::would_create_cycle, "vertices " + std::to_string(u) + " and " + std::to_string(v) + " share a tree");
    std::vector<std::size_t> out;
    if (parent_[v] != npos) {
        // re-root at v: drop the root path top-down, put it back flipped
        auto path = path_to_root(v); // v = path[0], root = path.back()
        std::vector<double> caps(path.size(), 0.0);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) caps[k] = cap_[path[k]];
        for (std::size_t k = path.size() - 1; k-- > 0;) detach(path[k]);
        for (std::size_t k = path.size() - 1; k > 0; --k) attach(path[k - 1], path[k], caps[k - 1]);
        out.assign(path.rbegin(), path.rend());
    } else {
        out.push_back(v);
    }
    attach(u, v, cap);
    for (std::size_t w : path_to_root(u)) out.push_back(w);
    return out;
}

binarized binarize_tree(const rooted_forest& t) {
    binarized b;
    b.image.assign(t.size(), npos);
    // parents before children so every r_u exists before its children hang on it
    auto order = t.postorder();
    std::reverse(order.begin(), order.end());
    // attach point for each original vertex: (new parent node, cap)
    std::vector<std::pair<std::size_t, double>> hook(t.size(), {npos, 0.0});
    for (std::size_t u : order) {
        std::size_t ru = b.tree.add_vertex();
        b.origin.push_back(u);
        b.image[u] = ru;
        if (hook[u].first != npos) b.tree.link(hook[u].first, ru, hook[u].second);
        const auto& kids = t.children(u);
        const std::size_t d = kids.size();
        if (d <= 2) {
            for (std::size_t c : kids) hook[c] = {ru, t.parent_cap(c)};
            continue;
        }
        // heap positions 1..2d-1, position 1 is r_u, leaves are d..2d-1
        std::vector<std::size_t> node(2 * d, npos);
        node[1] = ru;
        for (std::size_t pos = 2; pos < 2 * d; ++pos) {
            node[pos] = b.tree.add_vertex();
            b.origin.push_back(npos);
            b.tree.link(node[pos / 2], node[pos], inf);
        }
        for (std::size_t k = 0; k < d; ++k) hook[kids[k]] = {node[d + k], t.parent_cap(kids[k])};
    }
    return b;
}

rooted_forest forest_from_edges(std::size_t n, const std::vector<weighted_edge>& edges) {
    std::vector<std::size_t> uf(n);
    for (std::size_t i = 0; i < n; ++i) uf[i] = i;
    auto find = [&](std::size_t x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) fail(errc::bad_argument, "edge endpoint out of range");
        std::size_t a = find(e.u), b = find(e.v);
        if (a == b) fail(errc::not_a_tree, "edge list has a cycle");
        uf[a] = b;
        adj[e.u].push_back({e.v, e.cap});
        adj[e.v].push_back({e.u, e.cap});
    }
    rooted_forest f(n);
    std::vector<char> seen(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        std::vector<std::size_t> queue{s};
        for (std::size_t q = 0; q < queue.size(); ++q) {
            std::size_t u = queue[q];
            for (auto [v, c] : adj[u]) {
                if (seen[v]) continue;
                seen[v] = 1;
                f.link(u, v, c);
                queue.push_back(v);
            }
        }
    }
    return f;
}

sparsifier_tree tree_identity_sparsifier::build(std::size_t n, const std::vector<weighted_edge>& edges) const {
    if (n == 0) fail(errc::not_a_tree, "empty graph");
    if (edges.size() != n - 1) fail(errc::not_a_tree, "a tree on n vertices has n-1 edges");
    auto f = forest_from_edges(n, edges);
    if (f.roots().size() != 1) fail(errc::not_a_tree, "graph is disconnected");
    return {binarize_tree(f), 1.0};
}

} // namespace pcdp::dp
