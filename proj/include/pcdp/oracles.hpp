#pragma once

// Brute-force references. Nothing here touches the solver code; the only
// shared header is the error type.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pcdp/error.hpp"

namespace pcdp::oracles {

struct budget {
    static constexpr std::size_t knapsack_n = 20;
    static constexpr std::size_t tree_n = 12;
    static constexpr std::size_t necklace_n = 10;
    static constexpr std::size_t grid = 10000;
};

// right-continuous step function: ys[i] on [starts[i], starts[i+1]), last piece closed
struct step_fn {
    double lo;
    double hi;
    std::vector<double> starts;
    std::vector<double> ys;
    double at(double x) const;
};

// min over xbar of f1(xbar) + f2(x - xbar), with xbar and x - xbar inside the domains
double convolution_at(const step_fn& f1, const step_fn& f2, double x);
double maxplus_at(const step_fn& f1, const step_fn& f2, double x);
std::vector<double> convolution(const step_fn& f1, const step_fn& f2, const std::vector<double>& grid);

struct item {
    double p;
    double w;
};
double knapsack(const std::vector<item>& items, double x);
// best subset as indices into items
std::vector<std::size_t> knapsack_set(const std::vector<item>& items, double x);

struct edge {
    int u;
    int v;
    double cap;
};

// min cut over all assignments of vertices to k parts, each part of weight <= ceil(w(V)/k)
double partition(int n, const std::vector<edge>& edges, const std::vector<int>& weight, int k);
// same with an explicit bound on the weight of a part
double partition(int n, const std::vector<edge>& edges, const std::vector<int>& weight, int k, int part_cap);

// least makespan of the jobs on k identical machines, by trying every assignment
double makespan(const std::vector<double>& jobs, int k);

// Size classes for signatures: class -1 below eps*ceil(W/k), class j up to
// (1+eps)^j*eps*ceil(W/k) for j < t, nothing above.
struct size_classes {
    size_classes(double eps, int k, int total_w);
    int t = 0;
    int M = 0;
    std::vector<double> xi;
    std::optional<int> of(int x) const;
};

// Entries of the signature table of one vertex v of a rooted tree, found by
// trying every subset of the edges below v. A closed component may report any
// weight at least its own, except that a lone vertex that is a leaf or has
// exactly two children must report its own weight.
struct sig_entries {
    std::vector<std::pair<std::vector<int>, double>> cut;                // parent edge cut
    std::vector<std::pair<std::vector<int>, std::vector<double>>> keep; // x = 0..W
};
sig_entries partition_entries(const std::vector<int>& parent, const std::vector<double>& up_cap,
                              const std::vector<int>& weight, int v, const size_classes& sc);

struct ssl_instance {
    int n = 0;
    std::vector<edge> edges;
    std::vector<double> demand;
    std::vector<bool> source_ok;
};
// fewest sources that satisfy every demand; nullopt when impossible
std::optional<int> ssl(const ssl_instance& in);
// given a source set, can every demand be met?
bool ssl_feasible(const ssl_instance& in, const std::vector<bool>& source);

// subtree of v when the instance is rooted at `root`: least inflow over the parent
// edge v needs when using at most i sources inside the subtree (+inf if none works)
double ssl_f(const ssl_instance& in, int root, int v, int i);

struct necklace_result {
    double value;
    int s;
    double c;
};
necklace_result necklace(const std::vector<double>& x, const std::vector<double>& y);
// objective of a fixed shift s: half the spread of z(s)
double necklace_shift(const std::vector<double>& x, const std::vector<double>& y, int s);

} // namespace pcdp::oracles
