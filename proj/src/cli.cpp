#include "pcdp/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcdp/error.hpp"
#include "pcdp/knapsack.hpp"
#include "pcdp/necklace.hpp"
#include "pcdp/partition.hpp"
#include "pcdp/ssl.hpp"

namespace pcdp::cli {

namespace {

using json = nlohmann::json;

// an error already carrying file/line context
struct located : std::runtime_error {
    errc code;
    located(errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct line {
    int no;
    std::vector<std::string> tok;
};

struct text_file {
    std::string path;
    std::vector<line> lines;
};

text_file load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw located(errc::parse_error, path + ": cannot open");
    text_file f{path, {}};
    std::string s;
    for (int no = 1; std::getline(in, s); ++no) {
        if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
        std::istringstream ss(s);
        line l{no, {}};
        for (std::string t; ss >> t;) l.tok.push_back(t);
        if (!l.tok.empty()) f.lines.push_back(std::move(l));
    }
    return f;
}

[[noreturn]] void bad(const text_file& f, int no, const std::string& msg) {
    throw located(errc::parse_error, f.path + ":" + std::to_string(no) + ": " + msg);
}

void arity(const text_file& f, const line& l, std::size_t k) {
    if (l.tok.size() != k)
        bad(f, l.no, "expected " + std::to_string(k) + " fields, got " + std::to_string(l.tok.size()));
}

double num(const text_file& f, const line& l, std::size_t i) {
    const std::string& t = l.tok.at(i);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0') bad(f, l.no, "not a number: '" + t + "'");
    return v;
}

std::size_t index(const text_file& f, const line& l, std::size_t i) {
    const std::string& t = l.tok.at(i);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        bad(f, l.no, "not a non-negative integer: '" + t + "'");
    return std::stoull(t);
}

int integer(const text_file& f, const line& l, std::size_t i) {
    std::size_t v = index(f, l, i);
    if (v > 1'000'000'000) bad(f, l.no, "integer too large: '" + l.tok[i] + "'");
    return static_cast<int>(v);
}

// runs fn, attaching file and line to module errors
template <class Fn>
void at(const text_file& f, int no, Fn&& fn) {
    try {
        fn();
    } catch (const error& e) {
        throw located(e.code(), f.path + ":" + std::to_string(no) + ": " + e.what());
    }
}

std::string fixed(double v) { return fmt::format("{:.6f}", v); }

std::string id_list(const std::vector<std::size_t>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
    return s;
}

struct settings {
    std::string problem, action, file, trace, mode = "approx", report = "text";
    std::optional<double> eps, eps_bar;
    std::optional<int> k;
    std::optional<std::size_t> height;
    std::optional<double> max_price;
    std::uint64_t seed = 0;
    int threads = 1;
    bool timings = false;
};

struct record {
    std::string text;
    json obj;
};

struct report {
    std::vector<record> out;
    std::size_t ops = 0;
    std::size_t max_pieces = 0;
    std::vector<std::size_t> recomputed; // one entry per update
    std::vector<double> elapsed_us;      // one entry per trace line
    bool infeasible = false;
};

// replays a trace; step returns false for an unknown verb
template <class Step>
void replay(const settings& s, report& rep, Step&& step) {
    if (s.trace.empty()) throw located(errc::parse_error, "replay needs --trace");
    auto t = load(s.trace);
    for (const auto& l : t.lines) {
        auto t0 = std::chrono::steady_clock::now();
        bool known = true;
        at(t, l.no, [&] { known = step(t, l); });
        if (!known) bad(t, l.no, "unknown operation '" + l.tok[0] + "'");
        rep.elapsed_us.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count());
        ++rep.ops;
    }
}

void need_file(const settings& s) {
    if (s.file.empty()) throw located(errc::parse_error, s.problem + " " + s.action + " needs --file");
}

// ---- knapsack ----

struct kn_instance {
    double budget = 0, eps = 0.1;
    std::vector<kn_item> items;
};

kn_instance read_knapsack(const text_file& f) {
    if (f.lines.empty()) bad(f, 1, "empty instance");
    const auto& h = f.lines[0];
    arity(f, h, 3);
    kn_instance in;
    std::size_t n = index(f, h, 0);
    in.budget = num(f, h, 1);
    in.eps = num(f, h, 2);
    if (f.lines.size() != n + 1) bad(f, h.no, "expected " + std::to_string(n) + " item lines");
    for (std::size_t i = 1; i <= n; ++i) {
        arity(f, f.lines[i], 2);
        in.items.push_back({num(f, f.lines[i], 0), num(f, f.lines[i], 1)});
    }
    return in;
}

void run_knapsack(const settings& s, report& rep) {
    if (s.mode != "approx") throw located(errc::parse_error, "knapsack has no exact mode");
    need_file(s);
    auto f = load(s.file);
    auto in = read_knapsack(f);
    knapsack_options opt{s.eps.value_or(in.eps), in.budget, s.max_price.value_or(0)};
    if (!s.max_price && s.action == "replay" && !s.trace.empty()) {
        // W must bound the total price at all times; the trace tells us how far it can grow
        double total = 0;
        for (const auto& it : in.items) total += it.p;
        auto t = load(s.trace);
        for (const auto& l : t.lines)
            if (l.tok[0] == "insert" && l.tok.size() == 3) total += std::max(0.0, num(t, l, 1));
        opt.W = std::max(total, 1.0);
    }
    const bool fast = s.problem == "knapsack-fast";
    std::unique_ptr<knapsack> slow;
    std::unique_ptr<fast_knapsack> quick;
    at(f, 1, [&] {
        if (fast)
            quick = std::make_unique<fast_knapsack>(opt, in.items);
        else
            slow = std::make_unique<knapsack>(opt, in.items);
    });
    // the fast variant may swap its inner tree on a rebuild
    auto tree = [&]() -> const knapsack& { return fast ? quick->inner() : *slow; };

    auto query = [&] {
        double v = fast ? quick->query_value() : slow->value();
        auto sol = fast ? quick->query_solution() : slow->solution();
        rep.max_pieces = std::max(rep.max_pieces, tree().max_pieces());
        rep.out.push_back({"value=" + fixed(v) + " solution=" + id_list(sol), {{"value", v}, {"solution", sol}}});
    };
    if (s.action == "solve") return query();

    replay(s, rep, [&](const text_file& t, const line& l) {
        const std::string& op = l.tok[0];
        if (op == "insert") {
            arity(t, l, 3);
            if (fast)
                quick->insert(num(t, l, 1), num(t, l, 2));
            else
                slow->insert(num(t, l, 1), num(t, l, 2));
        } else if (op == "delete") {
            arity(t, l, 2);
            if (fast)
                quick->erase(index(t, l, 1));
            else
                slow->erase(index(t, l, 1));
        } else if (op == "query") {
            arity(t, l, 1);
            query();
            return true;
        } else {
            return false;
        }
        rep.recomputed.push_back(tree().last_recompute());
        rep.max_pieces = std::max(rep.max_pieces, tree().max_pieces());
        return true;
    });
}

// ---- partition ----

void run_partition(const settings& s, report& rep) {
    need_file(s);
    auto f = load(s.file);
    if (f.lines.empty()) bad(f, 1, "empty instance");
    const auto& h = f.lines[0];
    arity(f, h, 4);
    const std::size_t n = index(f, h, 0);
    partition::options opt;
    opt.k = s.k.value_or(integer(f, h, 1));
    opt.eps = s.eps.value_or(num(f, h, 2));
    opt.eps_bar = s.eps_bar.value_or(num(f, h, 3));
    opt.m = s.mode == "exact" ? partition::mode::exact : partition::mode::approx;
    opt.threads = s.threads;

    if (n == 0) bad(f, h.no, "a tree needs at least one vertex");
    if (f.lines.size() < n) bad(f, h.no, "expected " + std::to_string(n - 1) + " edge lines");
    dp::rooted_forest forest(n);
    std::vector<int> weight(n, 1);
    for (std::size_t i = 1; i < f.lines.size(); ++i) {
        const auto& l = f.lines[i];
        if (i < n) {
            arity(f, l, 3);
            at(f, l.no, [&] { forest.link(index(f, l, 0), index(f, l, 1), num(f, l, 2)); });
        } else {
            if (l.tok[0] != "w") bad(f, l.no, "expected a weight line 'w v 0|1'");
            arity(f, l, 3);
            std::size_t v = index(f, l, 1);
            int b = integer(f, l, 2);
            if (v >= n || b > 1) bad(f, l.no, "bad weight line");
            weight[v] = b;
        }
    }
    int total = 0;
    for (int w : weight) total += w;
    const int ceil_wk = opt.k > 0 ? (total + opt.k - 1) / opt.k : 0;

    auto emit = [&](const partition::result& r) {
        const double quality = ceil_wk > 0 ? r.makespan / ceil_wk : 0.0;
        rep.max_pieces = std::max(rep.max_pieces, r.max_pieces);
        rep.out.push_back({"value=" + fixed(r.value) + " quality=" + fixed(quality),
                           {{"value", r.value},
                            {"quality", quality},
                            {"makespan", r.makespan},
                            {"bound", r.bound},
                            {"delta", r.delta},
                            {"height", r.height},
                            {"pieces", r.max_pieces}}});
    };
    auto infeasible = [&] {
        rep.infeasible = true;
        rep.out.push_back({"infeasible", {{"infeasible", true}}});
    };

    if (s.action == "solve") {
        try {
            emit(partition::solve(forest, weight, opt));
        } catch (const error& e) {
            if (e.code() != errc::infeasible) throw located(e.code(), f.path + ": " + e.what());
            infeasible();
        }
        return;
    }

    std::unique_ptr<partition::dynamic> dy;
    at(f, 1, [&] { dy = std::make_unique<partition::dynamic>(forest, weight, opt, s.height.value_or(n)); });
    replay(s, rep, [&](const text_file& t, const line& l) {
        const std::string& op = l.tok[0];
        if (op == "link") {
            arity(t, l, 4);
            dy->link(index(t, l, 1), index(t, l, 2), num(t, l, 3));
        } else if (op == "cut") {
            arity(t, l, 3);
            dy->cut(index(t, l, 1), index(t, l, 2));
        } else if (op == "query") {
            arity(t, l, 1);
            try {
                emit(dy->query());
            } catch (const error& e) {
                if (e.code() != errc::infeasible) throw;
                infeasible();
            }
            return true;
        } else {
            return false;
        }
        rep.recomputed.push_back(dy->last_recompute());
        return true;
    });
}

// ---- ssl ----

void run_ssl(const settings& s, report& rep) {
    need_file(s);
    auto f = load(s.file);
    if (f.lines.empty()) bad(f, 1, "empty instance");
    const auto& h = f.lines[0];
    arity(f, h, 2);
    const std::size_t n = index(f, h, 0);
    if (n == 0) bad(f, h.no, "a tree needs at least one vertex");
    ssl::options opt;
    opt.eps = s.eps.value_or(num(f, h, 1));
    opt.m = s.mode == "exact" ? ssl::mode::exact : ssl::mode::approx;
    if (f.lines.size() != 2 * n) bad(f, h.no, "expected " + std::to_string(n - 1) + " edge and " + std::to_string(n) + " vertex lines");

    dp::rooted_forest forest(n);
    for (std::size_t i = 1; i < n; ++i) {
        const auto& l = f.lines[i];
        arity(f, l, 3);
        at(f, l.no, [&] { forest.link(index(f, l, 0), index(f, l, 1), num(f, l, 2)); });
    }
    std::vector<ssl::vertex> vs(n);
    std::vector<bool> seen(n, false);
    for (std::size_t i = n; i < 2 * n; ++i) {
        const auto& l = f.lines[i];
        arity(f, l, 3);
        std::size_t v = index(f, l, 0);
        int ok = integer(f, l, 2);
        if (v >= n || seen[v] || ok > 1) bad(f, l.no, "bad vertex line");
        seen[v] = true;
        vs[v] = {num(f, l, 1), ok == 1};
    }

    auto emit = [&](const ssl::result& r) {
        rep.max_pieces = std::max(rep.max_pieces, r.max_pieces);
        rep.out.push_back({"value=" + std::to_string(r.value) + " sources=" + id_list(r.sources),
                           {{"value", r.value},
                            {"raw", r.raw},
                            {"sources", r.sources},
                            {"delta", r.delta},
                            {"height", r.height},
                            {"pieces", r.max_pieces}}});
    };
    auto infeasible = [&] {
        rep.infeasible = true;
        rep.out.push_back({"infeasible", {{"infeasible", true}}});
    };

    if (s.action == "solve") {
        try {
            emit(ssl::solve(forest, vs, opt));
        } catch (const error& e) {
            if (e.code() != errc::infeasible) throw located(e.code(), f.path + ": " + e.what());
            infeasible();
        }
        return;
    }

    std::unique_ptr<ssl::dynamic> dy;
    at(f, 1, [&] { dy = std::make_unique<ssl::dynamic>(forest, vs, opt, s.height.value_or(n)); });
    replay(s, rep, [&](const text_file& t, const line& l) {
        const std::string& op = l.tok[0];
        if (op == "setdemand") {
            arity(t, l, 3);
            dy->set_demand(index(t, l, 1), num(t, l, 2));
        } else if (op == "setcap") {
            arity(t, l, 4);
            dy->set_capacity(index(t, l, 1), index(t, l, 2), num(t, l, 3));
        } else if (op == "remove") {
            arity(t, l, 3);
            dy->remove(index(t, l, 1), index(t, l, 2));
        } else if (op == "insert") {
            arity(t, l, 4);
            dy->insert(index(t, l, 1), index(t, l, 2), num(t, l, 3));
        } else if (op == "query") {
            arity(t, l, 1);
            try {
                emit(dy->query());
            } catch (const error& e) {
                if (e.code() != errc::infeasible) throw;
                infeasible();
            }
            return true;
        } else {
            return false;
        }
        rep.recomputed.push_back(dy->last_recompute());
        return true;
    });
}

// ---- necklace ----

void run_necklace(const settings& s, report& rep) {
    if (s.mode != "approx") throw located(errc::parse_error, "necklace has no exact mode");
    std::vector<double> x, y;
    double eps = s.eps.value_or(0.1);
    std::optional<text_file> f;
    if (!s.file.empty()) {
        f = load(s.file);
        if (f->lines.empty()) bad(*f, 1, "empty instance");
        const auto& h = f->lines[0];
        arity(*f, h, 2);
        const std::size_t n = index(*f, h, 0);
        eps = s.eps.value_or(num(*f, h, 1));
        if (f->lines.size() != n + 1) bad(*f, h.no, "expected " + std::to_string(n) + " bead lines");
        for (std::size_t i = 1; i <= n; ++i) {
            arity(*f, f->lines[i], 2);
            x.push_back(num(*f, f->lines[i], 0));
            y.push_back(num(*f, f->lines[i], 1));
        }
    } else if (s.action == "solve") {
        need_file(s);
    }

    std::unique_ptr<necklace::dynamic> dy;
    try {
        dy = std::make_unique<necklace::dynamic>(x, y, eps);
    } catch (const error& e) {
        throw located(e.code(), (f ? f->path + ": " : std::string()) + e.what());
    }
    auto query = [&] {
        auto r = dy->query();
        rep.max_pieces = std::max(rep.max_pieces, dy->max_pieces());
        rep.out.push_back({"value=" + fixed(r.value) + " c=" + fixed(r.c) + " s=" + std::to_string(r.s),
                           {{"value", r.value}, {"raw", r.raw}, {"c", r.c}, {"s", r.s}}});
    };
    if (s.action == "solve") return query();

    replay(s, rep, [&](const text_file& t, const line& l) {
        const std::string& op = l.tok[0];
        if (op == "insert") {
            arity(t, l, 4);
            dy->insert(index(t, l, 1), num(t, l, 2), num(t, l, 3));
        } else if (op == "delete") {
            arity(t, l, 2);
            dy->erase(index(t, l, 1));
        } else if (op == "query") {
            arity(t, l, 1);
            query();
            return true;
        } else {
            return false;
        }
        rep.recomputed.push_back(0); // the state is two run lists; nothing is recomputed
        rep.max_pieces = std::max(rep.max_pieces, dy->max_pieces());
        return true;
    });
}

void print(const settings& s, const report& rep, std::ostream& out) {
    std::size_t total = 0;
    for (auto r : rep.recomputed) total += r;
    if (s.report == "json") {
        json j{{"schema", 1},
               {"problem", s.problem},
               {"action", s.action},
               {"mode", s.mode},
               {"seed", s.seed},
               {"ops", rep.ops},
               {"max_pieces", rep.max_pieces},
               {"recomputed", rep.recomputed},
               {"infeasible", rep.infeasible}};
        json res = json::array();
        for (const auto& r : rep.out) res.push_back(r.obj);
        j["results"] = res;
        if (s.timings) j["elapsed_us"] = rep.elapsed_us;
        out << j.dump() << '\n';
        return;
    }
    for (const auto& r : rep.out) out << r.text << '\n';
    if (s.action == "replay")
        out << "ops=" << rep.ops << " max_pieces=" << rep.max_pieces << " recomputed=" << total << '\n';
    if (s.timings) {
        double sum = 0;
        for (double e : rep.elapsed_us) sum += e;
        out << "elapsed_us=" << fixed(sum) << '\n';
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    settings s;
    CLI::App app{"approximate dynamic programming over piecewise constant functions", "pcdp-cli"};
    app.add_option("problem", s.problem, "knapsack | knapsack-fast | partition | ssl | necklace")
        ->required()
        ->check(CLI::IsMember({"knapsack", "knapsack-fast", "partition", "ssl", "necklace"}));
    app.add_option("action", s.action, "solve | replay")->required()->check(CLI::IsMember({"solve", "replay"}));
    app.add_option("--file", s.file, "instance file");
    app.add_option("--trace", s.trace, "operation trace (replay)");
    app.add_option("--eps", s.eps, "accuracy, overrides the file");
    app.add_option("--k", s.k, "number of parts (partition)");
    app.add_option("--eps-bar", s.eps_bar, "scheduling slack (partition)");
    app.add_option("--mode", s.mode, "exact | approx")->check(CLI::IsMember({"exact", "approx"}));
    app.add_option("--report", s.report, "text | json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", s.seed, "recorded in the report; the solvers are deterministic");
    app.add_option("--threads", s.threads, "OpenMP threads for the partition combine")->check(CLI::PositiveNumber);
    app.add_option("--height", s.height, "height bound for dynamic trees (default n)");
    app.add_option("--max-price", s.max_price, "bound W on the total price (knapsack)");
    app.add_flag("--timings", s.timings, "report elapsed time (breaks byte-identical output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "pcdp-cli: " << e.what() << '\n';
        return 2;
    }

    report rep;
    try {
        if (s.problem == "knapsack" || s.problem == "knapsack-fast")
            run_knapsack(s, rep);
        else if (s.problem == "partition")
            run_partition(s, rep);
        else if (s.problem == "ssl")
            run_ssl(s, rep);
        else
            run_necklace(s, rep);
    } catch (const located& e) {
        err << "pcdp-cli: " << e.what() << '\n';
        return e.code == errc::infeasible ? 3 : 2;
    } catch (const error& e) {
        err << "pcdp-cli: " << e.what() << '\n';
        return e.code() == errc::infeasible ? 3 : 2;
    }
    print(s, rep, out);
    return rep.infeasible ? 3 : 0;
}

} // namespace pcdp::cli
