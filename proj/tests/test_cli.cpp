#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "pcdp/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct outcome {
    int code;
    std::string out;
    std::string err;
};

outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "pcdp-cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = pcdp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write(const std::string& name, const std::string& body) {
    auto dir = fs::temp_directory_path() / "pcdp_cli_test";
    fs::create_directories(dir);
    auto p = (dir / name).string();
    std::ofstream(p) << body;
    return p;
}

std::vector<std::string> lines_with(const std::string& text, const std::string& prefix) {
    std::vector<std::string> r;
    std::istringstream ss(text);
    for (std::string l; std::getline(ss, l);)
        if (l.rfind(prefix, 0) == 0) r.push_back(l);
    return r;
}

} // namespace

TEST_CASE("knapsack solve on three items") {
    auto f = write("kn.txt", "3 3 0.01\n# p w\n2 1\n3 2\n4 3\n");
    auto r = call({"knapsack", "solve", "--file", f});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("value=5.0", 0) == 0);
    double v = std::stod(r.out.substr(6));
    CHECK(v >= 5);
    CHECK(v <= 5.05);
    CHECK(r.out.find("solution=0,1") != std::string::npos);

    auto fast = call({"knapsack-fast", "solve", "--file", f, "--report", "json"});
    REQUIRE(fast.code == 0);
    auto j = nlohmann::json::parse(fast.out);
    CHECK(j["schema"] == 1);
    CHECK(j["results"][0]["value"].get<double>() >= 5);
}

TEST_CASE("input errors exit with 2") {
    auto missing = call({"knapsack", "solve", "--file", "/nonexistent/a.txt"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("cannot open") != std::string::npos);

    auto f = write("bad.txt", "2 3 0.1\n1 1\n1 x\n");
    auto r = call({"knapsack", "solve", "--file", f});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.txt:3") != std::string::npos);

    CHECK(call({"knapsack", "fly"}).code == 2);
    CHECK(call({"necklace", "solve", "--report", "yaml"}).code == 2);
    CHECK(call({"knapsack", "solve", "--file", write("kn2.txt", "0 1 0.1\n"), "--mode", "exact"}).code == 2);

    auto t = write("t_bad.txt", "query\nspin 1\n");
    auto u = call({"necklace", "replay", "--trace", t});
    CHECK(u.code == 2);
    CHECK(u.err.find("t_bad.txt:2") != std::string::npos);

    // a rejected operation carries the module error and the line
    auto uns = write("t_unsort.txt", "insert 0 0.5 0.5\ninsert 0 0.9 0.1\n");
    auto w = call({"necklace", "replay", "--trace", uns});
    CHECK(w.code == 2);
    CHECK(w.err.find("t_unsort.txt:2: WouldUnsort") != std::string::npos);

    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("necklace replay prints one value line per query") {
    auto t = write("neck.txt", "query\ninsert 0 0.2 0.7\nquery\ninsert 1 0.5 0.9\n# comment\nquery\ndelete 0\nquery\n");
    auto r = call({"necklace", "replay", "--trace", t, "--eps", "0.02"});
    REQUIRE(r.code == 0);
    auto vals = lines_with(r.out, "value=");
    REQUIRE(vals.size() == 4);
    CHECK(vals[0] == "value=0.000000 c=0.000000 s=0");
    CHECK(vals[1].rfind("value=0.010000 ", 0) == 0);

    auto b = write("beads.txt", "2 0.02\n0.1 0.3\n0.6 0.8\n");
    auto s = call({"necklace", "solve", "--file", b});
    REQUIRE(s.code == 0);
    CHECK(s.out == "value=0.010000 c=0.200000 s=0\n");
}

TEST_CASE("partition and ssl") {
    auto p = write("tree.txt", "4 2 0.5 0.1\n0 1 1\n0 2 1\n2 3 1\n");
    auto r = call({"partition", "solve", "--file", p, "--mode", "exact"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("value=1.000000 quality=", 0) == 0);

    auto t = write("tree_t.txt", "cut 0 2\nquery\nlink 1 2 1\nquery\n");
    auto d = call({"partition", "replay", "--file", p, "--trace", t});
    REQUIRE(d.code == 0);
    auto vals = lines_with(d.out, "value=");
    REQUIRE(vals.size() == 2);
    CHECK(vals[0].rfind("value=0.000000", 0) == 0);

    auto s = write("ssl.txt", "3 0.1\n0 1 1\n0 2 1\n0 1 1\n1 1 0\n2 1 0\n");
    auto q = call({"ssl", "solve", "--file", s});
    REQUIRE(q.code == 0);
    CHECK(q.out == "value=1 sources=0\n");

    auto hard = write("ssl_inf.txt", "3 0.1\n0 1 1\n0 2 1\n0 1 1\n1 2 0\n2 1 0\n");
    CHECK(call({"ssl", "solve", "--file", hard}).code == 3);

    auto st = write("ssl_t.txt", "remove 0 2\nquery\nsetdemand 2 0\nquery\n");
    auto rp = call({"ssl", "replay", "--file", s, "--trace", st});
    CHECK(rp.code == 3);
    CHECK(lines_with(rp.out, "infeasible").size() == 1);
    CHECK(lines_with(rp.out, "value=").size() == 1);
}

TEST_CASE("replay is deterministic") {
    auto f = write("kn_det.txt", "4 10 0.1\n3 4\n5 6\n2 1\n7 9\n");
    auto t = write("kn_det_t.txt", "insert 4 2\nquery\ndelete 1\ninsert 6 5\nquery\ndelete 0\nquery\n");
    for (const char* rep : {"text", "json"}) {
        auto a = call({"knapsack", "replay", "--file", f, "--trace", t, "--report", rep, "--seed", "7"});
        auto b = call({"knapsack", "replay", "--file", f, "--trace", t, "--report", rep, "--seed", "7"});
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }
    auto j = nlohmann::json::parse(
        call({"knapsack-fast", "replay", "--file", f, "--trace", t, "--report", "json"}).out);
    CHECK(j["ops"] == 7);
    CHECK(j["recomputed"].size() == 4);
    CHECK(j["results"].size() == 3);
}
