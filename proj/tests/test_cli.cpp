#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gnskit/bounds.hpp"
#include "gnskit/cli.hpp"
#include "gnskit/kvdoc.hpp"

using namespace gnskit;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(GNSKIT_FIXTURES) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "gnskit-cli-test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

KvNode machine(const Run& r) {
    REQUIRE_MESSAGE(r.code == kExitOk, r.err);
    return parse_kv(r.out);
}

}  // namespace

TEST_CASE("bounds") {
    const Run r = run({"bounds", fixture("parallel-links.mun"), "--out", "machine"});
    const KvNode doc = machine(r);
    CHECK(doc.at("m").value == "4");
    CHECK(doc.at("mais").value == "2");
    CHECK(doc.at("rcp").value == "2");
    CHECK(doc.at("chain").value == "ok");
    CHECK(parse_report(r.out).chain_holds());

    const Run human = run({"bounds", fixture("parallel-links.mun")});
    CHECK(human.code == kExitOk);
    CHECK(human.out.find("chain holds") != std::string::npos);

    const KvNode two = machine(run({"bounds", fixture("single-path.mun"), "--q", "1", "2", "--out", "machine"}));
    CHECK(two.at("tensor_bounds").all("bound").size() == 2);

    CHECK(run({"bounds", fixture("malformed.mun")}).code == kExitInput);
    CHECK(run({"bounds", fixture("does-not-exist.mun")}).code == kExitInput);
    CHECK(run({"bounds", fixture("cycle3.dg")}).code == kExitInput);
    CHECK(run({"bounds", fixture("parallel-links.mun"), "--field", "4"}).code == kExitInput);
}

TEST_CASE("bounds exits 3 and names the skipped component") {
    ::setenv("GNSKIT_CAP_OVERRIDES", "product_vertices=10", 1);
    const Run r = run({"bounds", fixture("parallel-links.mun"), "--q", "1", "2"});
    ::unsetenv("GNSKIT_CAP_OVERRIDES");
    CHECK(r.code == kExitCapacity);
    CHECK(r.err.find("tensor_q2") != std::string::npos);
}

TEST_CASE("gnscut") {
    CHECK(machine(run({"gnscut", fixture("single-path.mun"), "--tilde", "--exact", "--out", "machine"})).at("size").value == "1");
    CHECK(machine(run({"gnscut", fixture("parallel-links.mun"), "--tilde", "--exact", "--out", "machine"})).at("size").value ==
          "2");
    for (const char* f : {"parallel-links.mun", "single-path.mun", "butterfly.mun", "crossed.mun"}) {
        const KvNode doc = machine(run({"gnscut", fixture(f), "--approx", "--out", "machine"}));
        CHECK(doc.at("verified").value == "yes");
        CHECK(doc.at("network").value == "tilde");
    }
    ::setenv("GNSKIT_CAP_OVERRIDES", "gns_cuttable=2", 1);
    const int capped = run({"gnscut", fixture("butterfly.mun"), "--exact"}).code;
    ::unsetenv("GNSKIT_CAP_OVERRIDES");
    CHECK(capped == kExitCapacity);
    CHECK(run({"gnscut", fixture("butterfly.mun"), "--exact", "--approx"}).code == kExitInput);
}

TEST_CASE("convert") {
    const Run dg = run({"convert", fixture("parallel-links.mun"), "--to", "dg"});
    REQUIRE(dg.code == kExitOk);
    const Digraph g = parse_digraph(dg.out);
    CHECK(g.order() == 4);
    CHECK(g == to_index_graph(parse_network(slurp(fixture("parallel-links.mun")))).graph);

    const auto path = scratch("tilde.mun");
    CHECK(run({"convert", fixture("butterfly.mun"), "--to", "mun", "--tilde", "-o", path.string()}).code == kExitOk);
    const MUNetwork tilde = parse_network(slurp(path));
    CHECK(tilde.pair_count() == 2);
    CHECK(tilde.link_count() == parse_network(slurp(fixture("butterfly.mun"))).link_count() + 2);
}

TEST_CASE("cyclepack, minrank and code") {
    const KvNode pack = machine(run({"cyclepack", fixture("butterfly.mun"), "--metric", "--out", "machine"}));
    CHECK(pack.at("rcp").value == "3/2");
    CHECK(pack.at("metric").at("equals_rcp").value == "yes");
    CHECK(machine(run({"cyclepack", fixture("cycle3.dg"), "--metric", "--out", "machine"})).at("metric").at("objective").value ==
          "1");

    CHECK(machine(run({"minrank", fixture("cycle3.dg"), "--field", "2", "--out", "machine"})).at("rank").value == "2");
    CHECK(machine(run({"minrank", fixture("cycle3.dg"), "--blowup", "2", "--out", "machine"})).at("normalized").value == "2");
    CHECK(run({"minrank", fixture("cycle3.dg"), "--field", "3", "--blowup", "2"}).code == kExitCapacity);

    const auto code_path = scratch("c3.code");
    const Run code = run({"code", fixture("cycle3.dg"), "-o", code_path.string(), "--out", "machine"});
    CHECK(machine(code).at("rate").value == "2");
    const Run verified = run({"verify", "--graph", fixture("cycle3.dg"), "--code", code_path.string(), "--out", "machine"});
    CHECK(machine(verified).at("decodable").value == "yes");

    const auto bad_path = scratch("bad.code");
    std::ofstream(bad_path) << "code p=2 t=1 n=3 r=1\nrow 1 1 0\n";
    const Run refused = run({"verify", "--graph", fixture("cycle3.dg"), "--code", bad_path.string(), "--out", "machine"});
    CHECK(refused.code == kExitInput);
    CHECK(parse_kv(refused.out).at("failing_users").value == "1 2");
}

TEST_CASE("gen") {
    const Run ls = run({"gen", "lubetzky-stav", "--r", "4", "--s", "2", "--p", "2", "--b", "1"});
    REQUIRE(ls.code == kExitOk);
    CHECK(parse_digraph(ls.out).order() == 6);
    CHECK(ls.out.rfind("# lubetzky-stav r=4 s=2 p=2 b=1", 0) == 0);

    const Run d1 = run({"gen", "digraph", "--n", "8", "--prob", "0.5", "--seed", "7"});
    CHECK(d1.out == run({"gen", "digraph", "--n", "8", "--prob", "0.5", "--seed", "7"}).out);
    CHECK(d1.out.find("seed=7") != std::string::npos);

    const Run net = run({"gen", "dag-network", "--nodes", "6", "--pairs", "1", "--seed", "3"});
    REQUIRE(net.code == kExitOk);
    CHECK(parse_network(net.out).pair_count() == 1);

    const MUNetwork side = parse_network(run({"gen", "side-info-network", fixture("cycle3.dg")}).out);
    CHECK(side.node_count() == 8);

    CHECK(run({"gen", "lubetzky-stav", "--r", "2", "--s", "3", "--p", "2", "--b", "1"}).code == kExitInput);
    CHECK(run({"gen"}).code == kExitInput);
}

TEST_CASE("verify certificates and reports") {
    CHECK(machine(run({"verify", "--network", fixture("butterfly.mun"), "--cut", "2", "8", "--tilde", "--out", "machine"}))
              .at("accepted")
              .value == "yes");
    const Run refused = run({"verify", "--network", fixture("single-path.mun"), "--cut", "--out", "machine"});
    CHECK(refused.code == kExitInput);
    CHECK(parse_kv(refused.out).at("witness").value == "0");
    CHECK(run({"verify", "--network", fixture("butterfly.mun"), "--fvs", "0"}).code == kExitInput);
    CHECK(run({"verify", "--network", fixture("butterfly.mun"), "--fes", "2", "8"}).code == kExitOk);
    CHECK(run({"verify", "--network", fixture("butterfly.mun")}).code == kExitInput);
    CHECK(run({"verify"}).code == kExitInput);

    const auto report = scratch("report.txt");
    std::ofstream(report) << run({"bounds", fixture("butterfly.mun"), "--q", "1", "2", "--exact-gns", "--out", "machine"}).out;
    CHECK(machine(run({"verify", "--report", report.string(), "--out", "machine"})).at("roundtrip").value == "exact");
}

TEST_CASE("usage") {
    CHECK(run({}).code == kExitInput);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"bounds", "--help"}).out.find("--exact-gns") != std::string::npos);
    CHECK(run({"frobnicate"}).code == kExitInput);
    CHECK(run({"bounds", fixture("parallel-links.mun"), "--out", "xml"}).code == kExitInput);
}
