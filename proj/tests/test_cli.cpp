#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cllr/axioms.hpp"
#include "cllr/cli.hpp"
#include "helpers.hpp"

using namespace cllr;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& input = "") {
    std::ostringstream out, err;
    std::istringstream in(input);
    const int s = cllr::cli::run(args, out, err, in);
    return {s, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cli examples") {
    auto r = invoke({"refines", "a.(bot \\/ 0)", "a.bot [] a.0"});
    CHECK(r.status == 1);
    CHECK(r.out.find("not refined") != std::string::npos);

    r = invoke({"consistent", "bot"});
    CHECK(r.status == 1);
    CHECK(r.out == "inconsistent\n");

    r = invoke({"normalize", "tau.a.0"});
    CHECK(r.status == 0);
    CHECK(r.out == "a.0\n");
}

TEST_CASE("cli subcommands") {
    CHECK(invoke({"parse", "a.0 [] (b.0 [] c.0)"}).out == "a.0 [] (b.0 [] c.0)\n");
    CHECK(invoke({"consistent", "a.0"}).status == 0);
    CHECK(invoke({"refines", "a.0", "a.0 \\/ b.0"}).out == "refined\n");
    CHECK(invoke({"equiv", "tau.a.0", "a.0"}).status == 0);
    CHECK(invoke({"equiv", "a.0", "b.0"}).status == 1);

    auto w = invoke({"refines", "--witness", "--format", "json", "a.0", "b.0"});
    CHECK(w.status == 1);
    auto j = nlohmann::json::parse(w.out);
    CHECK(j["refines"] == false);
    CHECK(j.contains("witness"));

    auto dot = invoke({"lts", "--format", "dot", "a.0 \\/ b.0"});
    CHECK(dot.status == 0);
    CHECK(dot.out.find("digraph") != std::string::npos);
    auto text = invoke({"lts", "a.0"});
    CHECK(text.out.find("states 2") == 0);
    CHECK(nlohmann::json::parse(invoke({"lts", "--format", "json", "a.0"}).out).is_object());

    auto n = invoke({"normalize", "--proof", "a.0 /\\ a.0"});
    CHECK(n.status == 0);
    const auto nl = n.out.find('\n');
    CHECK(n.out.substr(0, nl) == "a.0");
    auto pj = nlohmann::json::parse(n.out.substr(nl + 1));
    CHECK(check_proof(proof_from_json(pj["forward"])));
    CHECK(check_proof(proof_from_json(pj["backward"])));
}

TEST_CASE("cli stdin and files") {
    CHECK(invoke({"parse", "-"}, "a.0 \\/ 0\n").out == "a.0 \\/ 0\n");
    const auto dir = std::filesystem::temp_directory_path();
    const auto term_file = dir / "cllr_cli_term.txt";
    std::ofstream(term_file) << "tau.tau.b.0";
    CHECK(invoke({"normalize", "@" + term_file.string()}).out == "b.0\n");
    CHECK(invoke({"parse", "@/no/such/file"}).status == 2);

    auto prove = invoke({"prove", "a.0", "a.0 \\/ b.0"});
    REQUIRE(prove.status == 0);
    const auto proof_file = dir / "cllr_cli_proof.json";
    std::ofstream(proof_file) << prove.out;
    auto ok = invoke({"check-proof", proof_file.string()});
    CHECK(ok.status == 0);
    CHECK(ok.out == "valid: a.0 <= a.0 \\/ b.0\n");
    CHECK(invoke({"check-proof", "-"}, prove.out).status == 0);

    auto bad = nlohmann::json::parse(prove.out);
    bad["claimRhs"] = "b.0";
    auto rejected = invoke({"check-proof", "-"}, bad.dump());
    CHECK(rejected.status == 1);
    CHECK(rejected.out.find("invalid at") == 0);
    CHECK(invoke({"check-proof", "-"}, "{not json").status == 2);

    auto neg = invoke({"prove", "a.0", "b.0"});
    CHECK(neg.status == 1);
    CHECK(nlohmann::json::parse(neg.out).contains("kind"));
}

TEST_CASE("cli errors and limits") {
    CHECK(invoke({}).status == 2);
    CHECK(invoke({"frobnicate"}).status == 2);
    CHECK(invoke({"parse", "a.(0"}).status == 2);
    CHECK(invoke({"refines", "a.0"}).status == 2);
    CHECK(invoke({"lts", "--state-bound", "0", "a.0"}).status == 2);
    auto big = invoke({"lts", "--state-bound", "2", "a.b.c.0"});
    CHECK(big.status == 3);
    CHECK(big.err.find("resource limit") == 0);
    CHECK(invoke({"fuzz", "--law", "nope"}).status == 2);
    CHECK(invoke({"fuzz", "--alphabet", ",", "--count", "1"}).status == 2);
    CHECK(invoke({"--help"}).status == 0);

    ::setenv(cli::kStateBoundEnv, "2", 1);
    CHECK(invoke({"lts", "a.b.c.0"}).status == 3);
    CHECK(invoke({"lts", "--state-bound", "10", "a.b.c.0"}).status == 0);
    ::setenv(cli::kStateBoundEnv, "x", 1);
    CHECK(invoke({"parse", "0"}).status == 2);
    ::unsetenv(cli::kStateBoundEnv);
}

TEST_CASE("cli fuzz is deterministic") {
    const std::vector<std::string> args{"fuzz", "--count", "12", "--size", "5", "--seed", "7", "--law", "disj-commutative",
                                        "--law", "prefix-merge"};
    auto a = invoke(args);
    auto b = invoke(args);
    auto serial = args;
    serial.push_back("--serial");
    auto c = invoke(serial);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.find("disj-commutative: 12 cases, 0 skipped, 0 violations") != std::string::npos);
    CHECK(invoke({"fuzz", "--list"}).out.find("expansion-below\n") != std::string::npos);
}
