#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"
#include "mawarith/archive.hpp"
#include "mawarith/corpus_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mawarith");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = mawarith::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

struct Workdir {
    fs::path path = fs::temp_directory_path() / ("mawarith_cli_" + std::to_string(::getpid()));
    Workdir() { fs::create_directories(path); }
    ~Workdir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("command line end to end") {
    Workdir w;
    const std::string corpus = w / "corpus.jsonl", queries = w / "q.jsonl", gold = w / "gold.jsonl";
    auto r = cli({"generate", "--out", corpus, "--count", "1200", "--seed", "3", "--mix", "simple=0.5,awl=0.2,radd=0.3",
                  "--queries", "40", "--queries-out", queries, "--gold-out", gold});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("wrote 1200 documents") != std::string::npos);

    r = cli({"score", "--gold", corpus, "--pred", corpus});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("MIR-E mean: 1.0000", 0) == 0);

    r = cli({"index", "--corpus", corpus, "--out", w / "idx.bin"});
    CHECK(r.status == 0);

    r = cli({"retrieve", "--index", w / "idx.bin", "--k", "3", "--query", "زوج وابن"});
    CHECK(r.status == 0);
    const auto lines = std::count(r.out.begin(), r.out.end(), '\n');
    CHECK(lines >= 1);
    CHECK(lines <= 3);

    const std::string preds = w / "preds.jsonl";
    r = cli({"answer", "--corpus", corpus, "--index", w / "idx.bin", "--queries", queries, "--out", preds, "--mock",
             "--parallelism", "3"});
    REQUIRE(r.status == 0);
    const std::string first = mawarith::read_file(preds);
    REQUIRE(cli({"answer", "--corpus", corpus, "--queries", queries, "--out", preds, "--mock"}).status == 0);
    CHECK(mawarith::read_file(preds) == first);

    r = cli({"score", "--gold", gold, "--pred", preds, "--report", w / "report.json"});
    CHECK(r.status == 0);
    CHECK(fs::exists(w / "report.json"));

    r = cli({"validate", "--in", preds, "--out", w / "checks.jsonl", "--strict"});
    CHECK(r.status == 0);
    CHECK(r.out.find("40 pass, 0 fail") != std::string::npos);

    r = cli({"package", "--pred", preds, "--queries", queries, "--out", w / "sub.zip"});
    CHECK(r.status == 0);
    const std::string zip1 = mawarith::read_file(w / "sub.zip");
    REQUIRE(cli({"package", "--pred", preds, "--queries", queries, "--out", w / "sub.zip"}).status == 0);
    CHECK(mawarith::read_file(w / "sub.zip") == zip1);
    CHECK(zip1.find("tasil_stage") == std::string::npos);

    r = cli({"ablate", "--corpus", corpus, "--sample", "10", "--report", w / "ablation.json"});
    CHECK(r.status == 0);
    CHECK(r.out.find("all") != std::string::npos);
}

TEST_CASE("command line errors") {
    Workdir w;
    CHECK(cli({}).status == 2);
    CHECK(cli({"frobnicate"}).status == 2);
    CHECK(cli({"score", "--no-such-flag"}).status == 2);
    CHECK(cli({"answer", "--corpus"}).status == 2);
    CHECK(cli({"--help"}).status == 0);

    auto r = cli({"score", "--config", w / "missing.conf"});
    CHECK(r.status != 0);
    CHECK(r.err.find("missing.conf") != std::string::npos);

    r = cli({"score", "--gold", w / "nope.jsonl", "--pred", w / "nope.jsonl"});
    CHECK(r.status == 1);
    CHECK(r.err.find("nope.jsonl") != std::string::npos);

    r = cli({"score", "--pred", w / "p.jsonl"});
    CHECK(r.status == 2);
    CHECK(r.err.find("--gold") != std::string::npos);

    std::ofstream(w / "q.jsonl") << R"({"id": "a", "question": "زوج"})" << '\n';
    std::ofstream(w / "c.jsonl") << "";
    r = cli({"answer", "--corpus", w / "c.jsonl", "--queries", w / "q.jsonl", "--out", w / "p.jsonl"});
    CHECK(r.status == 2);
    CHECK(r.err.find("--mock") != std::string::npos);
}
