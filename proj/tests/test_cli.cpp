#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cadkit/io.hpp"

using namespace cadkit;

namespace
{

const std::string ex2 = "-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1; -5*x3^4 + x3^3 - 7";

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string> &args, const std::string &input = {})
{
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    std::filesystem::path path;
    TempDir()
    {
        path = std::filesystem::temp_directory_path() / ("cadkit-cli-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

std::vector<Json> records(const std::string &text)
{
    std::istringstream in(text);
    auto all = read_jsonl(in);
    std::erase_if(all, is_header);
    return all;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("gen writes a header and one system per line")
    {
        const auto r = run({"gen", "--name", "REdEn4rCv3", "--count", "5"});
        REQUIRE(r.code == cli::exit_ok);
        std::istringstream in(r.out);
        const auto all = read_jsonl(in);
        REQUIRE(all.size() == 6);
        CHECK(is_header(all[0]));
        CHECK(all[1].at("id") == "REdEn4rCv3-0");
        CHECK(system_from_json(all[3]).size() == 4);
        CHECK(run({"gen", "--name", "REdEn4rCv3", "--count", "5"}).out == r.out);
        CHECK(run({"--seed", "1", "gen", "--name", "REdEn4rCv3", "--count", "5"}).out != r.out);
    }

    TEST_CASE("suggest and features on a literal system")
    {
        const auto s = run({"suggest", "--system", ex2, "--nvars", "3"});
        CHECK(s.code == cli::exit_ok);
        CHECK(s.out == "[x2, x1, x3]\n");
        const auto f = run({"--format", "text", "features", "--kind", "r", "--system", ex2, "--nvars", "3"});
        CHECK(f.code == cli::exit_ok);
        CHECK(f.out.find("(31 19 40)") != std::string::npos);
        const auto all = run({"suggest", "--heuristic", "all", "--system", ex2, "--nvars", "3"});
        CHECK(all.out.find("gmods [x2, x1, x3]") != std::string::npos);
    }

    TEST_CASE("label, split and eval round trip")
    {
        const TempDir dir;
        REQUIRE(run({"--out", dir / "sys.jsonl", "gen", "--name", "REdEn3rCv3", "--count", "20"}).code == 0);
        REQUIRE(run({"--in", dir / "sys.jsonl", "--out", dir / "lab.jsonl", "label"}).code == 0);
        REQUIRE(run({"--in", dir / "lab.jsonl", "--out", dir / "split.jsonl", "split"}).code == 0);
        REQUIRE(run({"--in", dir / "split.jsonl", "--out", dir / "pred.jsonl", "suggest"}).code == 0);
        const auto e = run({"--format", "json", "eval", "--pred", dir / "pred.jsonl", "--labels", dir / "split.jsonl"});
        REQUIRE(e.code == cli::exit_ok);
        const auto summary = Json::parse(e.out);
        CHECK(summary.at("instances") == 20);
        const auto &rep = summary.at("reports").at(0);
        CHECK(rep.at("rel_acc").get<double>() >= rep.at("abs_acc").get<double>());
    }

    TEST_CASE("exit codes")
    {
        CHECK(run({}).code == cli::exit_usage);
        CHECK(run({"gen"}).code == cli::exit_usage);
        CHECK(run({"gen", "--name", "XYZ"}).code == cli::exit_data);
        CHECK(run({"--help"}).code == cli::exit_ok);
        CHECK(run({"label"}, "{not json}\n").code == cli::exit_data);
        CHECK(run({"label", "--backend", "external", "--cmd", "false {input_file}"},
                  R"({"id":"a","nvars":1,"constraints":[{"poly":"x1^2 - 2"}]})"
                  "\n")
                  .code
              == cli::exit_backend);
        CHECK(run({"suggest", "--heuristic", "nope", "--system", "x1", "--nvars", "1"}).code != cli::exit_ok);
    }

    TEST_CASE("tokenize emits a corpus and vocabulary")
    {
        const TempDir dir;
        REQUIRE(run({"--out", dir / "sys.jsonl", "gen", "--name", "REdEn2rCv3", "--count", "10"}).code == 0);
        REQUIRE(run({"--in", dir / "sys.jsonl", "--out", dir / "pre.jsonl", "pretrain-labels"}).code == 0);
        const auto t = run({"--in", dir / "pre.jsonl", "tokenize", "--vocab", dir / "vocab.json"});
        REQUIRE(t.code == cli::exit_ok);
        const auto recs = records(t.out);
        CHECK(recs.size() > 0);
        std::ifstream vf(dir / "vocab.json");
        const auto vocab = vocabulary_from_json(Json::parse(vf));
        CHECK(vocab.size() == 39);
        for (const auto &r : recs) {
            const auto c = corpus_from_json(r);
            CHECK_NOTHROW(vocab.ids(c.input));
            CHECK_NOTHROW(vocab.ids(c.output));
        }
    }
}
