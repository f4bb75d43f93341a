#include "glevy/cli.hpp"
#include "glevy/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>

namespace fs = std::filesystem;
using glevy::config::Json;

namespace {

class Workspace {
public:
    Workspace() {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("glevy_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }

    fs::path write(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }
    fs::path write(const std::string& name, const Json& j) const { return write(name, j.dump()); }
    fs::path path(const std::string& name) const { return dir_ / name; }

private:
    fs::path dir_;
};

struct Result {
    int status = -1;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.status = glevy::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

const Json kIntensityBand = {{"family", {{"rule", "scaledDirac"}, {"location", 1.0}, {"lambda", {{"lo", 1.0}, {"hi", 2.0}, {"count", 3}}}}}};

}  // namespace

TEST(Cli, ValidatePassesWithBoundTwo) {
    Workspace ws;
    const auto cfg = ws.write("v.json", Json{{"uncertainty", kIntensityBand}});
    const Result r = run({"validate", "--config", cfg.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json rec = Json::parse(r.out);
    EXPECT_EQ(rec["command"], "validate");
    EXPECT_EQ(rec["version"], glevy::cli::kVersion);
    EXPECT_EQ(rec["configHash"], glevy::config::hash(Json{{"uncertainty", kIntensityBand}}));
    EXPECT_TRUE(rec["seed"].is_null());
    EXPECT_DOUBLE_EQ(rec["bound"]["value"].get<double>(), 2.0);
    EXPECT_TRUE(rec["passed"].get<bool>());
}

TEST(Cli, ExpectBothMethodsAgree) {
    Workspace ws;
    const Json cfg = {{"uncertainty", kIntensityBand},
                      {"payoff", {{"type", "clampedLinear"}, {"hi", 1.0}}},
                      {"t", 1.0},
                      {"refine", false},
                      {"grid", {{"xMin", -15.0}, {"xMax", 15.0}, {"nx", 1501}, {"dt", 1e-3}}},
                      {"mc", {{"nPaths", 20000}, {"seed", 7}}}};
    const auto file = ws.write("e.json", cfg);
    const Result r = run({"expect", "--config", file.string(), "--method", "both", "--out", ws.path("out").string()});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json rec = Json::parse(r.out);
    const double exact = 1.0 - std::exp(-2.0);
    EXPECT_NEAR(rec["pide"]["value"].get<double>(), exact, 5e-3);
    EXPECT_NEAR(rec["mc"]["value"].get<double>(), exact, 4.0 * rec["mc"]["stdError"].get<double>() + 1e-3);
    EXPECT_TRUE(rec["duality"]["mcWithinBound"].get<bool>());
    EXPECT_EQ(rec["seed"], 7);
    EXPECT_TRUE(fs::exists(ws.path("out") / "expect.json"));
    EXPECT_TRUE(fs::exists(ws.path("out") / "expect.timing.json"));
    EXPECT_EQ(slurp(ws.path("out") / "expect.json"), r.out);
}

TEST(Cli, RecordsAreBitIdentical) {
    Workspace ws;
    const Json cfg = {{"uncertainty", kIntensityBand},
                      {"t", 1.0},
                      {"event", {{"type", "jumpIn"}, {"region", {{"type", "point"}, {"x", 1.0}}}}},
                      {"mc", {{"nPaths", 2000}, {"seed", 11}}}};
    const auto file = ws.write("c.json", cfg);
    const Result a = run({"capacity", "--config", file.string()});
    const Result b = run({"capacity", "--config", file.string()});
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const Result c = run({"capacity", "--config", file.string(), "--seed", "12"});
    EXPECT_NE(a.out, c.out);
    EXPECT_EQ(Json::parse(c.out)["seed"], 12);
}

TEST(Cli, MissingSeedIsAParseError) {
    Workspace ws;
    const Json cfg = {{"uncertainty", kIntensityBand},
                      {"event", {{"type", "jumpIn"}, {"region", {{"type", "point"}, {"x", 1.0}}}}}};
    const Result r = run({"capacity", "--config", ws.write("c.json", cfg).string(), "--out", ws.path("o").string()});
    EXPECT_EQ(r.status, 2);
    EXPECT_FALSE(fs::exists(ws.path("o")));
}

TEST(Cli, MalformedConfigWritesNothing) {
    Workspace ws;
    const auto bad = ws.write("bad.json", std::string("{\"uncertainty\": [1, 2"));
    const Result r = run({"validate", "--config", bad.string(), "--out", ws.path("o").string()});
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(fs::exists(ws.path("o")));

    const auto wrongType = ws.write("w.json", Json{{"uncertainty", {{"triples", 3}}}});
    EXPECT_EQ(run({"validate", "--config", wrongType.string()}).status, 2);
    EXPECT_EQ(run({"validate"}).status, 2);
    EXPECT_EQ(run({"frobnicate"}).status, 2);
    EXPECT_EQ(run({"validate", "--config", ws.path("missing.json").string()}).status, 2);
}

TEST(Cli, AssumptionViolationStillRecords) {
    Workspace ws;
    const Json cfg = {{"uncertainty", kIntensityBand},
                      {"A", {{"type", "point"}, {"x", 2.0}}},
                      {"B", {{"type", "point"}, {"x", 1.0}}},
                      {"t", 1.0},
                      {"mc", {{"nPaths", 100}, {"seed", 1}}}};
    const Result r = run({"erlang-bound", "--config", ws.write("e.json", cfg).string(), "--out",
                          ws.path("o").string(), "--quiet"});
    EXPECT_EQ(r.status, 3);
    EXPECT_TRUE(r.out.empty());
    const Json rec = Json::parse(slurp(ws.path("o") / "erlang-bound.json"));
    EXPECT_EQ(rec["status"], "assumptionViolated");
    EXPECT_TRUE(rec.contains("error"));
}

TEST(Cli, GPoissonAndTransport) {
    Workspace ws;
    const Json g = {{"payoff", {{"type", "linear"}}}, {"lambdaMin", 1.0}, {"lambdaMax", 2.0}, {"t", 1.0}};
    const Result r = run({"gpoisson", "--config", ws.write("g.json", g).string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NEAR(Json::parse(r.out)["value"].get<double>(), 2.0, 1e-6);

    const Json t = {{"targets", Json::array({Json::array({Json::array({1.0, 2.0})})})}};
    const Result s = run({"transport", "--config", ws.write("t.json", t).string(), "--out", ws.path("o").string()});
    ASSERT_EQ(s.status, 0) << s.err;
    EXPECT_EQ(Json::parse(s.out)["maps"][0]["pieces"], 1);
    EXPECT_EQ(slurp(ws.path("o") / "transport.csv"), "measure,piece,lower,upper,target,weight\n0,0,0.5,inf,1,2\n");
}

TEST(Cli, CounterexampleNeedsNoConfig) {
    const Result r = run({"counterexample"});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json rec = Json::parse(r.out);
    EXPECT_DOUBLE_EQ(rec["integralGap"].get<double>(), 1.0);
    EXPECT_LE(rec["skorohodUpper"].get<double>(), 0.02 + 1e-12);
    EXPECT_EQ(rec["qc"]["status"], "notQuasiContinuous");
}

TEST(Cli, PathCommandsResolveRelativeToConfig) {
    Workspace ws;
    ws.write("p.csv", std::string("# horizon=1,dim=1\nkind,time,v0\nsample,0,0\nsample,1,0.5\njump,0.5,1\n"));
    const Json cfg = {{"uncertainty", kIntensityBand}, {"path", "p.csv"}};
    const Result r = run({"decompose", "--config", ws.write("d.json", cfg).string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["maxReconstructionError"], 0.0);
    const Result c = run({"compensate", "--config", ws.path("d.json").string()});
    ASSERT_EQ(c.status, 0) << c.err;
    EXPECT_DOUBLE_EQ(Json::parse(c.out)["terminalValue"].get<double>(), -1.0);
}

TEST(Cli, Help) {
    EXPECT_EQ(run({"--help"}).status, 0);
    EXPECT_EQ(run({"--version"}).status, 0);
}

TEST(Cli, BinaryExitStatus) {
    EXPECT_EQ(std::system(GLEVY_CLI_PATH " counterexample --quiet"), 0);
    const int bad = std::system(GLEVY_CLI_PATH " validate --quiet 2>/dev/null");
    ASSERT_TRUE(WIFEXITED(bad));
    EXPECT_EQ(WEXITSTATUS(bad), 2);
}
