#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ckn/cli.hpp"
#include "json.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = ckn::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("ckn_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        royal_ = ckn_test::fixture_path("royal_elephant.ckn");
        tourist_ = ckn_test::fixture_path("tourist.ckn");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    std::string snapshot(const std::string& src) {
        const auto snap = path("kb.json");
        EXPECT_EQ(run({"build", src, "--out", snap}).code, 0);
        return snap;
    }

    fs::path dir_;
    std::string royal_, tourist_;
};

}  // namespace

TEST_F(Cli, BuildWritesSnapshotAndReport) {
    const auto snap = path("re.json");
    auto r = run({"build", royal_, "--out", snap});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("0 errors"), std::string::npos);
    EXPECT_NE(r.out.find("override: value of Color # Royal_Elephant # Thailand"), std::string::npos);
    EXPECT_TRUE(fs::exists(snap));
}

TEST_F(Cli, BuildUsesEnvironmentSnapshotPath) {
    const auto snap = path("env.json");
    ::setenv(ckn::cli::kSnapshotEnv, snap.c_str(), 1);
    auto b = run({"build", royal_});
    auto q = run({"query", "q1", "--cat", "ako", "Royal_Elephant", "Animal"});
    ::unsetenv(ckn::cli::kSnapshotEnv);
    EXPECT_EQ(b.code, 0);
    EXPECT_TRUE(fs::exists(snap));
    EXPECT_EQ(q.code, 0) << q.err;
    EXPECT_EQ(q.out, "true\n");
}

TEST_F(Cli, CompileErrorsExitTwo) {
    auto bad = write("bad.ckn", "sc A A;\n");
    auto r = run({"check", bad});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("1 errors"), std::string::npos);
    EXPECT_NE(r.err.find("irreflexivity"), std::string::npos);
}

TEST_F(Cli, ParseErrorsExitTwoWithLocation) {
    auto bad = write("bad.ckn", "ako A B;\nako A ;\n");
    auto r = run({"check", bad});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bad.ckn:2:7: error"), std::string::npos);
}

TEST_F(Cli, MissingFileExitsOne) {
    EXPECT_EQ(run({"check", path("absent.ckn")}).code, 1);
    EXPECT_EQ(run({"query", "--snapshot", path("absent.json"), "q1", "--cat", "ako", "A", "B"}).code, 1);
}

TEST_F(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"query", "--kb", royal_, "q1", "Elephant"}).code, 1);
    EXPECT_EQ(run({"query", "--kb", royal_, "q1", "--cat", "isa", "Elephant", "Animal"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, Q3TextOutput) {
    const auto snap = snapshot(royal_);
    auto r = run({"query", "--snapshot", snap, "q3", "Presence#King#Thailand", "Presence#Mouse#Thailand"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("net: a\npaths: 2\n", 0), 0u) << r.out;
}

TEST_F(Cli, Q3JsonOutput) {
    auto r = run({"query", "--kb", royal_, "q3", "--format", "json", "Presence#Human", "Presence#Mouse"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["version"], 1);
    EXPECT_EQ(j["net"], "-");
    EXPECT_EQ(j["paths"].size(), 1u);
}

TEST_F(Cli, QueryErrors) {
    const auto snap = snapshot(royal_);
    EXPECT_EQ(run({"query", "--snapshot", snap, "q3", "Presence#Human", "Presence#Human"}).code, 1);
    EXPECT_EQ(run({"query", "--snapshot", snap, "q3", "Presence#Unicorn", "Presence#Human"}).code, 3);
    EXPECT_EQ(run({"query", "--snapshot", snap, "q1", "--cat", "ako", "Bad#", "Animal"}).code, 3);
}

TEST_F(Cli, Q2AndQ4) {
    auto r = run({"query", "--kb", royal_, "q2", "--cat", "ako", "--ancestors", "Royal_Elephant"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "Animal\nElephant\n");
    r = run({"query", "--kb", tourist_, "q4", "--affected-by", "--sign", "+", "Stolen_Camera#Tourist#Thailand"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "+\tBring_Camera # Tourist # Thailand\n+\tPresence # Human # Thailand\n");
}

TEST_F(Cli, FormulateAndExport) {
    const auto model = path("m.json");
    const auto dot = path("m.dot");
    auto r = run({"formulate", "--kb", tourist_, "--decision", "Bring_Camera#Tourist", "--value", "Utility#Tourist",
                  "--context", "Thailand", "--out", model, "--dot", dot});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("decision 1"), std::string::npos);
    EXPECT_NE(r.out.find("value 1"), std::string::npos);
    auto e = run({"export", "--model", model, "--format", "dot"});
    EXPECT_EQ(e.code, 0);
    std::ifstream in(dot);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(e.out, ss.str());
    auto j = run({"export", "--model", model, "--format", "json"});
    std::ifstream min(model);
    std::stringstream ms;
    ms << min.rdbuf();
    EXPECT_EQ(j.out, ms.str());
}

TEST_F(Cli, FormulateErrors) {
    EXPECT_EQ(run({"formulate", "--kb", tourist_, "--decision", "Bring_Camera#Tourist", "--value", "Nowhere",
                   "--context", "Thailand"})
                  .code,
              1);
    EXPECT_EQ(run({"formulate", "--kb", tourist_, "--decision", "Utility#Tourist", "--value", "Bring_Camera#Tourist",
                   "--context", "Thailand"})
                  .code,
              3);
    EXPECT_EQ(run({"export", "--model", path("none.json")}).code, 1);
}

TEST_F(Cli, ReplMatchesBatch) {
    const auto snap = snapshot(royal_);
    const std::vector<std::vector<std::string>> queries = {
        {"q1", "--cat", "ako", "Teeth#Elephant", "Organ#Animal"},
        {"q2", "--cat", "ako", "--descendants", "Elephant"},
        {"q3", "Presence#Human", "Presence#Mouse"},
        {"q3", "--format", "json", "Presence#King#Thailand", "Presence#Mouse#Thailand"},
        {"q4", "--sign", "any", "Presence#Human"},
    };
    std::string script, expected;
    for (const auto& q : queries) {
        std::vector<std::string> args{"query", "--snapshot", snap};
        args.insert(args.end(), q.begin(), q.end());
        auto b = run(args);
        ASSERT_EQ(b.code, 0) << b.err;
        expected += b.out;
        for (const auto& w : q) script += "'" + w + "' ";
        script += "\n";
    }
    script += ":quit\nq3 never reached\n";
    auto r = run({"repl", "--snapshot", snap}, script);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, expected);
}

TEST_F(Cli, ReplKeepsGoingAfterErrors) {
    auto r = run({"repl", "--kb", royal_}, "q3 Presence#Unicorn Presence#Human\nbogus\nq1 --cat ako King Human\n");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "true\n");
    EXPECT_NE(r.err.find("unknown concept"), std::string::npos);
}

TEST(CliWords, ShellLikeSplitting) {
    using ckn::cli::detail::split_words;
    EXPECT_EQ(split_words("q1 --cat ako  'King of Thailand'#X \"a b\""),
              (std::vector<std::string>{"q1", "--cat", "ako", "King of Thailand#X", "a b"}));
    EXPECT_EQ(split_words("a\\ b ''"), (std::vector<std::string>{"a b", ""}));
}
