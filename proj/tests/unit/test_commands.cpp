#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "seapass/commands.hpp"

using namespace seapass;
namespace fs = std::filesystem;

namespace {

AnalysisConfig nominal_null() {
    AnalysisConfig c;
    c.plant = {0.2, 3.0, 250.0};
    c.gains = {20.0, 10.0, 5.0, 5.0};
    return c;
}

AnalysisConfig nominal_spring() {
    AnalysisConfig c = nominal_null();
    c.gains = {20.0, 100.0, 30.0, 5.0};
    c.target = RenderTarget::spring(50.0);
    return c;
}

class Scratch : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("seapass_cmd_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    int run(const std::string& args) {
        const std::string cmd = std::string(SEAPASS_CLI_PATH) + " " + args + " > " + (dir_ / "stdout").string() +
                                " 2> " + (dir_ / "stderr").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Check, NominalNullIsPassive) {
    std::ostringstream out;
    EXPECT_EQ(cmd_check(nominal_null(), OutputFormat::Table, out), kExitOk);
    const std::string s = out.str();
    EXPECT_EQ(s.rfind("passive; binding: damping bound, margin 70.0%", 0), 0u) << s;
    EXPECT_NE(s.find("margin 98.7%"), std::string::npos) << s;
}

TEST(Check, DampingViolationReportsWitness) {
    AnalysisConfig c = nominal_null();
    c.gains.torque_i = 80.0;
    std::ostringstream out;
    EXPECT_EQ(cmd_check(c, OutputFormat::Json, out), kExitNotPassive);
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["verdict"], "not passive");
    EXPECT_EQ(j["closed_form"]["failed_conditions"][0]["id"], "damping_bound");
    ASSERT_TRUE(j["witness_frequency"].is_number());
    const double w = j["witness_frequency"];
    EXPECT_LT(build_null_impedance(c.plant, c.gains)({0.0, w}).real(), 0.0);
}

TEST(Check, BoundaryIsMarginal) {
    AnalysisConfig c = nominal_null();
    c.plant.damping = 10.0;
    std::ostringstream out;
    EXPECT_EQ(cmd_check(c, OutputFormat::Table, out), kExitMarginal);
}

TEST(Bounds, TableAndJson) {
    std::ostringstream table;
    EXPECT_EQ(cmd_bounds(nominal_spring(), OutputFormat::Table, table), kExitOk);
    EXPECT_NE(table.str().find("Kd_max: 69.51560317"), std::string::npos) << table.str();
    EXPECT_NE(table.str().find("J_max (spring, Kd = 50): 4.460887097"), std::string::npos) << table.str();

    AnalysisConfig c = nominal_null();
    c.gains.torque_i = 0.0;
    std::ostringstream json;
    cmd_bounds(c, OutputFormat::Json, json);
    EXPECT_EQ(nlohmann::json::parse(json.str())["b_max"], "unbounded");
    std::ostringstream t2;
    cmd_bounds(c, OutputFormat::Table, t2);
    EXPECT_NE(t2.str().find("b_max: unbounded"), std::string::npos);
}

TEST(Compare, NominalVerdicts) {
    std::ostringstream out;
    EXPECT_EQ(cmd_compare(nominal_null(), OutputFormat::Json, out), kExitOk);
    const auto j = nlohmann::json::parse(out.str())["guidelines"];
    EXPECT_FALSE(j[0]["passes"].get<bool>());
    EXPECT_TRUE(j[1]["passes"].get<bool>());
    EXPECT_TRUE(j[2]["passes"].get<bool>());
}

TEST_F(Scratch, BodeCsvFormatAndDeterminism) {
    AnalysisConfig c = nominal_null();
    c.sweep = {1e-2, 1e4, 50};
    const auto a = dir_ / "a.csv";
    const auto b = dir_ / "b.csv";
    std::ostringstream log;
    ASSERT_EQ(cmd_bode(c, a.string(), log, log), kExitOk);
    ASSERT_EQ(cmd_bode(c, b.string(), log, log), kExitOk);
    const std::string text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_EQ(text.find('\r'), std::string::npos);
    const auto rows = csv_rows(text);
    ASSERT_EQ(rows[0], (std::vector<std::string>{"w_rad_s", "magnitude_db", "phase_deg", "regime"}));
    std::set<std::string> regimes;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_EQ(rows[i].size(), 4u);
        regimes.insert(rows[i][3]);
        // 17 significant digits survive a text round trip.
        EXPECT_EQ(detail::num(std::stod(rows[i][0]), "%.17g"), rows[i][0]);
    }
    EXPECT_EQ(regimes, (std::set<std::string>{"inertial", "damping", "spring"}));
    EXPECT_EQ(cmd_bode(c, (dir_ / "missing" / "x.csv").string(), log, log), kExitUsage);
}

TEST_F(Scratch, BodeDifferentiatorOverride) {
    AnalysisConfig c = nominal_null();
    c.transfer_function = TransferOverride{{0.0, 1.0}, {1.0}};
    std::ostringstream out, err;
    ASSERT_EQ(cmd_bode(c, "", out, err), kExitOk);
    const auto rows = csv_rows(out.str());
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][2]), 90.0, 1e-12);
}

TEST_F(Scratch, ReproduceScenarios) {
    std::ostringstream out;
    const auto tables = run_scenario("bounds-tables", dir_);
    EXPECT_TRUE(tables.all_passed());
    EXPECT_TRUE(fs::exists(dir_ / "bounds_tables.json"));

    const auto sweeps = run_scenario("null-gain-sweeps", dir_);
    EXPECT_EQ(sweeps.files.size(), 16u);
    EXPECT_TRUE(sweeps.all_passed());
    const auto spring = run_scenario("spring-gain-sweeps", dir_);
    EXPECT_EQ(spring.files.size(), 20u);
    EXPECT_TRUE(spring.all_passed());

    const auto damping = run_scenario("damping-counterexample", dir_);
    EXPECT_EQ(damping.files.size(), 2u);
    EXPECT_TRUE(fs::exists(dir_ / "controller1.csv"));

    try {
        (void)run_scenario("nope", dir_);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownScenario);
    }
}

TEST_F(Scratch, CliExitCodes) {
    const std::string good = write("good.json", emit_config(nominal_null()));
    AnalysisConfig bad_gains = nominal_null();
    bad_gains.gains.torque_i = 80.0;
    const std::string bad = write("bad.json", emit_config(bad_gains));
    AnalysisConfig edge = nominal_null();
    edge.plant.damping = 10.0;
    const std::string marginal = write("edge.json", emit_config(edge));
    std::string text = emit_config(nominal_null());
    text.replace(text.find("\"stiffness\": 250.0"), 18, "\"stiffness\": -1.0");
    const std::string negative_k = write("negk.json", text);

    EXPECT_EQ(run("check --config " + good), 0);
    EXPECT_EQ(run("check --config " + bad), 2);
    EXPECT_EQ(run("check --config " + marginal), 3);
    EXPECT_EQ(run("check --config " + negative_k), 1);
    EXPECT_NE(slurp(dir_ / "stderr").find("plant.stiffness"), std::string::npos);
    EXPECT_EQ(run("check"), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("check --config " + good + " --format xml"), 1);
    EXPECT_EQ(run("bounds --config " + good + " --format json"), 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "stdout"))["b_max"], 10.0);
    EXPECT_EQ(run("compare --config " + good), 0);
    EXPECT_EQ(run("tune --config " + good), 0);
    EXPECT_EQ(run("bode --config " + good + " --output " + (dir_ / "z.csv").string()), 0);
    EXPECT_TRUE(fs::exists(dir_ / "z.csv"));
    EXPECT_EQ(run("reproduce --scenario bounds-tables --output " + (dir_ / "out").string()), 0);
    EXPECT_EQ(run("reproduce --scenario unknown --output " + (dir_ / "out").string()), 1);
}
