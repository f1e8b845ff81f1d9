#include "support/fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "propriety_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "out.txt";
    const std::string cmd =
        std::string(PROPRIETY_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    result.output = ss.str();
    return result;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path path = scratch_dir() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

} // namespace

TEST_CASE("check exits 0 on the proper example and names the applied result") {
    const fs::path model = write_file("oneway.json", testsupport::oneway_binomial_json());
    const RunResult r = run_cli("check --model " + model.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("verdict: proper") != std::string::npos);
    CHECK(r.output.find("sufficient.binomial.gamma") != std::string::npos);
}

TEST_CASE("check exits 1 on a rank-deficient design") {
    auto doc = nlohmann::json::parse(testsupport::oneway_binomial_json());
    for (auto& row : doc["X"]) row[1] = row[0];
    const fs::path model = write_file("rank_deficient.json", doc.dump());
    const RunResult r = run_cli("check --model " + model.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("verdict: improper") != std::string::npos);
}

TEST_CASE("check exits 2 in the gap between the condition families") {
    auto doc = nlohmann::json::parse(testsupport::oneway_binomial_json());
    doc["blocks"][0]["a"] = 0.75;
    const fs::path model = write_file("gap.json", doc.dump());
    const RunResult r = run_cli("check --model " + model.string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("check exits above 2 on unreadable or malformed input") {
    CHECK(run_cli("check --model /nonexistent/missing.json").exit_code == 3);
    const fs::path bad = write_file("bad.json", "{ not json");
    CHECK(run_cli("check --model " + bad.string()).exit_code == 3);
    auto doc = nlohmann::json::parse(testsupport::oneway_binomial_json());
    doc["y"][0] = 9; // above m[0] = 3
    const fs::path invalid = write_file("invalid.json", doc.dump());
    CHECK(run_cli("check --model " + invalid.string()).exit_code == 4);
}

TEST_CASE("json reports are byte-identical across runs") {
    const fs::path model = write_file("oneway2.json", testsupport::oneway_binomial_json());
    const RunResult a = run_cli("check --model " + model.string() + " --format json");
    const RunResult b = run_cli("check --model " + model.string() + " --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    const auto doc = nlohmann::json::parse(a.output);
    CHECK(doc.at("verdict") == "proper");
    bool found_witness = false;
    for (const auto& result : doc.at("results"))
        for (const auto& sub : result.at("subconditions"))
            if (sub.contains("witness")) {
                found_witness = true;
                CHECK(sub.at("witness").at(0).is_string());
            }
    CHECK(found_witness);
}

TEST_CASE("csv ingestion matches the json route") {
    write_file("x.csv", "1,2.9\n1,1.7\n1,2.6\n1,3.1\n1,3.8\n1,4.2\n");
    write_file("z.csv", "1,0\n1,0\n1,0\n0,1\n0,1\n0,1\n");
    write_file("y.csv", "0\n4\n2\n4\n3\n5\n");
    write_file("m.csv", "3\n4\n5\n4\n3\n5\n");
    const std::string base = scratch_dir().string();
    const RunResult r = run_cli("check --x " + base + "/x.csv --z " + base +
                                "/z.csv --y " + base + "/y.csv --m " + base +
                                "/m.csv --family binomial --link logit "
                                "--block 2:1.5:0.1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("verdict: proper") != std::string::npos);
}

TEST_CASE("crossover subcommand prints the root") {
    const RunResult r = run_cli("crossover --family poisson --n 30 --beta-hat 0");
    CHECK(r.exit_code == 0);
    const double tau0 = std::stod(r.output);
    CHECK(tau0 == doctest::Approx(26955.06).epsilon(1e-3));
}

TEST_CASE("fit-glm subcommand reports the estimate") {
    const fs::path model = write_file("oneway3.json", testsupport::oneway_binomial_json());
    const RunResult r = run_cli("fit-glm --model " + model.string() + " --format json");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.output);
    CHECK(doc.at("converged").get<bool>());
    CHECK(doc.at("beta_hat").size() == 2);
}

TEST_CASE("jeffreys subcommand emits the density table") {
    const fs::path model = write_file("oneway4.json", testsupport::oneway_binomial_json());
    const RunResult r = run_cli("jeffreys --model " + model.string() +
                                " --tau-grid 0.1:10:5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("# block 1 c =") != std::string::npos);
    CHECK(r.output.find("block,tau,density,envelope") != std::string::npos);
}
