#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tauberkit/cli.hpp"

using namespace tk::cli;
namespace fs = std::filesystem;

namespace {

std::string config_dir() {
    const char* d = std::getenv("TAUBERKIT_CONFIG_DIR");
    return d ? d : "configs";
}

std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string config(const std::string& name) { return read(fs::path(config_dir()) / name); }

const std::string* file(const CommandResult& r, const std::string& name) {
    for (const auto& [n, c] : r.files)
        if (n == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("catalog") {
    CHECK(catalog_entries().size() == 4);
    const auto r = cmd_catalog();
    CHECK(r.exit_code == exit_ok);
    CHECK(r.stdout_text.find("von_mangoldt\n") != std::string::npos);
    CHECK(r.stdout_text.find("{b=0, omega=0, 2Re c=1}") != std::string::npos);
    CHECK(describe(catalog_singular("cos_twisted_von_mangoldt")).find("b=1") != std::string::npos);
    CHECK(r.stdout_text.find("nonzero ordinates b: {1}") != std::string::npos);
    CHECK_THROWS_AS((void)catalog_singular("nope"), ConfigError);
}

TEST_CASE("bound command") {
    const auto r = run_command("bound", config("bound_von_mangoldt.json"), {});
    CHECK(r.exit_code == exit_ok);
    CHECK(r.stdout_text.find("FAIL") == std::string::npos);
    CHECK(r.stdout_text.rfind("x,A_of_x,main_term,rho,T_used,residual_ratio,x0_check,eta,status\n", 0) == 0);

    // x below the validity threshold of every T: reported as infeasible, not as a failure
    const std::string low = R"({"schema_version": 1, "command": "bound", "series": "von_mangoldt",
        "singular": "catalog", "regime": "increasing", "grids": {"x": {"values": [2.5, 1000]},
        "T": {"T_min": 1, "T_max": 10, "per_decade": 4}}})";
    const auto lr = run_command("bound", low, {});
    CHECK(lr.exit_code == exit_ok);
    CHECK(lr.stdout_text.find(",infeasible\n") != std::string::npos);

    RunOptions js;
    js.format = "json";
    const auto jr = run_command("bound", config("bound_von_mangoldt.json"), js);
    CHECK(jr.exit_code == exit_ok);
    CHECK(jr.stdout_text.find("\"rows\"") != std::string::npos);
}

TEST_CASE("bound command is deterministic across thread counts") {
    RunOptions one, four;
    four.threads = 4;
    const auto a = run_command("bound", config("bound_von_mangoldt.json"), one);
    const auto b = run_command("bound", config("bound_von_mangoldt.json"), four);
    CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("eta command") {
    const auto r = run_command("eta", config("eta_synthetic.json"), {});
    CHECK(r.exit_code == exit_ok);
    const auto* po = file(r, "pole_order.txt");
    REQUIRE(po != nullptr);
    CHECK(po->rfind("m_hat=2 ", 0) == 0);
    const std::string analytic = R"({"schema_version": 1, "series": {"synthetic_power": 0}, "singular": "none",
        "T": 1, "grids": {"sigma": {"geometric": {"from": 0.001, "to": 0.5, "count": 8}}}})";
    const auto a = run_command("eta", analytic, {});
    CHECK(a.exit_code == exit_ok);
    CHECK(file(a, "pole_order.txt")->rfind("m_hat=0 ", 0) == 0);
}

TEST_CASE("decrease command") {
    const auto p = run_command("decrease", config("decrease_prop25.json"), {});
    CHECK(p.exit_code == exit_ok);
    CHECK(p.stdout_text.find("classification=slowly") != std::string::npos);
    CHECK(file(p, "witness.csv") != nullptr);
    const auto c = run_command("decrease", config("decrease_cor23.json"), {});
    CHECK(c.stdout_text.find("classification=none_detected") != std::string::npos);
    CHECK(file(c, "profile.csv")->find(",1\n") != std::string::npos);
    const auto n = run_command("decrease", R"({"schema_version": 1, "decrease": {"construction": "nondecreasing"}})", {});
    CHECK(n.stdout_text.find("classification=very_slowly") != std::string::npos);
}

TEST_CASE("lemma command") {
    for (const char* name : {"lemma_ganelius.json", "lemma_lemf_zero.json", "lemma_tenenbaum_pipeline.json"}) {
        const auto r = run_command("lemma", config(name), {});
        CHECK_MESSAGE(r.exit_code == exit_ok, name);
        CHECK(r.stdout_text.find("\"fail\"") == std::string::npos);
        CHECK(r.stdout_text.find(",fail,") == std::string::npos);
    }
}

TEST_CASE("config errors name the field") {
    const auto bad_version = run_command("bound", R"({"schema_version": 2})", {});
    CHECK(bad_version.exit_code == exit_config);
    CHECK(bad_version.stdout_text.find("schema_version") != std::string::npos);
    const auto bad_grid = run_command(
        "bound", R"({"schema_version": 1, "series": "von_mangoldt", "grids": {"x": {"geometric": {"from": 10, "to": 5, "count": 0}}}})", {});
    CHECK(bad_grid.exit_code == exit_config);
    CHECK(bad_grid.stdout_text.find("grids.x.geometric.count") != std::string::npos);
    CHECK(run_command("bound", "not json", {}).exit_code == exit_config);
    CHECK(run_command("frobnicate", "{}", {}).exit_code == exit_config);
    const auto wrong_cmd = run_command("eta", R"({"schema_version": 1, "command": "bound"})", {});
    CHECK(wrong_cmd.exit_code == exit_config);
}

TEST_CASE("executable writes files and maps exit codes") {
    const char* exe = std::getenv("TAUBERCTL");
    if (!exe) return;
    const auto out = fs::temp_directory_path() / "tauberkit_cli_test";
    fs::remove_all(out);
    const std::string cmd = std::string(exe) + " --out " + out.string() + " decrease --config " +
                            (fs::path(config_dir()) / "decrease_prop25.json").string() + " > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "profile.csv"));
    CHECK(fs::exists(out / "witness.csv"));
    CHECK(read(out / "classification.txt") == "classification=slowly\n");
    const std::string bad = std::string(exe) + " bound --config /nonexistent.json > /dev/null 2>&1";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == exit_config);
    fs::remove_all(out);
}
