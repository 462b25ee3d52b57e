#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = FOCKLAB_CLI_PATH;

int run(const std::string& args, const std::string& log = "/dev/null") {
    std::string cmd = cli + " " + args + " > " + log + " 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& leaf) {
    auto p = fs::temp_directory_path() / ("focklab_cli_test_" + leaf);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_config(const fs::path& p, const std::string& body) {
    std::ofstream(p) << body;
}

}  // namespace

TEST_CASE("check listing and passing runs exit cleanly") {
    auto dir = scratch("list");
    CHECK(run("--list-checks", (dir / "list.txt").string()) == 0);
    auto listing = slurp(dir / "list.txt");
    for (const char* name : {"algebra", "spectrum", "fgr", "wobs", "deift-simon", "sfunc"})
        CHECK(listing.find(name) != std::string::npos);

    CHECK(run("sfunc", (dir / "sfunc.txt").string()) == 0);
    auto summary = slurp(dir / "sfunc.txt");
    CHECK(summary.find("all checks passed") != std::string::npos);
    CHECK(summary.find("FAIL") == std::string::npos);
}

TEST_CASE("invalid configs exit with code 2") {
    auto dir = scratch("invalid");

    write_config(dir / "unknown.json", "{\"bogus\": 1}\n");
    CHECK(run("sfunc --config " + (dir / "unknown.json").string()) == 2);

    write_config(dir / "syntax.json", "{model: nope\n");
    CHECK(run("sfunc --config " + (dir / "syntax.json").string()) == 2);

    // Coupling amplitudes reach below the declared infrared window scale.
    write_config(dir / "ir.json", "{\"model\": \"infrared\", \"ir_window_scale\": 0.7}\n");
    int code = run("virial --config " + (dir / "ir.json").string(), (dir / "ir.txt").string());
    CHECK(code == 2);
    CHECK(slurp(dir / "ir.txt").find("infrared window") != std::string::npos);

    // Time window past the mode revival estimate; the message names it.
    write_config(dir / "late.json", "{\"model\": \"one_sided\", \"t_max\": 100}\n");
    code = run("relax --config " + (dir / "late.json").string(), (dir / "late.txt").string());
    CHECK(code == 2);
    CHECK(slurp(dir / "late.txt").find("revival estimate") != std::string::npos);

    CHECK(run("") == 2);  // no subcommand
}

TEST_CASE("truncation cap violations exit with code 3") {
    auto dir = scratch("cap");
    write_config(dir / "huge.json",
                 "{\"model\": \"spin_boson\", \"n_modes\": 40, \"n_max\": 10}\n");
    CHECK(run("virial --config " + (dir / "huge.json").string()) == 3);
}

TEST_CASE("output directory carries manifest, traces, and summary") {
    auto dir = scratch("out");
    auto out = dir / "run";
    CHECK(run("fields --out " + out.string()) == 0);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "summary.txt"));
    CHECK(fs::exists(out / "free_field.csv"));
    CHECK(fs::exists(out / "coupled_field.csv"));

    auto manifest = slurp(out / "manifest.json");
    CHECK(manifest.find("\"experiment\": \"fields\"") != std::string::npos);
    CHECK(manifest.find("\"hypotheses\"") != std::string::npos);
    CHECK(manifest.find("\"checks\"") != std::string::npos);

    auto csv = slurp(out / "free_field.csv");
    CHECK(csv.rfind("t,value_re,value_im,cauchy_increment,fitted_slope\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 2);
}

TEST_CASE("identical config and seed reproduce identical bytes") {
    auto dir = scratch("det");
    write_config(dir / "cfg.json", "{\"model\": \"one_sided\", \"seed\": 7}\n");
    std::string base = "fields --config " + (dir / "cfg.json").string() + " --out ";
    CHECK(run(base + (dir / "a").string()) == 0);
    CHECK(run(base + (dir / "b").string()) == 0);
    for (const char* leaf :
         {"manifest.json", "summary.txt", "free_field.csv", "coupled_field.csv"})
        CHECK(slurp(dir / "a" / leaf) == slurp(dir / "b" / leaf));
}
