#include "risbeam/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace risbeam;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = RISBEAM_CONFIG_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("risbeam_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::string& cmd, const fs::path& config, const fs::path& out_dir, int workers = 1,
            std::optional<std::uint64_t> seed = std::nullopt) {
    RunConfig rc;
    rc.subcommand = cmd;
    rc.config_path = config.string();
    rc.out_dir = out_dir.string();
    rc.workers = workers;
    rc.seed = seed;
    std::ostringstream o, e;
    const int code = dispatch(rc, o, e);
    return {code, o.str(), e.str()};
}

const char* kMinimal = R"({
  "freq_ghz": 28,
  "ris": {"ny": 16, "nz": 1, "axis_y": [1, 0, 0], "axis_z": [0, 1, 0]},
  "bs": {"position_m": [30, 80, 0]},
  "illumination": {"center_m": [0, 70, 0]}
})";

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
    const Scenario s = parse_config(kMinimal);
    CHECK(s.ris.size() == 16);
    CHECK(s.u_bs().isApprox(Position3(30, 80, 0)));
    CHECK(s.u_ilm.isApprox(Position3(0, 70, 0)));
    CHECK(s.seed == 1);
    CHECK(s.regime == TargetRegime::Far);
    CHECK(s.points_per_axis == 5);
    CHECK(s.sca.eta0 == 1e-3);
    CHECK(s.sca.max_iters == 10);
    CHECK(s.ris.spacing_lambda == 0.5);
    CHECK(s.bs.size() == 4);
    CHECK(s.link.pt_dbm == 20.0);
    CHECK(s.snr.trials == 100);
}

TEST_CASE("config errors") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"freq_ghz": -3})"), doctest::Contains("freq_ghz"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"ris": {"ny": 4, "colour": 1}})"), doctest::Contains("ris.colour"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"ris": {"ny": "four"}})"), doctest::Contains("ris.ny"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("{\n  \"freq_ghz\": 28,\n  \"ris\": {\"ny\": 4,,}\n}"),
                         doctest::Contains("line 3"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"targets": {"regime": "middle"}})"), doctest::Contains("targets.regime"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"snr": {"benchmarks": ["Oracle"]}})"), doctest::Contains("snr.benchmarks"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("shipped multipath scenario") {
    const Scenario s = parse_config(slurp(fs::path(kConfigDir) / "fig9_full.json"));
    CHECK(s.u_bs().isApprox(Position3(30, 80, 5)));
    CHECK(s.u_ilm.isApprox(Position3(30, -5, -5)));
    CHECK(s.ris.size() == 10000);
    CHECK(s.multipath.scatterers == 5);
    CHECK(s.multipath.subpaths == 20);
    CHECK(s.link.direct_blockage_db == -40.0);
    CHECK(s.link.self_blockage_prob == 0.5);
}

TEST_CASE("every shipped config parses") {
    int count = 0;
    for (const auto& e : fs::directory_iterator(kConfigDir)) {
        if (e.path().extension() != ".json") continue;
        CAPTURE(e.path().string());
        CHECK_NOTHROW(parse_config(slurp(e.path()), kConfigDir));
        ++count;
    }
    CHECK(count >= 10);
}

TEST_CASE("dump round-trips") {
    const Scenario s = parse_config(slurp(fs::path(kConfigDir) / "fig9_desk.json"));
    const std::string d = dump_config(s);
    CHECK(dump_config(parse_config(d)) == d);
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("regime subcommand") {
    const fs::path dir = scratch_dir("regime");
    const fs::path cfg = write_file(dir / "c.json", R"({"freq_ghz": 28, "regime": {"side_m": [0.5]}})");
    const Outcome o = run("regime", cfg, dir / "out");
    REQUIRE(o.code == 0);
    CHECK(o.out.find("d_FF = 93.") != std::string::npos);
    CHECK(o.out.find("d_qNF = 3.5") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "regime.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("analytic profile replays at the matched peak") {
    const fs::path dir = scratch_dir("replay");
    const fs::path cfg = write_file(dir / "a.json", R"({
      "freq_ghz": 28,
      "ris": {"ny": 64, "nz": 1, "axis_y": [1, 0, 0], "axis_z": [0, 1, 0]},
      "bs": {"ny": 1, "nz": 1, "position_m": [30, 80, 0]},
      "illumination": {"center_m": [0, 7, 0]},
      "targets": {"regime": "near"},
      "design": {"method": "FocusNF"}
    })");
    REQUIRE(run("design-analytic", cfg, dir / "design").code == 0);
    const fs::path replay = write_file(dir / "b.json", R"({
      "freq_ghz": 28,
      "ris": {"ny": 64, "nz": 1, "axis_y": [1, 0, 0], "axis_z": [0, 1, 0]},
      "bs": {"ny": 1, "nz": 1, "position_m": [30, 80, 0]},
      "illumination": {"center_m": [0, 7, 0]},
      "targets": {"regime": "near"},
      "design": {"method": "Profile", "profile_csv": "design/profile.csv"},
      "scan": {"x_m": [-1, 1], "y_m": [6, 8], "nx": 21, "ny": 21}
    })");
    REQUIRE(run("illuminate", replay, dir / "replay").code == 0);
    const std::string summary = slurp(dir / "replay" / "illumination_summary.csv");
    const auto last = summary.substr(summary.rfind('\n', summary.size() - 2) + 1);
    std::istringstream row(last);
    std::string name, min_db, max_db;
    std::getline(row, name, ',');
    std::getline(row, min_db, ',');
    std::getline(row, max_db, ',');
    CHECK(name == "Profile");
    CHECK(std::stod(max_db) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
    const fs::path dir = scratch_dir("determinism");
    const fs::path cfg = write_file(dir / "s.json", R"({
      "freq_ghz": 28,
      "ris": {"ny": 6, "nz": 6},
      "bs": {"position_m": [30, 80, 5]},
      "illumination": {"center_m": [30, -5, -5], "size_m": [4, 4]},
      "snr": {"k_db": [0, 10], "trials": 8}
    })");
    REQUIRE(run("snr-vs-k", cfg, dir / "a", 1).code == 0);
    REQUIRE(run("snr-vs-k", cfg, dir / "b", 1).code == 0);
    REQUIRE(run("snr-vs-k", cfg, dir / "c", 3).code == 0);
    for (const char* f : {"snr_vs_k.csv", "manifest.json"}) {
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "c" / f));
    }
    REQUIRE(run("snr-vs-k", cfg, dir / "d", 1, 99).code == 0);
    CHECK(slurp(dir / "a" / "snr_vs_k.csv") != slurp(dir / "d" / "snr_vs_k.csv"));
    CHECK(slurp(dir / "d" / "manifest.json").find("\"seed\": 99") != std::string::npos);
}

TEST_CASE("error categories and exit codes") {
    const fs::path dir = scratch_dir("errors");
    const fs::path good = write_file(dir / "g.json", kMinimal);

    Outcome o = run("teleport", good, dir / "o");
    CHECK(o.code == static_cast<int>(ExitCode::Usage));
    CHECK(o.err.rfind("risbeam: error[usage]: ", 0) == 0);

    o = run("regime", dir / "missing.json", dir / "o");
    CHECK(o.code == static_cast<int>(ExitCode::Io));
    CHECK(o.err.rfind("risbeam: error[io]: ", 0) == 0);

    o = run("regime", write_file(dir / "bad.json", R"({"freq_ghz": -1})"), dir / "o");
    CHECK(o.code == static_cast<int>(ExitCode::Config));
    CHECK(o.err.find("freq_ghz") != std::string::npos);

    o = run("illuminate", write_file(dir / "p.json", R"({"design": {"method": "Profile", "profile_csv": "nope.csv"}})"),
            dir / "o");
    CHECK(o.code == static_cast<int>(ExitCode::Io));

    o = run("design-analytic", write_file(dir / "opt.json", R"({"design": {"method": "OptimizedFF"}})"), dir / "o");
    CHECK(o.code == static_cast<int>(ExitCode::Config));

    write_file(dir / "file", "x");
    o = run("regime", good, dir / "file" / "sub");
    CHECK(o.code == static_cast<int>(ExitCode::Io));
}

TEST_CASE("command-line front end") {
    const char* exe = std::getenv("RISBEAM_CLI");
    if (!exe) return;
    const fs::path dir = scratch_dir("exe");
    const fs::path cfg = write_file(dir / "c.json", R"({"freq_ghz": 5, "regime": {"side_m": [0.5]}})");
    auto sh = [](const std::string& cmd) {
        const int s = std::system(cmd.c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    const std::string q = std::string("\"") + exe + "\"";
    CHECK(sh(q + " regime --config " + cfg.string() + " --out " + (dir / "o").string() +
             " --seed 7 --workers 2 --verbose > /dev/null 2>&1") == 0);
    CHECK(fs::exists(dir / "o" / "regime.csv"));
    CHECK(sh(q + " regime > /dev/null 2>&1") == 2);
    CHECK(sh(q + " regime --config " + cfg.string() + " --workers 0 > /dev/null 2>&1") == 2);
    CHECK(sh(q + " --version > /dev/null 2>&1") == 0);
}
