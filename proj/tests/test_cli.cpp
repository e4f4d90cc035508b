#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "polya/io.hpp"

using namespace polya;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("polya_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct CmdResult {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Runs the CLI with the given argument string inside `dir`.
CmdResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + POLYA_CLI_PATH + "' " + args +
                            " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    CmdResult res;
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out);
    res.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return res;
}

}  // namespace

TEST_CASE("pmf subcommand prints the exact probability") {
    TempDir dir;
    const CmdResult res = run_cli("pmf --alpha 1 --stocks 3 --composition 3,2,1", dir.path);
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    const std::size_t at = res.out.find("probability ");
    REQUIRE(at != std::string::npos);
    const double p = std::stod(res.out.substr(at + 12));
    CHECK_THAT(p, Catch::Matchers::WithinRel(1.0 / 28.0, 1e-14));
}

TEST_CASE("pmf usage and domain failures") {
    TempDir dir;
    CHECK(run_cli("pmf --alpha 1 --stocks 3 --composition 3,x,1", dir.path).code == 2);
    CHECK(run_cli("pmf --alpha 1 --stocks 3 --composition 3,2", dir.path).code == 2);
    CHECK(run_cli("pmf --alpha 1 --stocks 3 --composition 3,2,1,", dir.path).code == 2);
    CHECK(run_cli("pmf --alpha 1 --stocks 3", dir.path).code == 2);  // missing flag
    CHECK(run_cli("pmf --alpha -1 --stocks 3 --composition 1,1,1", dir.path).code == 1);
}

TEST_CASE("enumerate lists the simplex in order") {
    TempDir dir;
    const CmdResult res = run_cli("enumerate --stocks 3 --level 2", dir.path);
    REQUIRE(res.code == 0);
    CHECK(res.out == "2,0,0\n1,1,0\n1,0,1\n0,2,0\n0,1,1\n0,0,2\n");
    const CmdResult count = run_cli("enumerate --stocks 3 --level 2 --count", dir.path);
    CHECK(count.out == "6\n");
    // enumerable guard: the full list would be absurdly large
    CHECK(run_cli("enumerate --stocks 10 --level 100", dir.path).code == 1);
    CHECK(run_cli("enumerate --stocks 10 --level 100 --count", dir.path).code == 0);
}

TEST_CASE("verify writes a report and respects the tolerance") {
    TempDir dir;
    const CmdResult res = run_cli("verify --alpha 1 --stocks 2 --level 10 --out report.jsonl",
                                  dir.path);
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    const std::vector<CheckReport> reports = read_report(dir.path / "report.jsonl");
    REQUIRE(reports.size() == 5);
    for (const auto& rep : reports) {
        CHECK(rep.residual < 1e-12);
        CHECK(rep.alpha == 1.0);
        CHECK(rep.stocks == 2);
    }
    // an unreachable tolerance flips the exit code but still writes the report
    const CmdResult strict =
        run_cli("verify --alpha 1 --stocks 2 --level 10 --tolerance 1e-30 --out strict.jsonl",
                dir.path);
    CHECK(strict.code == 1);
    CHECK(fs::exists(dir.path / "strict.jsonl"));
    // grid run: two alphas, two levels, updown variant included
    const CmdResult grid =
        run_cli("verify --alpha 0.5 2 --stocks 3 --level 4 9 --updown --out grid.jsonl", dir.path);
    REQUIRE(grid.code == 0);
    CHECK(read_report(dir.path / "grid.jsonl").size() == 2 * 2 * 6);
}

TEST_CASE("simulate two-phase holds the level and emits both curves") {
    TempDir dir;
    const CmdResult res = run_cli(
        "simulate --mode two-phase --alpha 1 --stocks 5 --threshold 50 --steps 200 --seed 7 "
        "--trajectory-out traj.csv --curve-out terminal.csv --threshold-curve-out at50.csv",
        dir.path);
    CAPTURE(res.err);
    REQUIRE(res.code == 0);

    // parse the trajectory: levels after the threshold stay at 50
    std::ifstream in(dir.path / "traj.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,phase,stock,count,weight");
    std::map<std::int64_t, std::int64_t> level_by_step;
    std::map<std::int64_t, std::string> phase_by_step;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        const auto c4 = line.find(',', c3 + 1);
        const std::int64_t step = std::stoll(line.substr(0, c1));
        level_by_step[step] += std::stoll(line.substr(c3 + 1, c4 - c3 - 1));
        phase_by_step[step] = line.substr(c1 + 1, c2 - c1 - 1);
    }
    REQUIRE(level_by_step.size() == 200);
    for (const auto& [step, lvl] : level_by_step) {
        if (step <= 50) {
            CHECK(lvl == step);
            CHECK(phase_by_step[step] == "growth");
        } else {
            CHECK(lvl == 50);
            CHECK(phase_by_step[step] == "equilibrium");
        }
    }

    const CapitalCurve at50 = read_curve(dir.path / "at50.csv");
    const CapitalCurve terminal = read_curve(dir.path / "terminal.csv");
    CHECK(at50.ranks.size() == 5);
    CHECK(terminal.ranks.size() == 5);
}

TEST_CASE("simulate rejects inconsistent modes without touching the filesystem") {
    TempDir dir;
    const CmdResult growth_with_threshold = run_cli(
        "simulate --mode growth --alpha 1 --stocks 3 --steps 100 --threshold 10 "
        "--trajectory-out t.csv",
        dir.path);
    CHECK(growth_with_threshold.code == 2);
    CHECK_FALSE(fs::exists(dir.path / "t.csv"));

    const CmdResult missing_threshold = run_cli(
        "simulate --mode two-phase --alpha 1 --stocks 3 --steps 100 --trajectory-out t.csv",
        dir.path);
    CHECK(missing_threshold.code == 2);
    CHECK_FALSE(fs::exists(dir.path / "t.csv"));

    const CmdResult missing_steps =
        run_cli("simulate --alpha 1 --stocks 3 --trajectory-out t.csv", dir.path);
    CHECK(missing_steps.code == 2);
    CHECK_FALSE(fs::exists(dir.path / "t.csv"));

    const CmdResult bad_mode =
        run_cli("simulate --mode sideways --alpha 1 --stocks 3 --steps 10", dir.path);
    CHECK(bad_mode.code == 2);
}

TEST_CASE("simulate replica outputs carry a stream suffix") {
    TempDir dir;
    const CmdResult res = run_cli(
        "simulate --alpha 1 --stocks 3 --steps 40 --seed 9 --replicas 3 --curve-out c.csv",
        dir.path);
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    CHECK(fs::exists(dir.path / "c_r000.csv"));
    CHECK(fs::exists(dir.path / "c_r001.csv"));
    CHECK(fs::exists(dir.path / "c_r002.csv"));
    CHECK_FALSE(fs::exists(dir.path / "c.csv"));
}

TEST_CASE("identical invocations produce byte-identical outputs") {
    TempDir a, b;
    const std::string args =
        "simulate --mode two-phase --alpha 1 --stocks 4 --threshold 30 --steps 90 --seed 31 "
        "--trajectory-out t.csv --curve-out c.csv --trajectory-svg t.svg --curve-svg c.svg "
        "--threshold-curve-out tc.csv";
    REQUIRE(run_cli(args, a.path).code == 0);
    REQUIRE(run_cli(args, b.path).code == 0);
    for (const char* name : {"t.csv", "c.csv", "t.svg", "c.svg", "tc.csv"})
        CHECK(slurp(a.path / name) == slurp(b.path / name));
}

TEST_CASE("curve subcommand round trips a snapshot") {
    TempDir dir;
    {
        std::ofstream snap(dir.path / "snap.csv", std::ios::binary);
        snap << "ticker,market_cap\nAAA,4\nBBB,12\nCCC,4\n";
    }
    const CmdResult res =
        run_cli("curve --in snap.csv --out curve.csv --svg-out curve.svg", dir.path);
    CAPTURE(res.err);
    REQUIRE(res.code == 0);
    const CapitalCurve curve = read_curve(dir.path / "curve.csv");
    REQUIRE(curve.weights.size() == 3);
    CHECK_THAT(curve.weights[0], Catch::Matchers::WithinRel(0.6, 1e-14));
    CHECK(slurp(dir.path / "curve.svg").rfind("<svg", 0) == 0);

    // stdout mode: no output flags
    const CmdResult text = run_cli("curve --in snap.csv", dir.path);
    REQUIRE(text.code == 0);
    CHECK(text.out.rfind("rank,weight,log10_rank,log10_weight\n", 0) == 0);

    CHECK(run_cli("curve --in missing.csv --out c.csv", dir.path).code == 1);
    CHECK_FALSE(fs::exists(dir.path / "c.csv"));
}

TEST_CASE("top-level usage errors") {
    TempDir dir;
    CHECK(run_cli("", dir.path).code == 2);
    CHECK(run_cli("frobnicate", dir.path).code == 2);
    CHECK(run_cli("simulate --no-such-flag", dir.path).code == 2);
    CHECK(run_cli("--help", dir.path).code == 0);
    CHECK(run_cli("simulate --help", dir.path).code == 0);
}

TEST_CASE("domain errors exit with one") {
    TempDir dir;
    // record cadence must divide the step count
    CHECK(run_cli("simulate --alpha 1 --stocks 2 --steps 100 --record-every 3", dir.path).code ==
          1);
    // threshold curve requires the threshold step to be recorded
    CHECK(run_cli("simulate --mode two-phase --alpha 1 --stocks 2 --threshold 25 --steps 100 "
                  "--record-every 50 --threshold-curve-out x.csv",
                  dir.path)
              .code == 1);
    CHECK_FALSE(fs::exists(dir.path / "x.csv"));
    // verify at level 0 has no removal move
    CHECK(run_cli("verify --alpha 1 --stocks 2 --level 0", dir.path).code == 1);
}
