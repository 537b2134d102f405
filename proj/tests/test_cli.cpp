#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "penrose/cli.hpp"
#include "penrose/util.hpp"

using namespace penrose;
namespace fs = std::filesystem;

namespace {

cli::Invocation parse(std::vector<std::string> args) { return cli::parse_invocation(args); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("parse: commands, defaults, and flags") {
    const cli::Invocation inv =
        parse({"schwarzschild", "--n", "3", "--mass", "0.5", "--r", "2"});
    CHECK(inv.command == cli::Command::schwarzschild);
    CHECK(inv.get_int("n") == 3);
    CHECK(inv.get_double("mass") == 0.5);
    CHECK(inv.get_double("r") == 2.0);

    // empty argument list: suite with defaults n=3, m=0.5
    const cli::Invocation empty = parse({});
    CHECK(empty.command == cli::Command::suite);
    CHECK(empty.get_int("n") == 3);
    CHECK(empty.get_double("mass") == 0.5);
}

TEST_CASE("parse: usage errors") {
    CHECK_THROWS_AS(parse({"--bogus", "1"}), cli::UsageError);
    CHECK_THROWS_AS(parse({"nonsense"}), cli::UsageError);
    CHECK_THROWS_AS(parse({"mass", "--n"}), cli::UsageError);          // missing value
    CHECK_THROWS_AS(parse({"mass", "--n", "two"}), cli::UsageError);   // not a number
    CHECK_THROWS_AS(parse({"mass", "--n", "2"}), cli::UsageError);     // out of range
    CHECK_THROWS_AS(parse({"mass", "--mass", "-1"}), cli::UsageError);
    CHECK_THROWS_AS(parse({"suite", "--r", "2"}), cli::UsageError);    // key not in schema
}

TEST_CASE("config file precedence: flags > config > defaults") {
    const fs::path cfg = fs::temp_directory_path() / "penrose_cli_test.cfg";
    {
        std::ofstream out(cfg);
        out << "# comment\n"
            << "n = 4\n"
            << "mass = 1.0\n";
    }
    const cli::Invocation inv =
        parse({"schwarzschild", "--config", cfg.string(), "--mass", "0.25"});
    CHECK(inv.get_int("n") == 4);            // from config
    CHECK(inv.get_double("mass") == 0.25);   // flag wins
    CHECK(inv.get_double("r") == 2.0);       // default survives
    fs::remove(cfg);

    CHECK_THROWS_AS(parse({"mass", "--config", "/nonexistent/path.cfg"}), cli::IoError);
}

TEST_CASE("run: schwarzschild profile evaluation") {
    const cli::Report report = cli::run(parse({"schwarzschild", "--r", "2"}));
    CHECK(report.pass);
    CHECK(report.results["u"].get<double>() == doctest::Approx(2.0));
    CHECK(report.results["u_prime"].get<double>() == doctest::Approx(1.0));
    CHECK(report.results["horizon_radius"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("run: unachievable tolerance produces a failing check, not a crash") {
    const cli::Report report =
        cli::run(parse({"mass", "--tol", "1e-12", "--radii", "10,20,40,80"}));
    CHECK(!report.pass);
    bool found_failed = false;
    for (const auto& c : report.checks) found_failed = found_failed || !c.pass;
    CHECK(found_failed);
}

TEST_CASE("run: module errors are captured as failed checks") {
    // r below the horizon radius triggers a domain error inside the module
    const cli::Report report = cli::run(parse({"schwarzschild", "--r", "0.5"}));
    CHECK(!report.pass);
    REQUIRE(!report.checks.empty());
    CHECK(report.checks[0].note.find("horizon") != std::string::npos);
}

TEST_CASE("run: reflect-check reports the decomposition values") {
    const cli::Report report = cli::run(parse({"reflect-check"}));
    CHECK(report.pass);
    CHECK(report.results["decomposition"]["D"].get<double>() == doctest::Approx(-2.0));
    CHECK(report.results["decomposition"]["E"].get<double>() == doctest::Approx(1.0));
    CHECK(std::abs(report.results["decomposition"]["F"].get<double>()) < 1e-10);
    CHECK(report.results["jump_base"].get<double>() < 1e-6);
}

TEST_CASE("emit: JSON round-trips and is byte-stable; timing excluded by default") {
    const cli::Report report = cli::run(parse({"schwarzschild", "--r", "3"}));
    const fs::path out1 = fs::temp_directory_path() / "penrose_report1.json";
    const fs::path out2 = fs::temp_directory_path() / "penrose_report2.json";
    cli::emit_report(report, "json", out1.string());
    cli::emit_report(report, "json", out2.string());
    const std::string payload1 = slurp(out1);
    CHECK(payload1 == slurp(out2));
    CHECK(payload1.find("timing") == std::string::npos);

    const auto parsed = nlohmann::json::parse(payload1);
    CHECK(parsed["command"] == "schwarzschild");
    CHECK(parsed["results"]["u"].get<double>() ==
          report.results["u"].get<double>());  // lossless numeric round-trip

    // two separate runs of the same invocation emit identical bytes
    const cli::Report report2 = cli::run(parse({"schwarzschild", "--r", "3"}));
    const fs::path out3 = fs::temp_directory_path() / "penrose_report3.json";
    cli::emit_report(report2, "json", out3.string());
    CHECK(payload1 == slurp(out3));

    // --timing opts into the excluded section
    const fs::path out4 = fs::temp_directory_path() / "penrose_report4.json";
    cli::emit_report(report, "json", out4.string(), /*include_timing=*/true);
    CHECK(slurp(out4).find("timing") != std::string::npos);

    for (const auto& p : {out1, out2, out3, out4}) fs::remove(p);
}

TEST_CASE("main_entry: exit code contract") {
    auto entry = [](std::vector<std::string> args) {
        std::vector<char*> argv;
        static std::string prog = "penrose-lab";
        argv.push_back(prog.data());
        for (auto& a : args) argv.push_back(a.data());
        return cli::main_entry(static_cast<int>(argv.size()), argv.data());
    };
    const fs::path out = fs::temp_directory_path() / "penrose_exit.json";
    CHECK(entry({"schwarzschild", "--r", "2", "--out", out.string()}) == 0);
    CHECK(entry({"mass", "--tol", "1e-12", "--radii", "10,20,40", "--out", out.string()}) == 1);
    CHECK(entry({"--bogus", "1"}) == 2);
    CHECK(entry({"schwarzschild", "--out", "/nonexistent/dir/x.json"}) == 3);
    fs::remove(out);
}

TEST_CASE("worker count does not change emitted bytes") {
    set_worker_count(1);
    const cli::Report a = cli::run(parse({"verify-reilly", "--radii", "2,5"}));
    set_worker_count(4);
    const cli::Report b = cli::run(parse({"verify-reilly", "--radii", "2,5"}));
    set_worker_count(1);
    const fs::path pa = fs::temp_directory_path() / "penrose_threads_a.json";
    const fs::path pb = fs::temp_directory_path() / "penrose_threads_b.json";
    cli::emit_report(a, "json", pa.string());
    cli::emit_report(b, "json", pb.string());
    CHECK(slurp(pa) == slurp(pb));
    fs::remove(pa);
    fs::remove(pb);
}

TEST_CASE("parallel_for covers every index exactly once at any worker count") {
    for (int workers : {1, 3, 8}) {
        set_worker_count(workers);
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) CHECK(h == 1);
    }
    set_worker_count(1);
}

TEST_CASE("emit: CSV schema for flux records") {
    const cli::Report report = cli::run(parse({"verify-reilly", "--radii", "2,10"}));
    const fs::path out = fs::temp_directory_path() / "penrose_flux.csv";
    cli::emit_report(report, "csv", out.string());
    const std::string csv = slurp(out);
    CHECK(csv.rfind("r,flux,quad_order\n", 0) == 0);
    fs::remove(out);

    CHECK_THROWS_AS(cli::emit_report(report, "xml", "-"), cli::UsageError);
    CHECK_THROWS_AS(cli::emit_report(report, "json", "/nonexistent/dir/file.json"),
                    cli::IoError);
}
