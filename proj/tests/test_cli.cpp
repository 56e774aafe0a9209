#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hexrelay/config.hpp"

using namespace hexrelay;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "hexrelay_cli_test";

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& args) {
    const std::string cmd = std::string(HEXRELAY_BIN) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

json small_config() {
    json j;
    j["grid"] = {{"Rc_km", 1.0}, {"rings", 3}};
    j["sampling"] = {{"N", 400}, {"scheme", "grid"}, {"seed", 1}};
    j["layout"] = {{"n", 2}, {"RR_over_Rc", 0.7}, {"phi_rad", 0.0}, {"PR_dbm", 31.0}};
    return j;
}

void write_config(const fs::path& p, const json& j) {
    std::ofstream out(p);
    out << j.dump(2);
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults round-trip through json") {
        const ExperimentConfig a;
        const ExperimentConfig b = ExperimentConfig::from_json(a.to_json());
        CHECK(a.to_json().dump() == b.to_json().dump());
    }

    SUBCASE("unknown keys are rejected with their path") {
        json j = small_config();
        j["grid"]["bogus"] = 1;
        CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(j),
                             doctest::Contains("grid.bogus"), ConfigError);
        json k;
        k["totally_unknown"] = 1;
        CHECK_THROWS_AS(ExperimentConfig::from_json(k), ConfigError);
    }

    SUBCASE("invalid values are rejected") {
        json j = small_config();
        j["grid"]["Rc_km"] = -1.0;
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
        j = small_config();
        j["layout"]["n"] = 7;
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
        j = small_config();
        j["sampling"]["scheme"] = "random";
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
        j = small_config();
        j["propagation"] = {{"eta", 1.5}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
    }

    SUBCASE("backhaul constants default to the direct-link ones") {
        json j;
        j["propagation"] = {{"K", 2.5}, {"eta", 4.0}};
        const auto c = ExperimentConfig::from_json(j);
        CHECK(c.propagation.kb == 2.5);
        CHECK(c.propagation.eta_b == 4.0);
        j["propagation"]["KB"] = 1.0;
        CHECK(ExperimentConfig::from_json(j).propagation.kb == 1.0);
    }

    SUBCASE("tau flag parsing") {
        CHECK(parse_tau_flag("star").policy == TauSpec::Policy::Star);
        const auto f = parse_tau_flag("fixed:0.25");
        CHECK(f.policy == TauSpec::Policy::Fixed);
        CHECK(f.value == 0.25);
        const auto b = parse_tau_flag("backhaul:4.4");
        CHECK(b.policy == TauSpec::Policy::Backhaul);
        CHECK(b.cb_bps_hz == 4.4);
        CHECK_THROWS_AS(parse_tau_flag("nonsense"), ConfigError);
        CHECK_THROWS_AS(parse_tau_flag("fixed:abc"), ConfigError);
    }
}

TEST_CASE("cli end to end") {
    fs::remove_all(kWork);
    fs::create_directories(kWork);

    SUBCASE("evaluate writes a report and reruns byte-identically") {
        write_config(kWork / "cfg.json", small_config());
        CHECK(run("evaluate --config " + (kWork / "cfg.json").string() + " --out " +
                  (kWork / "a").string()) == 0);
        const std::string a = slurp(kWork / "a" / "report.json");
        CHECK(run("evaluate --config " + (kWork / "cfg.json").string() + " --out " +
                  (kWork / "a").string()) == 0);
        CHECK(a == slurp(kWork / "a" / "report.json"));

        // re-running from the echoed config reproduces the report
        const json echoed = json::parse(a).at("config");
        write_config(kWork / "echo.json", echoed);
        CHECK(run("evaluate --config " + (kWork / "echo.json").string() + " --out " +
                  (kWork / "c").string()) == 0);
        json echoed2 = json::parse(slurp(kWork / "c" / "report.json"));
        json first = json::parse(a);
        // output directories differ by construction; everything else matches
        echoed2["config"]["output"] = first["config"]["output"];
        CHECK(echoed2.dump() == first.dump());
    }

    SUBCASE("validate emits parseable CSVs") {
        write_config(kWork / "cfg.json", small_config());
        CHECK(run("validate --config " + (kWork / "cfg.json").string() + " --out " +
                  (kWork / "v").string()) == 0);
        for (const char* name : {"cdf_enb_exact.csv", "cdf_enb_fluid.csv", "cdf_rn_exact.csv",
                                 "cdf_rn_fluid.csv", "mean_vs_dist.csv"}) {
            const std::string text = slurp(kWork / "v" / name);
            std::istringstream lines(text);
            std::string line;
            std::getline(lines, line);
            CHECK(line.rfind("# config:", 0) == 0);
            std::getline(lines, line);  // header
            const bool cdf = std::string(name).find("cdf") != std::string::npos;
            CHECK(line == (cdf ? "sinr_db,fraction" : "bin_center_over_Rc,mean_sinr_db,backend"));
            std::size_t rows = 0;
            double prev_frac = 0.0;
            while (std::getline(lines, line)) {
                ++rows;
                std::istringstream cells(line);
                std::string cell;
                std::getline(cells, cell, ',');
                (void)std::stod(cell);
                std::getline(cells, cell, ',');
                if (cdf) {
                    const double frac = std::stod(cell);
                    CHECK(frac >= prev_frac);
                    CHECK(frac <= 1.0);
                    prev_frac = frac;
                }
            }
            CHECK(rows > 0);
        }
        const json ks = json::parse(slurp(kWork / "v" / "ks_summary.json"));
        CHECK(ks.at("ks_enb_served").get<double>() >= 0.0);
        CHECK(ks.at("ks_rn_served").get<double>() <= 1.0);
    }

    SUBCASE("optimize with a small budget emits a trace") {
        json j = small_config();
        j["sampling"]["N"] = 200;
        j["annealing"] = {{"T0", 35.0}, {"alpha", 0.995}, {"iterations", 40}, {"seed", 9}};
        write_config(kWork / "opt.json", j);
        CHECK(run("optimize --config " + (kWork / "opt.json").string() + " --fix-n 1 --out " +
                  (kWork / "o").string()) == 0);
        const std::string trace = slurp(kWork / "o" / "trace.csv");
        CHECK(std::count(trace.begin(), trace.end(), '\n') == 42);  // header x2 + 40 rows
        const json best = json::parse(slurp(kWork / "o" / "best.json"));
        CHECK(best.at("best").at("n").get<int>() == 1);
    }

    SUBCASE("cross-backend reports for the same config") {
        write_config(kWork / "cfg.json", small_config());
        CHECK(run("evaluate --config " + (kWork / "cfg.json").string() +
                  " --backend exact --out " + (kWork / "x").string()) == 0);
        CHECK(run("evaluate --config " + (kWork / "cfg.json").string() +
                  " --backend fluid --out " + (kWork / "f").string()) == 0);
        const double cx = json::parse(slurp(kWork / "x" / "report.json"))
                              .at("capacity").at("c_cell_bps").get<double>();
        const double cf = json::parse(slurp(kWork / "f" / "report.json"))
                              .at("capacity").at("c_cell_bps").get<double>();
        CHECK(cf == doctest::Approx(cx).epsilon(0.15));
    }

    SUBCASE("tau = 1 zeroes the cell capacity") {
        write_config(kWork / "cfg.json", small_config());
        CHECK(run("evaluate --config " + (kWork / "cfg.json").string() +
                  " --tau fixed:1 --out " + (kWork / "t1").string()) == 0);
        const json r = json::parse(slurp(kWork / "t1" / "report.json"));
        CHECK(r.at("capacity").at("c_cell_bps").get<double>() == 0.0);
    }

    SUBCASE("validate re-runs byte-identically") {
        write_config(kWork / "cfg.json", small_config());
        CHECK(run("validate --config " + (kWork / "cfg.json").string() + " --out " +
                  (kWork / "v1").string()) == 0);
        const std::string first = slurp(kWork / "v1" / "cdf_rn_fluid.csv");
        CHECK(run("validate --config " + (kWork / "cfg.json").string() + " --out " +
                  (kWork / "v1").string()) == 0);
        CHECK(first == slurp(kWork / "v1" / "cdf_rn_fluid.csv"));
    }

    SUBCASE("omega_R sweep") {
        json j = small_config();
        j["sampling"]["N"] = 300;
        j["layout"]["n"] = 6;
        write_config(kWork / "sw.json", j);
        CHECK(run("exhaustive --config " + (kWork / "sw.json").string() +
                  " --fix-n 6 --sweep omega_R=1000,0.1 --out " + (kWork / "sw").string()) == 0);
        const std::string text = slurp(kWork / "sw" / "sweep_summary.csv");
        std::istringstream lines(text);
        std::string line;
        std::getline(lines, line);  // config echo
        std::getline(lines, line);
        CHECK(line == "omega_R,n,RR_over_Rc,phi_rad,PR_dbm,cell_capacity_bps");
        std::size_t rows = 0;
        while (std::getline(lines, line)) ++rows;
        CHECK(rows == 2);
        CHECK(fs::exists(kWork / "sw" / "sweep_omega_R" / "1000" / "states.csv"));
        CHECK(fs::exists(kWork / "sw" / "sweep_omega_R" / "0.1" / "summary.json"));
    }

    SUBCASE("tau_star sweep") {
        json j = small_config();
        j["sampling"]["N"] = 200;
        write_config(kWork / "ts.json", j);
        CHECK(run("exhaustive --config " + (kWork / "ts.json").string() +
                  " --sweep tau_star --out " + (kWork / "ts").string()) == 0);
        const std::string text = slurp(kWork / "ts" / "tau_star_sweep.csv");
        std::istringstream lines(text);
        std::string line;
        std::getline(lines, line);
        std::getline(lines, line);
        CHECK(line == "n,RR_over_Rc,phi_rad,PR_dbm,cell_capacity_bps,tau_star,tau_backhaul");
        std::size_t rows = 0;
        double prev_ts = -1e9;
        while (std::getline(lines, line)) {
            ++rows;
            const auto last_two = line.substr(line.find_last_of(',') + 1);
            const auto before = line.substr(0, line.find_last_of(','));
            const double ts = std::stod(before.substr(before.find_last_of(',') + 1));
            (void)std::stod(last_two);
            CHECK(ts >= prev_ts - 1e-12);  // tau* grows with the relay count
            prev_ts = ts;
        }
        CHECK(rows == 7);
    }

    SUBCASE("exit codes") {
        json bad = small_config();
        bad["grid"]["bogus"] = true;
        write_config(kWork / "bad.json", bad);
        CHECK(run("evaluate --config " + (kWork / "bad.json").string()) == 1);
        CHECK(run("evaluate --config " + (kWork / "missing.json").string()) == 1);
        CHECK(run("evaluate --tau nonsense") == 1);
        write_config(kWork / "cfg.json", small_config());
        CHECK(run("evaluate --config " + (kWork / "cfg.json").string() + " --sweep tau_star") ==
              1);
    }
}
