// End-to-end checks of the installed CLI surface: artifact layout, exit
// codes, numeric round trips, and byte-determinism of the JSON reports.

#include "doctest.h"

#include <array>
#include <cmath>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diffusia/csv.hpp"
#include "diffusia/estimation.hpp"
#include "diffusia/simulation.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

#ifndef DIFFUSIA_CLI_PATH
#error "DIFFUSIA_CLI_PATH must be defined by the build"
#endif

const char* cli_path() { return DIFFUSIA_CLI_PATH; }

int run_cli(const std::string& args) {
    const std::string command = std::string(cli_path()) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("diffusia_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_synthetic_csv(const fs::path& dir, int months, double noise,
                             std::uint64_t seed) {
    diffusia::sim::SimScenario scenario;
    scenario.true_params = testsupport::positive_signal_params();
    scenario.n_months = months;
    scenario.noise_to_signal = noise;
    scenario.seed = seed;
    scenario.fitted_model.initial_values = scenario.true_params;
    const diffusia::SalesSeries data = diffusia::sim::generate(scenario, 0);

    const fs::path file = dir / "sales.csv";
    std::ofstream out(file);
    out << "t,brand1,brand2\n";
    out.precision(17);
    for (std::size_t i = 0; i < data.months(); ++i) {
        out << static_cast<int>(data.t[i]) << ',' << data.sales1[i] << ',' << data.sales2[i]
            << "\n";
    }
    return file;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("fit") == 2);                        // missing required input
    CHECK(run_cli("definitely-not-a-command") == 2);
}

TEST_CASE("fit produces the three artifacts and a near-perfect noiseless fit") {
    TempDir dir("fit");
    const fs::path csv = write_synthetic_csv(dir.path, 96, 0.0, 1);
    // Start near the generating values (10% off): the default order-of-
    // magnitude start can settle in a nearby local basin of this very flat
    // 8-parameter landscape.
    const std::string inits =
        " --init K=1.1e6 --init p_c=7e-3 --init q_c=9e-2 --init p_1=1.8e-3"
        " --init q_1=2.2e-2 --init p_2=1.4e-3 --init q_2=1.6e-2 --init delta=5e-3";
    const int code = run_cli("fit -i " + csv.string() + " -o " + dir.path.string() + inits);
    CHECK(code == 0);
    REQUIRE(fs::exists(dir.path / "fit_report.json"));
    REQUIRE(fs::exists(dir.path / "fitted_curves.csv"));
    REQUIRE(fs::exists(dir.path / "potential_curve.csv"));

    const std::string report = slurp(dir.path / "fit_report.json");
    CHECK(report.find("\"converged\": true") != std::string::npos);
    CHECK(report.find("\"model\": \"cdmp\"") != std::string::npos);
    CHECK(report.find("effective_coefficients") != std::string::npos);

    // Noiseless data: R^2 at 1 to ten digits.
    const auto pos = report.find("\"r_squared\": ");
    REQUIRE(pos != std::string::npos);
    const double r2 = std::stod(report.substr(pos + 13));
    CHECK(r2 >= 1.0 - 1e-10);

    const auto curves = read_csv(dir.path / "fitted_curves.csv");
    CHECK(curves.front() ==
          std::vector<std::string>{"t", "obs_inst_1", "fit_inst_1", "obs_cum_1", "fit_cum_1",
                                   "obs_inst_2", "fit_inst_2", "obs_cum_2", "fit_cum_2"});
    CHECK(curves.size() == 97);

    const auto potential = read_csv(dir.path / "potential_curve.csv");
    CHECK(potential.front() == std::vector<std::string>{"t", "m_hat"});
    CHECK(potential.size() == 97);
}

TEST_CASE("fitted_curves round trip reproduces the reported R^2") {
    TempDir dir("roundtrip");
    const fs::path csv = write_synthetic_csv(dir.path, 96, 0.02, 7);
    REQUIRE(run_cli("fit -i " + csv.string() + " -o " + dir.path.string()) == 0);

    const std::string report = slurp(dir.path / "fit_report.json");
    const auto pos = report.find("\"r_squared\": ");
    REQUIRE(pos != std::string::npos);
    const double reported = std::stod(report.substr(pos + 13));

    // Re-score from the artifact alone.
    const auto rows = read_csv(dir.path / "fitted_curves.csv");
    std::vector<double> obs1;
    std::vector<double> obs2;
    std::array<std::vector<double>, 2> fit_cum;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        obs1.push_back(std::stod(rows[i][1]));
        obs2.push_back(std::stod(rows[i][5]));
        fit_cum[0].push_back(std::stod(rows[i][4]));
        fit_cum[1].push_back(std::stod(rows[i][8]));
    }
    const auto series =
        diffusia::SalesSeries::from_instantaneous({"b1", "b2"}, obs1, obs2);
    const auto gof = diffusia::goodness_of_fit(series, fit_cum);
    CHECK(std::fabs(gof.r_squared - reported) < 1e-9);
}

TEST_CASE("JSON artifacts are byte-identical across reruns") {
    TempDir dir("determinism");
    const fs::path csv = write_synthetic_csv(dir.path, 96, 0.02, 3);
    const fs::path out1 = dir.path / "a";
    const fs::path out2 = dir.path / "b";
    REQUIRE(run_cli("fit -i " + csv.string() + " -o " + out1.string()) == 0);
    REQUIRE(run_cli("fit -i " + csv.string() + " -o " + out2.string()) == 0);
    CHECK(slurp(out1 / "fit_report.json") == slurp(out2 / "fit_report.json"));
    CHECK(slurp(out1 / "fitted_curves.csv") == slurp(out2 / "fitted_curves.csv"));
}

TEST_CASE("compare emits exactly the four potential rows") {
    TempDir dir("compare");
    const fs::path csv = write_synthetic_csv(dir.path, 96, 0.02, 9);
    REQUIRE(run_cli("compare -i " + csv.string() + " -o " + dir.path.string()) == 0);
    const std::string report = slurp(dir.path / "comparison.json");
    for (const char* name : {"\"cdmp\"", "\"constant\"", "\"gg-nosqrt\"", "\"gamma\""}) {
        CHECK(report.find(name) != std::string::npos);
    }
    CHECK(report.find("nested_f_vs_cdmp") != std::string::npos);
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = report.find("\"model\":", pos)) != std::string::npos;
         ++pos) {
        ++count;
    }
    CHECK(count == 4);
}

TEST_CASE("forecast writes bands, optionally refined") {
    TempDir dir("forecast");
    const fs::path csv = write_synthetic_csv(dir.path, 96, 0.02, 5);
    REQUIRE(run_cli("forecast -i " + csv.string() + " -o " + dir.path.string() +
                    " --horizon 18 --level 0.95") == 0);
    auto rows = read_csv(dir.path / "forecast_bands.csv");
    CHECK(rows.front() == std::vector<std::string>{"t", "mean_1", "lower_1", "upper_1", "mean_2",
                                                   "lower_2", "upper_2"});
    CHECK(rows.size() == 19);
    CHECK(rows[1][0] == "97");

    REQUIRE(run_cli("forecast -i " + csv.string() + " -o " + dir.path.string() +
                    " --horizon 18 --sarma 1,0,1,0") == 0);
    rows = read_csv(dir.path / "forecast_bands.csv");
    REQUIRE(rows.front().size() == 9);
    CHECK(rows.front()[7] == "refined_mean_1");

    // Refinement additivity: refined mean = mean + residual forecast, so
    // with near-zero residuals the two columns agree closely.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double mean = std::stod(rows[i][1]);
        const double refined = std::stod(rows[i][7]);
        CHECK(std::fabs(refined - mean) <= 0.25 * std::fabs(mean) + 1e-9);
    }
}

TEST_CASE("simulate writes the study artifacts") {
    TempDir dir("simulate");
    REQUIRE(run_cli("simulate -o " + dir.path.string() +
                    " --months 60 --replications 5 --noise 0.02 --seed 4 --scale instantaneous") ==
            0);
    const std::string report = slurp(dir.path / "sim_report.json");
    CHECK(report.find("\"replications\": 5") != std::string::npos);
    CHECK(report.find("parameter_stats") != std::string::npos);
    CHECK(report.find("truncated at 0") != std::string::npos);
    const auto rows = read_csv(dir.path / "sim_replications.csv");
    CHECK(rows.size() == 6);
}

TEST_CASE("oracle-check passes with the published estimates and honors the tolerance") {
    TempDir dir("oracle");
    const std::string table1 =
        " --init K=4.8669e7 --init p_c=2.3837e-3 --init q_c=4.5235e-2 --init p_1=3.2004e-3"
        " --init q_1=1.4277e-2 --init p_2=-7.9208e-4 --init q_2=1.2709e-3 --init delta=-2.2248e-2";
    CHECK(run_cli("oracle-check" + table1) == 0);
    CHECK(run_cli("oracle-check" + table1 + " --oracle-tol 1e-14") == 6);
    CHECK(run_cli("oracle-check --init bogus=1") == 2);
}

TEST_CASE("exit codes for I/O and validation failures") {
    TempDir dir("errors");
    CHECK(run_cli("fit -i " + (dir.path / "missing.csv").string() + " -o " +
                  dir.path.string()) == 3);

    const fs::path bad = dir.path / "bad.csv";
    {
        std::ofstream out(bad);
        out << "t,b1,b2\n";
        for (int i = 1; i <= 30; ++i) {
            out << i << ',' << (i == 12 ? -5.0 : 10.0) << ",4\n";
        }
    }
    CHECK(run_cli("fit -i " + bad.string() + " -o " + dir.path.string()) == 4);
}
