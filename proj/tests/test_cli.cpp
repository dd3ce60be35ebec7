#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"
#include "siq/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = SIQ_WORK_DIR;

constexpr const char* kPopParams = R"(n = 10000
sigma = 0.4
lambda = 0.2
p_q = 0.2
beta = 0.02
v = 0.5
gamma_t = 0.5
gamma_q = 0.9
eta = 0.2
c_t = 0.05
)";

std::string write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kWork);
    const fs::path path = kWork / name;
    siq::write_file(path.string(), text);
    return path.string();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SIQ_CLI_PATH) + " " + args + " > " + (kWork / "stdout.txt").string() +
                            " 2> " + (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& name) { return (kWork / name).string(); }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<double> fields(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

} // namespace

TEST_CASE("run with the macro engine ends at the endemic equilibrium") {
    const auto cfg = write_config("macro.cfg", std::string(kPopParams) +
                                                   "engine = macro\ninit = 0.9, 0.1, 0\nhorizon = 2000\n");
    REQUIRE(run_cli("run --config " + cfg + " --out " + out("macro")) == 0);
    const auto rows = lines(siq::read_file(out("macro_trajectory.csv")));
    CHECK(rows.front() == "t,y_s,y_i,y_q");
    const auto last = fields(rows.back());
    CHECK(std::abs(last[1] - 0.546192259675406) < 1e-4);
    CHECK(std::abs(last[2] - 0.115396825396825) < 1e-4);
    CHECK(std::abs(last[3] - 0.338410914927769) < 1e-4);

    const auto report = nlohmann::json::parse(siq::read_file(out("macro_report.json")));
    CHECK(report["regime"] == "endemic");
    CHECK(report["run"]["engine"] == "macro");
}

TEST_CASE("invalid parameters exit with the validation code") {
    const auto cfg = write_config("bad.cfg", std::string(kPopParams) + "engine = macro\ninit = 0.9, 0.1, 0\n");
    std::string text = siq::read_file(cfg);
    text.replace(text.find("lambda = 0.2"), 12, "lambda = 2");
    siq::write_file(cfg, text);
    CHECK(run_cli("run --config " + cfg + " --out " + out("bad")) == 2);
    CHECK(siq::read_file(out("stderr.txt")).find("lambda") != std::string::npos);
}

TEST_CASE("gillespie runs are byte-identical for a fixed seed") {
    const auto cfg = write_config("gil.cfg", std::string(kPopParams) +
                                                 "engine = gillespie\ninit = 0.99, 0.01, 0\nhorizon = 300\nseeds = 5\n");
    REQUIRE(run_cli("run --config " + cfg + " --out " + out("gil_a")) == 0);
    REQUIRE(run_cli("run --config " + cfg + " --out " + out("gil_b")) == 0);
    REQUIRE(run_cli("run --config " + cfg + " --out " + out("gil_c") + " --seed-offset 1") == 0);
    const std::string a = siq::read_file(out("gil_a_trajectory.csv"));
    CHECK(a == siq::read_file(out("gil_b_trajectory.csv")));
    CHECK(a != siq::read_file(out("gil_c_trajectory.csv")));
    CHECK(nlohmann::json::parse(siq::read_file(out("gil_c_report.json")))["run"]["seed"] == 6);
}

TEST_CASE("engine flag and ensemble output") {
    const auto cfg = write_config("ens.cfg", std::string(kPopParams) +
                                                 "init = 0.99, 0.01, 0\nhorizon = 50\nseeds = 1, 2, 3\n");
    CHECK(run_cli("run --config " + cfg + " --out " + out("noengine")) == 2);
    REQUIRE(run_cli("run --config " + cfg + " --engine activation --out " + out("ens")) == 0);
    const auto rows = lines(siq::read_file(out("ens_ensemble.csv")));
    CHECK(rows.front() == "t,mean_s,mean_i,mean_q,sd_s,sd_i,sd_q");
    CHECK(rows.size() == 52);
    CHECK(run_cli("run --config " + cfg + " --engine rk45 --out " + out("ens")) == 2);
}

TEST_CASE("individual-ode engine") {
    std::string params = kPopParams;
    params.replace(params.find("n = 10000"), 9, "n = 200");
    const auto cfg = write_config("ind.cfg", params + "engine = individual-ode\ninit = 0.9, 0.1, 0\nhorizon = 100\n");
    REQUIRE(run_cli("run --config " + cfg + " --out " + out("ind")) == 0);
    CHECK(lines(siq::read_file(out("ind_trajectory.csv"))).size() == 102);
}

TEST_CASE("I/O failures exit with the I/O code") {
    const auto cfg = write_config("io.cfg", std::string(kPopParams) + "engine = macro\ninit = 0.9, 0.1, 0\n");
    CHECK(run_cli("run --config " + cfg + " --out /nonexistent-dir/x") == 3);
    CHECK(run_cli("run --config " + out("missing.cfg")) == 3);
}

TEST_CASE("analyze prints the report") {
    const auto cfg = write_config("an.cfg", std::string(kPopParams) + "engine = macro\ninit = 0.9, 0.1, 0\n");
    REQUIRE(run_cli("analyze --config " + cfg) == 0);
    const auto report = nlohmann::json::parse(siq::read_file(out("stdout.txt")));
    CHECK(report["c_t_bar"].get<double>() == doctest::Approx(0.10816).epsilon(1e-12));
    CHECK(report["regime"] == "endemic");
}

TEST_CASE("sweep output") {
    const std::string base = R"(n = 1000
sigma = 0.4
lambda = 0.36
p_q = 0.19
beta = 0.1
v = 0.821
eta = 0.19
c_t = 0.06
sweep_x = gamma_q
sweep_y = gamma_t
)";
    const auto grid = write_config("sweep.cfg", base + "sweep_x_min = 0\nsweep_x_max = 1\nsweep_x_steps = 21\n"
                                                       "sweep_y_min = 0\nsweep_y_max = 1\nsweep_y_steps = 21\n"
                                                       "quantities = c_t_bar, xi\n");
    REQUIRE(run_cli("sweep --config " + grid + " --out " + out("grid")) == 0);
    const auto rows = lines(siq::read_file(out("grid_sweep.csv")));
    CHECK(rows.front() == "gamma_q,gamma_t,quantity,value");
    CHECK(rows.size() == 1 + 21 * 21 * 2);

    const auto single = write_config("single.cfg", base + "sweep_x_min = 0.92\nsweep_x_max = 0.92\nsweep_x_steps = 1\n"
                                                          "sweep_y_min = 0.65\nsweep_y_max = 0.65\nsweep_y_steps = 1\n"
                                                          "quantities = c_t_bar\n");
    REQUIRE(run_cli("sweep --config " + single + " --out " + out("single")) == 0);
    const auto one = lines(siq::read_file(out("single_sweep.csv")));
    REQUIRE(one.size() == 2);
    CHECK(one[1].find(",c_t_bar,") != std::string::npos);
    const double value = std::stod(one[1].substr(one[1].rfind(',') + 1));
    CHECK(value == doctest::Approx(0.0555988429720736).epsilon(1e-12));
}

TEST_CASE("convergence command") {
    const auto cfg = write_config("conv.cfg", std::string(kPopParams) +
                                                  "engine = gillespie\ninit = 0.99, 0.01, 0\nhorizon = 300\nsampling = 5\n"
                                                  "seeds = 1,2,3,4,5,6,7,8,9,10\n");
    CHECK(run_cli("convergence --config " + cfg + " --n-list 1000 --out " + out("conv1")) == 2);
    REQUIRE(run_cli("convergence --config " + cfg + " --n-list 500,5000 --out " + out("conv")) == 0);
    const auto rows = lines(siq::read_file(out("conv_convergence.csv")));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "n,seeds,sup_deviation");
    const auto small = fields(rows[1]);
    const auto large = fields(rows[2]);
    CHECK(small[0] == 500);
    CHECK(large[2] < small[2]);
}

TEST_CASE("usage errors") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate --config x") == 2);
    CHECK(run_cli("run") == 2);
    CHECK(run_cli("--help") == 0);
}
