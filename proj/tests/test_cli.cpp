#include <catch_amalgamated.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string cli = PDEKIT_CLI_PATH;
const fs::path tmp_dir = PDEKIT_TMP_DIR;

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        rows.push_back(row);
    }
    return rows;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TmpSetup {
    TmpSetup() { fs::create_directories(tmp_dir); }
} tmp_setup;

}  // namespace

TEST_CASE("solve heat writes the damped profile") {
    const fs::path prob = tmp_dir / "heat.prob";
    const fs::path out = tmp_dir / "heat.csv";
    write_file(prob,
               "kind = heat\n"
               "phi = sin(x)\n"
               "t = 0.1\n"
               "[grid]\n"
               "x0 = -1\n"
               "x1 = 1\n"
               "nx = 4\n");
    CHECK(run("solve " + prob.string() + " --out " + out.string()) == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() == 5);
    for (const auto& r : rows)
        CHECK(r[1] == Catch::Approx(std::exp(-0.1) * std::sin(r[0])).margin(1e-9));
}

TEST_CASE("solve ivp integrates the exponential") {
    const fs::path prob = tmp_dir / "ivp.prob";
    const fs::path out = tmp_dir / "ivp.csv";
    write_file(prob,
               "kind = ivp\n"
               "f = x\n"
               "y0 = 1\n"
               "[grid]\n"
               "t0 = 0\n"
               "t1 = 1\n"
               "nt = 200\n");
    CHECK(run("solve " + prob.string() + " --out " + out.string()) == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() == 201);
    CHECK(rows.back()[1] == Catch::Approx(std::exp(1.0)).margin(1e-8));
}

TEST_CASE("solve dalembert matches the half-sum formula") {
    const fs::path prob = tmp_dir / "wave1.prob";
    const fs::path out = tmp_dir / "wave1.csv";
    write_file(prob,
               "kind = dalembert\n"
               "u0 = cos(x)\n"
               "u1 = 0\n"
               "t = 0.4\n"
               "[grid]\n"
               "x0 = 0\n"
               "x1 = 2\n"
               "nx = 4\n");
    CHECK(run("solve " + prob.string() + " --out " + out.string()) == 0);
    for (const auto& r : read_csv(out))
        CHECK(r[1]
              == Catch::Approx(0.5 * (std::cos(r[0] + 0.4) + std::cos(r[0] - 0.4)))
                     .margin(1e-10));
}

TEST_CASE("verify heat_kernel passes") {
    const fs::path prob = tmp_dir / "hk.prob";
    write_file(prob, "kind = heat_kernel\nt = 0.5\ntol = 1e-8\n");
    CHECK(run("verify " + prob.string() + " --out "
              + (tmp_dir / "hk.csv").string()) == 0);
}

TEST_CASE("verify max_principle distinguishes pass and fail") {
    const fs::path good = tmp_dir / "mp_good.prob";
    write_file(good,
               "kind = max_principle\n"
               "u = t\n"
               "mode = heat\n"
               "[grid]\n"
               "t0 = 0\nt1 = 1\nnt = 5\n"
               "x0 = 0\nx1 = 1\nnx = 5\n");
    CHECK(run("verify " + good.string() + " --out "
              + (tmp_dir / "mp_good.csv").string()) == 0);

    const fs::path bad = tmp_dir / "mp_bad.prob";
    write_file(bad,
               "kind = max_principle\n"
               "u = t*sin(3.141592653589793*x)\n"
               "mode = heat\n"
               "[grid]\n"
               "t0 = 0\nt1 = 1\nnt = 4\n"
               "x0 = 0\nx1 = 1\nnx = 4\n");
    CHECK(run("verify " + bad.string() + " --out "
              + (tmp_dir / "mp_bad.csv").string()) == 2);
}

TEST_CASE("converge wave_residual reports second order") {
    const fs::path prob = tmp_dir / "wr.prob";
    const fs::path out = tmp_dir / "wr.csv";
    write_file(prob, "kind = wave_residual\nfactors = 1, 2, 4\n");
    CHECK(run("converge " + prob.string() + " --out " + out.string()) == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2][1] < rows[0][1]);
}

TEST_CASE("converge wong_zakai is seeded and reproducible") {
    const fs::path prob = tmp_dir / "wz.prob";
    const fs::path out1 = tmp_dir / "wz1.csv";
    const fs::path out2 = tmp_dir / "wz2.csv";
    const fs::path out3 = tmp_dir / "wz3.csv";
    write_file(prob,
               "kind = wong_zakai\n"
               "eps = 0.1, 0.05\n"
               "n_paths = 100\n"
               "seed = 2024\n"
               "slope_min = 0.3\n");
    CHECK(run("converge " + prob.string() + " --out " + out1.string()) == 0);
    CHECK(run("converge " + prob.string() + " --out " + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(run("converge " + prob.string() + " --seed 999 --out " + out3.string()) == 0);
    CHECK(slurp(out1) != slurp(out3));
    auto rows = read_csv(out1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][1] < rows[0][1]);  // mse shrinks with eps
}

TEST_CASE("usage and parse errors exit with code 3") {
    CHECK(run("") == 3);
    CHECK(run("solve " + (tmp_dir / "missing.prob").string()) == 3);

    const fs::path bad = tmp_dir / "bad_kind.prob";
    write_file(bad, "kind = no_such_solver\n");
    CHECK(run("solve " + bad.string()) == 3);

    const fs::path mangled = tmp_dir / "mangled.prob";
    write_file(mangled, "kind heat\n");
    CHECK(run("solve " + mangled.string()) == 3);
}

TEST_CASE("invalid problem data exits with code 2") {
    const fs::path prob = tmp_dir / "neg_t.prob";
    write_file(prob,
               "kind = heat\n"
               "phi = sin(x)\n"
               "t = -1\n"
               "[grid]\n"
               "x0 = 0\nx1 = 1\nnx = 2\n");
    CHECK(run("solve " + prob.string()) == 2);
}
