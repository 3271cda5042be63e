#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "longmem/cli.hpp"

using namespace longmem;
using namespace longmem::cli;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("longmem_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code;
    try {
        code = dispatch(parse_config(args), out, err);
    } catch (const config_error& e) {
        err << e.what();
        code = 2;
    }
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

} // namespace

TEST_CASE("config parsing: precedence, unknown keys, domains", "[cli]") {
    SECTION("flags override file values") {
        TempDir tmp;
        std::ofstream(tmp.file("run.conf")) << "theta=0.5\nn=100\n# comment\nseed=9\n";
        const auto cfg = parse_config(
            {"mc", "--config", tmp.file("run.conf"), "--theta", "0.6"});
        CHECK(cfg.kv.at("theta") == "0.6");
        CHECK(cfg.kv.at("n") == "100");
        CHECK(cfg.kv.at("seed") == "9");
    }
    SECTION("unknown keys are rejected") {
        CHECK_THROWS_AS(parse_config({"mc", "--bogus", "1"}), config_error);
        CHECK_THROWS_AS(parse_config({"simulate", "--grid", "0:1:0.1"}), config_error);
        CHECK_THROWS_AS(parse_config({"nonsense"}), config_error);
    }
    SECTION("environment seed is a fallback only") {
        const auto with_env = parse_config({"mc"}, std::string("321"));
        CHECK(with_env.kv.at("seed") == "321");
        const auto with_flag = parse_config({"mc", "--seed", "5"}, std::string("321"));
        CHECK(with_flag.kv.at("seed") == "5");
    }
    SECTION("domain violations exit 2") {
        std::string err;
        CHECK(run({"simulate", "--model", "fgn", "--H", "1.2", "--n", "10"}, nullptr, &err) == 2);
        CHECK(!err.empty());
        CHECK(run({"mc", "--theta", "1.5", "--n", "10", "--reps", "2"}) == 2);
        CHECK(run({"fmap", "--grid", "nonsense"}) == 2);
    }
}

TEST_CASE("print-config round trips losslessly", "[cli]") {
    const auto cfg = parse_config({"mc", "--model", "fgn", "--H", "0.58", "--theta", "0.6",
                                   "--alpha", "0.4", "--n", "3000", "--reps", "2000",
                                   "--seed", "7"});
    std::ostringstream echoed;
    print_config(cfg, echoed);

    TempDir tmp;
    std::ofstream(tmp.file("echo.conf")) << echoed.str();
    const auto reparsed = parse_config({"mc", "--config", tmp.file("echo.conf")});
    CHECK(reparsed == cfg);
}

TEST_CASE("simulate then estimate round trip through CSV", "[cli]") {
    TempDir tmp;
    const std::string path = tmp.file("path.csv");
    const int sim = run({"simulate", "--model", "fgn", "--H", "0.58", "--theta", "0.6",
                         "--alpha", "0.4", "--n", "3000", "--seed", "1", "--out", path});
    REQUIRE(sim == 0);

    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,value");
    std::size_t rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 3000);

    std::string out;
    const int est = run({"estimate", "--model", "fgn", "--H", "0.58", "--in", path}, &out);
    CHECK(est == 0);
    CHECK(out.find("theta_hat=") != std::string::npos);
    // theta_hat lands in a wide Monte Carlo band around 0.6
    const auto pos = out.find("theta_hat=") + 10;
    const double theta_hat = std::stod(out.substr(pos));
    CHECK(theta_hat > 0.35);
    CHECK(theta_hat < 0.85);
}

TEST_CASE("estimate exits 4 on a clamped path", "[cli]") {
    TempDir tmp;
    const std::string path = tmp.file("flat.csv");
    std::ofstream(tmp.file("flat.csv")) << "1\n1\n1\n1\n1\n";
    std::string out;
    CHECK(run({"estimate", "--model", "white", "--in", path}, &out) == 4);
    CHECK(out.find("clamped=1") != std::string::npos);
}

TEST_CASE("fmap reproduces the white-noise closed form", "[cli]") {
    std::string out;
    REQUIRE(run({"fmap", "--model", "white", "--grid", "0.2:0.8:0.3"}, &out) == 0);
    std::istringstream is(out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "theta,f");
    std::getline(is, line);
    CHECK(line.substr(0, 4) == "0.2,");
    CHECK(std::stod(line.substr(4)) == Catch::Approx(1.0 / 0.96).epsilon(1e-12));
}

TEST_CASE("constants subcommand prints the block and cov csv", "[cli]") {
    TempDir tmp;
    std::string out, err;
    const int code = run({"constants", "--model", "arfima", "--d", "0.08", "--theta", "0.6",
                          "--cov_out", tmp.file("cov.csv"), "--cov_lags", "5"},
                         &out, &err);
    REQUIRE(code == 0);
    CHECK(out.find("sigma_H_sq=") != std::string::npos);
    CHECK(out.find("H=0.58") != std::string::npos); // d + 1/2

    std::ifstream cov(tmp.file("cov.csv"));
    std::string header;
    std::getline(cov, header);
    CHECK(header == "lag,value");
    std::size_t rows = 0;
    for (std::string line; std::getline(cov, line);) ++rows;
    CHECK(rows == 6);
}

TEST_CASE("near-boundary H warns on stderr", "[cli]") {
    std::string out, err;
    REQUIRE(run({"constants", "--model", "fgn", "--H", "0.5005", "--theta", "0.3"},
                &out, &err) == 0);
    CHECK(err.find("warning") != std::string::npos);
}

TEST_CASE("mc subcommand writes replication CSV, summary and grid", "[cli]") {
    TempDir tmp;
    std::string summary;
    const int code = run({"mc", "--model", "white", "--n", "128", "--reps", "50",
                          "--seed", "3", "--out", tmp.file("reps.csv"), "--grid_out",
                          tmp.file("grid.csv")},
                         &summary);
    REQUIRE(code == 0);
    CHECK(summary.find("clamp_count=") != std::string::npos);

    std::ifstream is(tmp.file("reps.csv"));
    std::string header;
    std::getline(is, header);
    CHECK(header == "rep,theta_hat,alpha_hat,s2,g1,g2,clamped");

    std::ifstream gs(tmp.file("grid.csv"));
    std::getline(gs, header);
    CHECK(header == "x_center,y_center,count");
    std::size_t rows = 0;
    for (std::string line; std::getline(gs, line);) ++rows;
    CHECK(rows == 40 * 40);
}

TEST_CASE("sweep subcommand emits the MAE table", "[cli]") {
    std::string out;
    const int code = run({"sweep", "--model", "white", "--n_grid", "64,128", "--reps", "30",
                          "--seed", "2"},
                         &out);
    REQUIRE(code == 0);
    std::istringstream is(out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,mae_theta,mae_alpha");
    std::getline(is, line);
    CHECK(line.substr(0, 3) == "64,");
}

TEST_CASE("binary series export round trips", "[cli]") {
    const Series s = simulate_ar1(CovarianceModel::white(), 0.6, 0.4, 64, SeedSpec{4, 0});
    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    write_series_binary(buf, s);
    const std::vector<double> back = read_series_binary(buf);
    CHECK(back == s.values);
}

TEST_CASE("check subcommand passes", "[cli]") {
    std::string out;
    CHECK(run({"check"}, &out) == 0);
    CHECK(out.find("FAIL") == std::string::npos);
}
