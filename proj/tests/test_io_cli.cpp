#include "qstab/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qstab;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("QSTAB_CLI");
    return p ? p : "";
}

int run_cli(const std::string& args, const fs::path& workdir) {
    const std::string cmd = "cd " + workdir.string() + " && " + cli_path() + " " + args +
                            " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("qstab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// structural validation mirroring schemas/sod_report.schema.json
void check_sod_shape(const io::Json& j) {
    REQUIRE(j.contains("clusters"));
    REQUIRE(j.contains("lattice_check"));
    REQUIRE(j.contains("genericity"));
    REQUIRE(j.contains("spanning"));
    for (const auto& c : j["clusters"]) {
        REQUIRE(c.contains("alpha"));
        REQUIRE(c["alpha"].contains("re"));
        REQUIRE(c["alpha"].contains("im"));
        REQUIRE(c.contains("gamma"));
        for (const auto& m : c["members"]) {
            REQUIRE(m.contains("label"));
            REQUIRE(m.contains("class"));
            REQUIRE(m.contains("beta"));
            REQUIRE(m.contains("limit_Z"));
        }
    }
    for (const auto& s : j["spanning"]) {
        REQUIRE(s.contains("r"));
        REQUIRE(s.contains("dim_F"));
        REQUIRE(s.contains("dim_span"));
        const std::string status = s["status"].get<std::string>();
        REQUIRE((status == "holds" || status == "deficient"));
    }
}

}  // namespace

TEST_CASE("model JSON round trip") {
    const gw::CohModel m = gw::builtin_p1(Complex(0.25, 0.5));
    const io::Json j = io::model_to_json(m);
    const gw::CohModel back = io::model_from_json(j);
    CHECK(back.dim_x == m.dim_x);
    CHECK(back.basis.size() == m.basis.size());
    CHECK(back.pairing.entries == m.pairing.entries);
    CHECK(back.c1_cup.entries == m.c1_cup.entries);
    CHECK(back.curve_classes.size() == 1);
    CHECK(back.curve_classes[0].t_d.entries == m.curve_classes[0].t_d.entries);
    CHECK(back.curve_classes[0].omega_dot_d == m.curve_classes[0].omega_dot_d);
    CHECK(gw::validate_model(back).pass);

    io::Json bad = j;
    bad["pairing"][0] = {1, 2, 3};
    CHECK_THROWS_AS(io::model_from_json(bad), std::invalid_argument);
}

TEST_CASE("decomposition JSON round trip") {
    const mutation::PairedLattice dec = mutation::p2_lattice();
    const io::Json j = io::decomposition_to_json(dec);
    const mutation::PairedLattice back = io::decomposition_from_json(j);
    CHECK(back.rank == 3);
    CHECK(back.gram == dec.gram);
    CHECK(back.summands == dec.summands);
}

TEST_CASE("charge trace CSV round trip") {
    std::vector<sod::ChargeSeries> series(2);
    series[0].label = "A";
    series[1].label = "B";
    for (int i = 0; i < 24; ++i) {
        const double t = 1.0 + i;
        series[0].t.push_back(t);
        series[1].t.push_back(t);
        series[0].Z.push_back(Complex(std::exp(0.1 * t), -t));
        series[1].Z.push_back(Complex(1e-30 * t, 1.0 / t));
    }
    const fs::path dir = fresh_dir("csv");
    {
        std::ofstream out(dir / "charges.csv");
        io::write_charges(out, series);
    }
    const auto back = io::load_charges((dir / "charges.csv").string());
    REQUIRE(back.size() == 2);
    CHECK(back[0].label == "A");
    CHECK(back[1].label == "B");
    for (int i = 0; i < 24; ++i) {
        CHECK(back[0].t[i] == series[0].t[i]);
        CHECK(back[0].Z[i] == series[0].Z[i]);  // %.17g round-trips doubles
        CHECK(back[1].Z[i] == series[1].Z[i]);
    }
}

TEST_CASE("cli: p1-path end to end with byte-identical reruns") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path dir = fresh_dir("p1");
    const std::string args = "p1-path --b 0 --a 0 --phase pi/2 --t1 60 --output-dir .";
    CHECK(run_cli(args, dir) == 0);
    REQUIRE(fs::exists(dir / "p1_sod.json"));
    REQUIRE(fs::exists(dir / "p1_path.csv"));

    io::Json j;
    std::ifstream(dir / "p1_sod.json") >> j;
    check_sod_shape(j);
    REQUIRE(j["clusters"].size() == 2);
    CHECK(j["clusters"][0]["alpha"]["im"].get<double>() < 0.0);
    CHECK(j["clusters"][1]["alpha"]["im"].get<double>() > 0.0);
    CHECK(j["lattice_check"] == "direct_sum");

    const std::string sod_first = slurp(dir / "p1_sod.json");
    const std::string path_first = slurp(dir / "p1_path.csv");
    CHECK(run_cli(args, dir) == 0);
    CHECK(slurp(dir / "p1_sod.json") == sod_first);
    CHECK(slurp(dir / "p1_path.csv") == path_first);
}

TEST_CASE("cli: boundary case exits 2") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path dir = fresh_dir("boundary");
    CHECK(run_cli("p1-path --b 0 --a 0 --t1 40", dir) == 2);
}

TEST_CASE("cli: verify-glue") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path dir = fresh_dir("glue");
    CHECK(run_cli("p1-path --verify-glue", dir) == 0);
    CHECK(fs::exists(dir / "glue_check.csv"));
}

TEST_CASE("cli: curve-path canonical") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path dir = fresh_dir("curve");
    CHECK(run_cli("curve-path --genus 2 --canonical --theta 0", dir) == 0);
    const std::string out = slurp(dir / "cli_stdout.txt");
    CHECK(out.find("lifts = true") != std::string::npos);
    CHECK(out.find("two-step filtration") != std::string::npos);
    CHECK(fs::exists(dir / "curve_path.csv"));
}

TEST_CASE("cli: contour against the oracle") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path dir = fresh_dir("contour");
    CHECK(run_cli("contour --kind line --kappa-t 1", dir) == 0);
    const std::string out = slurp(dir / "cli_stdout.txt");
    const auto pos = out.find("abs difference ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(out.substr(pos + 15)) < 1e-6);
}

TEST_CASE("cli: qde trace and validate-model") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path dir = fresh_dir("qde");
    CHECK(run_cli("qde --model builtin:curve:2 --form raw --t1 10 --points 32", dir) == 0);
    REQUIRE(fs::exists(dir / "qde_trace.csv"));
    std::ifstream trace(dir / "qde_trace.csv");
    std::string header;
    std::getline(trace, header);
    CHECK(header == "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11,log_gauge");

    CHECK(run_cli("validate-model --model builtin:p1", dir) == 0);
    CHECK(run_cli("validate-model --model missing_file.json", dir) == 3);
}

TEST_CASE("cli: mutate and sod-from-trace") {
    REQUIRE_FALSE(cli_path().empty());
    const fs::path dir = fresh_dir("mutate");
    {
        std::ofstream dec(dir / "dec.json");
        dec << io::decomposition_to_json(mutation::p1_lattice()).dump(2);
    }
    CHECK(run_cli("mutate --file dec.json --word L1 --output out.json", dir) == 0);
    io::Json j;
    std::ifstream(dir / "out.json") >> j;
    CHECK(j["summands"][0][0] == io::Json::array({-1, 1}));
    CHECK(j["summands"][1][0] == io::Json::array({1, 0}));
    CHECK(j["history"][0] == "L1");

    // synthetic two-exponential trace through the full extractor
    {
        std::vector<sod::ChargeSeries> series(2);
        series[0].label = "up";
        series[1].label = "down";
        const Grid grid(1.0, 101.0, 512);
        for (int i = 0; i < grid.points; ++i) {
            const double t = grid[i];
            series[0].t.push_back(t);
            series[1].t.push_back(t);
            series[0].Z.push_back(std::exp(Complex(0.2, 1.0) * t));
            series[1].Z.push_back(2.0 * std::exp(Complex(-0.1, -0.5) * t));
        }
        std::ofstream out(dir / "trace.csv");
        io::write_charges(out, series);
    }
    CHECK(run_cli("sod-from-trace --trace trace.csv --output sod.json", dir) == 0);
    io::Json sod;
    std::ifstream(dir / "sod.json") >> sod;
    REQUIRE(sod["clusters"].size() == 2);
    CHECK(sod["clusters"][0]["members"][0]["label"] == "down");
    CHECK(sod["clusters"][1]["members"][0]["label"] == "up");
    CHECK(sod["lattice_check"] == "direct_sum");
}
