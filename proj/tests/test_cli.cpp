#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slb/io.hpp"

namespace fs = std::filesystem;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::string cli_path() {
    const char* p = std::getenv("SLB_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string& args) {
    const int rc = std::system((cli_path() + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Csv {
    std::vector<std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Csv parse_csv(const fs::path& p) {
    Csv out;
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            out.metadata.push_back(line.substr(2));
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!header_done) {
            out.columns = cells;
            header_done = true;
            continue;
        }
        std::vector<double> vals;
        for (const auto& c : cells) vals.push_back(std::stod(c));
        out.rows.push_back(vals);
    }
    return out;
}

fs::path sandbox() {
    const fs::path dir = fs::temp_directory_path() / "slbcli_test";
    fs::create_directories(dir);
    return dir;
}

void write_circle(const fs::path& p, double eps, int modes = 8) {
    slb::io::save_json(p.string(),
                       slb::io::curve_to_json(slb::geometry::make_circle(
                           1.0 / (2.0 * M_PI), eps, modes)));
}

} // namespace

TEST_CASE("multipliers table") {
    const auto dir = sandbox();
    const auto out = dir / "mult.csv";
    REQUIRE(run("multipliers --eps 0.01 --kmax 16 --out " + out.string()) == 0);
    const auto csv = parse_csv(out);
    CHECK(csv.rows.size() == 33);
    CHECK(csv.columns == std::vector<std::string>{"k", "z", "m_t_inv", "m_n_inv", "m_t",
                                                  "m_n", "bi_t", "bi_n"});
    REQUIRE(csv.metadata.size() >= 4);
    CHECK(csv.metadata[0].rfind("slbcli", 0) == 0);

    for (const auto& row : csv.rows) {
        // bi columns replicate the direct eigenvalues
        CHECK_THAT(row[6], WithinRel(row[2], 1e-10));
        CHECK_THAT(row[7], WithinRel(row[3], 1e-10));
        // reciprocals
        CHECK_THAT(row[4], WithinRel(1.0 / row[2], 1e-14));
    }

    // rerun is byte-identical
    const auto out2 = dir / "mult2.csv";
    REQUIRE(run("multipliers --eps 0.01 --kmax 16 --out " + out2.string()) == 0);
    CHECK(slurp(out) == slurp(out2));
}

TEST_CASE("verify suites") {
    const auto dir = sandbox();
    const auto rep = dir / "verify.json";
    REQUIRE(run("verify --suite bessel --out " + rep.string()) == 0);
    const auto j = slb::io::load_json(rep.string());
    CHECK(j.at("suite") == "bessel");
    CHECK(j.at("pass").get<bool>());
    for (const auto& c : j.at("checks")) {
        CHECK(c.contains("name"));
        CHECK(c.contains("status"));
        CHECK(c.contains("measured"));
        CHECK(c.contains("bound"));
    }
    REQUIRE(run("verify --suite identities") == 0);
    REQUIRE(run("verify --suite geometry") == 0);
}

TEST_CASE("dtn solve, linearity through the file interface") {
    const auto dir = sandbox();
    write_circle(dir / "c.json", 0.03);
    const std::size_t n = 24;
    slb::fields::PeriodicVectorField va(n), vb(n), vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / n;
        va[i] = Eigen::Vector3d(std::cos(2 * M_PI * s), 0.0, 0.0);
        vb[i] = Eigen::Vector3d(0.0, 0.0, std::sin(4 * M_PI * s));
        vs[i] = va[i] + vb[i];
    }
    slb::io::save_json((dir / "va.json").string(), slb::io::field_to_json(va));
    slb::io::save_json((dir / "vb.json").string(), slb::io::field_to_json(vb));
    slb::io::save_json((dir / "vs.json").string(), slb::io::field_to_json(vs));

    const std::string base = "--curve " + (dir / "c.json").string() + " --ns 24 --ntheta 8 ";
    REQUIRE(run("dtn " + base + "--field " + (dir / "va.json").string() + " --out-csv " +
                (dir / "fa.csv").string()) == 0);
    REQUIRE(run("dtn " + base + "--field " + (dir / "vb.json").string() + " --out-csv " +
                (dir / "fb.csv").string()) == 0);
    REQUIRE(run("dtn " + base + "--field " + (dir / "vs.json").string() + " --out-csv " +
                (dir / "fs.csv").string() + " --out-report " + (dir / "rep.json").string()) ==
            0);
    const auto fa = parse_csv(dir / "fa.csv"), fb = parse_csv(dir / "fb.csv"),
               fsum = parse_csv(dir / "fs.csv");
    for (std::size_t i = 0; i < fa.rows.size(); ++i)
        for (int d = 1; d <= 3; ++d)
            CHECK_THAT(fsum.rows[i][d], WithinAbs(fa.rows[i][d] + fb.rows[i][d], 1e-9));

    const auto rep = slb::io::load_json((dir / "rep.json").string());
    CHECK(rep.at("residual").get<double>() <= 1e-10);

    // missing input file
    CHECK(run("dtn --curve nope.json --field " + (dir / "va.json").string()) == 2);
    // bad arguments
    CHECK(run("dtn --curve") == 2);
}

TEST_CASE("evolve run directory") {
    const auto dir = sandbox();
    write_circle(dir / "c.json", 0.05);
    const auto rundir = dir / "run";
    fs::remove_all(rundir);
    REQUIRE(run("evolve --curve " + (dir / "c.json").string() +
                " --dt 5e-6 --steps 6 --snapshot-every 2 --outdir " + rundir.string()) == 0);
    const auto traj = parse_csv(rundir / "trajectory.csv");
    REQUIRE(traj.rows.size() == 7);

    // lambda column matches the length of the saved snapshots
    for (std::size_t i : {std::size_t(0), std::size_t(2), std::size_t(4)}) {
        char name[64];
        std::snprintf(name, sizeof(name), "curve_%06zu.json", i);
        const auto c = slb::io::curve_from_json(slb::io::load_json((rundir / name).string()));
        CHECK_THAT(traj.rows[i][1], WithinRel(slb::geometry::compute_length(c), 1e-10));
    }

    // deterministic rerun
    const auto rundir2 = dir / "run2";
    fs::remove_all(rundir2);
    REQUIRE(run("evolve --curve " + (dir / "c.json").string() +
                " --dt 5e-6 --steps 6 --snapshot-every 2 --outdir " + rundir2.string()) == 0);
    CHECK(slurp(rundir / "trajectory.csv") == slurp(rundir2 / "trajectory.csv"));

    // a run that collapses the circle past the admissible length ball
    // aborts with exit code 3 and still writes the final state
    const auto rundir3 = dir / "run3";
    fs::remove_all(rundir3);
    CHECK(run("evolve --curve " + (dir / "c.json").string() +
              " --dt 5e-5 --steps 100 --outdir " + rundir3.string()) == 3);
    CHECK(fs::exists(rundir3 / "final_curve.json"));
    const auto rep = slb::io::load_json((rundir3 / "report.json").string());
    CHECK(rep.at("abort") != "none");
}

TEST_CASE("converge studies") {
    const auto dir = sandbox();
    const auto out = dir / "quad.csv";
    REQUIRE(run("converge --study quadrature --out " + out.string()) == 0);
    const auto csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 3);
    // error decreases monotonically, ratios at least 2
    CHECK(csv.rows[1][1] < csv.rows[0][1]);
    CHECK(csv.rows[2][1] < csv.rows[1][1]);
    CHECK(csv.rows[1][2] >= 2.0);
    CHECK(csv.rows[2][2] >= 2.0);
}
