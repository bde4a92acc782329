// Command-line front end: verification suites, multiplier tables, static
// boundary-value solves, evolution runs and convergence studies, all with
// machine-readable outputs.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage/input error,
// 3 simulation abort.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slb/slb.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace slb;

namespace {

constexpr const char* kVersion = "slbcli 1.0.0";

std::vector<std::string> base_metadata(const std::string& command,
                                       const std::string& config_echo,
                                       const std::vector<std::string>& input_files = {}) {
    std::vector<std::string> md{std::string(kVersion), "command: " + command,
                                "config: " + config_echo};
    for (const auto& f : input_files)
        md.push_back("input-sha1: " + f + " " + io::sha1_of_file(f));
    return md;
}

// ---------------------------------------------------------------------------

struct Check {
    std::string name;
    double measured;
    double bound;
    bool pass() const { return measured <= bound; }
};

json checks_to_json(const std::string& suite, const std::vector<Check>& checks) {
    json arr = json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"status", c.pass() ? "pass" : "fail"},
                       {"measured", c.measured},
                       {"bound", c.bound}});
        all = all && c.pass();
    }
    return json{{"suite", suite}, {"checks", arr}, {"pass", all}};
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> zs(n);
    for (int i = 0; i < n; ++i)
        zs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return zs;
}

std::vector<Check> suite_bessel() {
    std::vector<Check> out;
    double wronskian = 0.0;
    for (double z : log_spaced(1e-3, 50.0, 200)) {
        const specfun::ScaledBessel b(z);
        wronskian = std::max(wronskian, std::fabs(z * (b.i0k1() + b.i1k0()) - 1.0));
    }
    out.push_back({"wronskian", wronskian, 1e-12});

    double kdiff = 0.0;
    for (double z : log_spaced(1e-3, 500.0, 150)) {
        const double d = specfun::ratio(specfun::RatioKind::K1K0, z) -
                         specfun::ratio(specfun::RatioKind::K0K1, z);
        kdiff = std::max(kdiff, std::max(-d, d - 1.0 / z));
    }
    out.push_back({"k_ratio_difference_bound", kdiff, 1e-12});

    double kexp = 0.0;
    for (double z : log_spaced(1.0, 30.0, 100)) {
        const double g = specfun::ratio(specfun::RatioKind::K1K0, z) - 1.0 - 0.5 / z +
                         0.125 / (z * z);
        kexp = std::max(kexp, std::max(-g, g - 0.125 / (z * z * z)));
    }
    out.push_back({"k1k0_expansion_bound", kexp, 1e-12});

    double idiff = 0.0;
    for (double z : log_spaced(0.1, 500.0, 150)) {
        const double d = z * (specfun::ratio(specfun::RatioKind::I0I1, z) -
                              specfun::ratio(specfun::RatioKind::I1I0, z));
        idiff = std::max(idiff, std::max(1.0 - d, d - 2.0));
    }
    out.push_back({"i_ratio_difference_bracket", idiff, 0.0});

    double fd = 0.0;
    for (double z : log_spaced(0.05, 20.0, 60)) {
        const double h = 1e-6;
        for (auto kind : {specfun::RatioKind::K1K0, specfun::RatioKind::K0K1,
                          specfun::RatioKind::I1I0, specfun::RatioKind::I0I1}) {
            const double num =
                (specfun::ratio(kind, z + h) - specfun::ratio(kind, z - h)) / (2.0 * h);
            fd = std::max(fd, std::fabs(specfun::ratio_derivative(kind, z) - num) /
                                  (1.0 + std::fabs(num)));
        }
    }
    out.push_back({"ratio_derivative_vs_fd", fd, 1e-6});
    return out;
}

std::vector<Check> suite_symbols() {
    std::vector<Check> out;
    double comp_t = 0.0, comp_n = 0.0;
    for (double z : log_spaced(0.01, 10.0, 50)) {
        const double mt = multipliers::dtn_tangential_of_z(z);
        const double mn = multipliers::dtn_normal_of_z(z);
        comp_t = std::max(comp_t,
                          std::fabs(multipliers::dtn_via_boundary_integral_tangential_of_z(z) -
                                    mt) / mt);
        comp_n = std::max(comp_n,
                          std::fabs(multipliers::dtn_via_boundary_integral_normal_of_z(z) -
                                    mn) / mn);
    }
    out.push_back({"composition_identity_tangential", comp_t, 1e-10});
    out.push_back({"composition_identity_normal", comp_n, 1e-10});

    double inv_t = 0.0, inv_n = 0.0;
    for (double z : log_spaced(0.01, 10.0, 50)) {
        const multipliers::SymbolQuery q(z / (2.0 * M_PI * 41.0), 41);
        const auto f = multipliers::single_layer_forward_tangential(q);
        const auto v = multipliers::single_layer_inverse_tangential(q);
        const std::complex<double> im(0.0, 1.0);
        Eigen::Matrix2cd mf, mi;
        mf << f.a, im * f.b, -im * f.b, f.c;
        mi << v.m_tA, -im * v.m_tB, im * v.m_tB, v.m_tC;
        inv_t = std::max(inv_t,
                         (mf * mi - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
        const auto fn = multipliers::single_layer_forward_normal(q);
        const auto vn = multipliers::single_layer_inverse_normal(q);
        Eigen::Matrix3cd nf, ni;
        nf << fn.q_H, fn.q_I, -im * fn.q_J, fn.q_I, fn.q_K, -im * fn.q_L, im * fn.q_J,
            im * fn.q_L, fn.q_M;
        ni << vn.m_nA, vn.m_nB, im * vn.m_nC, vn.m_nB, vn.m_nD, -im * vn.m_nE, -im * vn.m_nC,
            im * vn.m_nE, vn.m_nF;
        inv_n = std::max(inv_n,
                         (nf * ni - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff());
    }
    out.push_back({"forward_inverse_identity_tangential", inv_t, 1e-10});
    out.push_back({"forward_inverse_identity_normal", inv_n, 1e-10});

    double positivity = 0.0;  // stays 0 while all eigenvalues are positive
    for (double eps : {0.1, 0.01, 0.001})
        for (long k : {1L, 2L, 8L, 64L}) {
            const multipliers::SymbolQuery q(eps, k);
            if (multipliers::dtn_eigen_tangential(q) <= 0.0) positivity = 1.0;
            if (multipliers::dtn_eigen_normal(q) <= 0.0) positivity = 1.0;
        }
    out.push_back({"dtn_positivity", positivity, 0.0});
    return out;
}

std::vector<Check> suite_quadrature() {
    std::vector<Check> out;
    const double eps = 0.05;
    layers::StraightCylinderRule rule{eps, 128, 16, 16};
    double worst = 0.0;
    for (long k : {1L, 2L}) {
        const double st = (std::floor(0.171 * 128) + 0.5) / 128.0;
        const double ck = std::cos(2.0 * M_PI * k * st), sk = std::sin(2.0 * M_PI * k * st);
        std::vector<double> th;
        const multipliers::SymbolQuery q(eps, k);
        const auto us = layers::straight_layer_on_ring(
            rule, layers::LayerKind::Single, layers::DensityDirection::TangentialZ, k, st, th,
            layers::QuadratureVariant::StraightSubtraction);
        const auto p = layers::project_ring(us, th);
        const auto fw = multipliers::single_layer_forward_tangential(q);
        worst = std::max(worst, std::fabs(p.coef_ez / (eps * ck) - fw.a) / std::fabs(fw.a));
        worst = std::max(worst, std::fabs(p.coef_er / (eps * sk) - fw.b) / std::fabs(fw.b));
        const auto ud = layers::straight_layer_on_ring(
            rule, layers::LayerKind::Double, layers::DensityDirection::NormalX, k, st, th,
            layers::QuadratureVariant::StraightSubtraction);
        const auto pd = layers::project_ring(ud, th);
        const auto dn = multipliers::double_layer_normal(q.z());
        worst = std::max(worst,
                         std::fabs(pd.coef_cos_er / ck - dn.q_nN) / std::fabs(dn.q_nN));
    }
    out.push_back({"straight_rule_vs_symbols", worst, 2e-3});
    return out;
}

std::vector<Check> suite_identities() {
    std::vector<Check> out;
    double worst = 0.0;
    for (double z : {0.5, 2.0, 10.0})
        for (int index = 1; index <= 6; ++index) {
            const auto id = layers::bessel_theta_identity(index, z);
            worst = std::max(worst, std::fabs(id.lhs - id.rhs));
        }
    out.push_back({"theta_integral_identities", worst, 1e-8});
    return out;
}

std::vector<Check> suite_geometry() {
    std::vector<Check> out;
    const auto circle = geometry::make_circle(1.0 / (2.0 * M_PI), 0.05);
    const auto f = geometry::periodicized_frame(circle);
    out.push_back({"circle_kappa3", std::fabs(f.kappa3()), 1e-10});
    double k1dev = 0.0;
    for (std::size_t i = 0; i < f.grid_size(); i += 16)
        k1dev = std::max(k1dev, std::fabs(f.kappa1[i] - 2.0 * M_PI));
    out.push_back({"circle_kappa1", k1dev, 1e-8});

    const auto coil = geometry::rescale_to_unit_length(geometry::make_coil(0.3, 0.01, 48));
    const auto fc = geometry::periodicized_frame(coil);
    out.push_back({"coil_kappa3_in_range", std::fabs(fc.kappa3()) <= M_PI ? 0.0 : 1.0, 0.0});
    double ortho = 0.0;
    for (std::size_t i = 0; i < fc.grid_size(); i += 32) {
        ortho = std::max(ortho, std::fabs(fc.e_t[i].dot(fc.e_n1[i])));
        ortho = std::max(ortho, std::fabs(fc.e_n1[i].norm() - 1.0));
    }
    out.push_back({"coil_frame_orthonormality", ortho, 1e-8});
    const auto b = geometry::bishop_frame(coil);
    const double beta = fc.kappa3();
    const Eigen::Vector3d closed =
        std::cos(beta) * b.e1_end + std::sin(beta) * b.e2_end;
    out.push_back({"coil_frame_periodicity", (closed - fc.e_n1[0]).norm(), 1e-8});
    return out;
}

// ---------------------------------------------------------------------------

int cmd_multipliers(double eps, long kmax, const std::string& out_path) {
    const auto mt = multipliers::build_table("dtn_t", eps, kmax);
    const auto mn = multipliers::build_table("dtn_n", eps, kmax);
    const auto bt = multipliers::build_table("bi_t", eps, kmax);
    const auto bn = multipliers::build_table("bi_n", eps, kmax);
    std::ostringstream cfg;
    cfg << "eps=" << io::format_double(eps) << " kmax=" << kmax;
    auto md = base_metadata("multipliers", cfg.str());
    md.push_back("zero-mode: " + mt.zero_mode_convention);
    io::CsvWriter csv(out_path, md,
                      {"k", "z", "m_t_inv", "m_n_inv", "m_t", "m_n", "bi_t", "bi_n"});
    for (long k = -kmax; k <= kmax; ++k) {
        const long keff = k == 0 ? 1 : k;
        const double z = 2.0 * M_PI * eps * static_cast<double>(std::labs(keff));
        csv.row({static_cast<double>(k), z, mt.at(k), mn.at(k), 1.0 / mt.at(k),
                 1.0 / mn.at(k), bt.at(k), bn.at(k)});
    }
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out_path) {
    json reports = json::array();
    bool all = true;
    auto run = [&](const std::string& name, std::vector<Check> (*fn)()) {
        if (suite != "all" && suite != name) return;
        const json r = checks_to_json(name, fn());
        all = all && r.at("pass").get<bool>();
        reports.push_back(r);
    };
    run("bessel", suite_bessel);
    run("symbols", suite_symbols);
    run("quadrature", suite_quadrature);
    run("identities", suite_identities);
    run("geometry", suite_geometry);
    const json out = reports.size() == 1 ? reports[0] : json{{"suites", reports}, {"pass", all}};
    std::cout << out.dump(2) << "\n";
    if (!out_path.empty()) io::save_json(out_path, out);
    return all ? 0 : 1;
}

int cmd_solve(bool dtn, const std::string& curve_path, const std::string& field_path,
              std::size_t ns, std::size_t ntheta, const std::string& out_csv,
              const std::string& out_report) {
    const auto curve = io::curve_from_json(io::load_json(curve_path));
    auto data = io::field_from_json(io::load_json(field_path));
    if (data.size() != ns)
        throw DomainError("field grid (" + std::to_string(data.size()) +
                          ") must match --ns (" + std::to_string(ns) + ")");
    const auto frame = geometry::periodicized_frame(curve);
    bvp::DtnSystem sys(frame, ns, ntheta);

    fields::PeriodicVectorField result;
    double residual = 0.0;
    bool fallback = false;
    if (dtn) {
        const auto r = bvp::dtn_curved(sys, data);
        result = r.traction;
        residual = r.residual;
    } else {
        const auto r = bvp::ntd_curved(sys, data);
        result = r.velocity;
        residual = r.residual;
        fallback = r.least_squares_fallback;
    }

    std::ostringstream cfg;
    cfg << "ns=" << ns << " ntheta=" << ntheta << " eps=" << io::format_double(curve.eps());
    const auto md = base_metadata(dtn ? "dtn" : "ntd", cfg.str(), {curve_path, field_path});
    io::CsvWriter csv(out_csv, md,
                      dtn ? std::vector<std::string>{"s", "f_x", "f_y", "f_z"}
                          : std::vector<std::string>{"s", "v_x", "v_y", "v_z"});
    for (std::size_t i = 0; i < result.size(); ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(result.size());
        csv.row({s, result[i][0], result[i][1], result[i][2]});
    }
    if (!out_report.empty()) {
        io::save_json(out_report, json{{"command", dtn ? "dtn" : "ntd"},
                                       {"residual", residual},
                                       {"regularization_eta", sys.regularization()},
                                       {"least_squares_fallback", fallback},
                                       {"grid", {{"ns", ns}, {"ntheta", ntheta}}},
                                       {"eps", curve.eps()}});
    }
    return 0;
}

int cmd_evolve(const std::string& curve_path, double dt, long steps,
               const std::string& variant, long correction_every, long snapshot_every,
               const std::string& outdir, bool reparameterize) {
    auto curve = io::curve_from_json(io::load_json(curve_path));
    if (reparameterize) curve = geometry::rescale_to_unit_length(curve);
    evolution::SchemeConfig cfg;
    cfg.dt = dt;
    cfg.steps = steps;
    cfg.correction_every = correction_every;
    cfg.variant = variant == "cartesian" ? evolution::Variant::Cartesian
                                         : evolution::Variant::FrameSpectral;
    fs::create_directories(outdir);

    const auto traj = evolution::evolve(curve, cfg);

    std::ostringstream cc;
    cc << "dt=" << io::format_double(dt) << " steps=" << steps << " variant=" << variant
       << " correction_every=" << correction_every << " eps="
       << io::format_double(curve.eps()) << " snapshot_every=" << snapshot_every;
    const auto md = base_metadata("evolve", cc.str(), {curve_path});
    io::CsvWriter csv(outdir + "/trajectory.csv", md,
                      {"t", "lambda", "kappa_star", "separation", "bending_energy", "r_eff"});
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& st = traj.states[i];
        csv.row({st.t, st.diag.lambda, st.diag.kappa_star, st.diag.separation,
                 st.diag.bending_energy, st.diag.effective_radius});
        if (snapshot_every > 0 && i % static_cast<std::size_t>(snapshot_every) == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "/curve_%06zu.json", i);
            io::save_json(outdir + name, io::curve_to_json(st.curve));
        }
    }
    json report{{"steps_completed", traj.states.size() - 1},
                {"abort", traj.abort == evolution::AbortReason::None ? "none"
                          : traj.abort == evolution::AbortReason::LambdaOutOfRange
                              ? "lambda_out_of_range"
                              : "self_intersection"},
                {"aborted_at_step", traj.aborted_at_step}};
    io::save_json(outdir + "/report.json", report);
    io::save_json(outdir + "/final_curve.json", io::curve_to_json(traj.states.back().curve));
    return traj.abort == evolution::AbortReason::None ? 0 : 3;
}

int cmd_converge(const std::string& study, const std::string& out_path, std::size_t ns,
                 std::size_t ntheta) {
    std::ostringstream cfg;
    cfg << "study=" << study << " ns=" << ns << " ntheta=" << ntheta;
    const auto md = base_metadata("converge", cfg.str());

    if (study == "quadrature") {
        io::CsvWriter csv(out_path, md, {"ns", "error", "ratio"});
        const double eps = 0.05;
        double prev = 0.0;
        for (auto [rns, rnt] : std::vector<std::pair<std::size_t, std::size_t>>{
                 {64, 8}, {128, 16}, {256, 32}}) {
            layers::StraightCylinderRule rule{eps, rns, rnt, 16};
            const double st = (std::floor(0.171 * rns) + 0.5) / static_cast<double>(rns);
            std::vector<double> th;
            const auto u = layers::straight_layer_on_ring(
                rule, layers::LayerKind::Double, layers::DensityDirection::NormalX, 2, st, th,
                layers::QuadratureVariant::StraightSubtraction);
            const auto p = layers::project_ring(u, th);
            const auto dn = multipliers::double_layer_normal(
                multipliers::SymbolQuery(eps, 2).z());
            const double err = std::fabs(p.coef_cos_er / std::cos(4.0 * M_PI * st) - dn.q_nN) /
                               std::fabs(dn.q_nN);
            csv.row({static_cast<double>(rns), err, prev > 0.0 ? prev / err : 0.0});
            prev = err;
        }
        return 0;
    }
    if (study == "decomposition") {
        io::CsvWriter csv(out_path, md, {"eps", "error", "ratio"});
        const auto shape = geometry::make_perturbed_circle(0.05, 0.08, 24);
        fields::PeriodicVectorField v(ns);
        for (std::size_t i = 0; i < ns; ++i)
            v[i][2] = std::sin(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(ns));
        const auto rows = bvp::decomposition_error(shape, {0.08, 0.04, 0.02}, v, ns, ntheta);
        for (const auto& r : rows) csv.row({r.eps, r.remainder, r.ratio});
        return 0;
    }
    if (study == "dt") {
        io::CsvWriter csv(out_path, md, {"dt", "error", "ratio"});
        const auto base = geometry::make_perturbed_circle(0.05, 0.05, 16);
        auto run = [&](double dt, long steps) {
            evolution::SchemeConfig cfg2;
            cfg2.dt = dt;
            cfg2.steps = steps;
            return evolution::evolve(base, cfg2).states.back().curve;
        };
        const auto fine = run(5e-7, 80);
        double prev = 0.0;
        for (long halving = 0; halving < 3; ++halving) {
            const double dt = 4e-6 / static_cast<double>(1 << halving);
            const auto c = run(dt, 10 * (1 << halving));
            double err = 0.0;
            for (double s : {0.1, 0.4, 0.75})
                err = std::max(err, (c.eval(s) - fine.eval(s)).norm());
            csv.row({dt, err, prev > 0.0 ? prev / err : 0.0});
            prev = err;
        }
        return 0;
    }
    throw DomainError("unknown study " + study);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slender-body Stokes hydrodynamics toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* mult = app.add_subcommand("multipliers", "dump the symbol tables as CSV");
    double eps = 0.01;
    long kmax = 128;
    std::string out = "multipliers.csv";
    mult->add_option("--eps", eps, "radius-to-length ratio")->check(CLI::PositiveNumber);
    mult->add_option("--kmax", kmax, "maximum Fourier mode")->check(CLI::PositiveNumber);
    mult->add_option("--out", out, "output CSV path");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    std::string verify_out;
    verify->add_option("--suite", suite, "bessel|symbols|quadrature|identities|geometry|all")
        ->check(CLI::IsMember({"bessel", "symbols", "quadrature", "identities", "geometry",
                               "all"}));
    verify->add_option("--out", verify_out, "also write the JSON report here");

    std::string curve_path, field_path, out_csv = "solve.csv", out_report;
    std::size_t ns = 48, ntheta = 8;
    auto* dtn = app.add_subcommand("dtn", "curved Dirichlet-to-Neumann solve");
    auto* ntd = app.add_subcommand("ntd", "curved Neumann-to-Dirichlet solve");
    for (auto* cmd : {dtn, ntd}) {
        cmd->add_option("--curve", curve_path, "curve JSON")->required();
        cmd->add_option("--field", field_path, "field JSON")->required();
        cmd->add_option("--ns", ns, "centerline grid size");
        cmd->add_option("--ntheta", ntheta, "angular grid size");
        cmd->add_option("--out-csv", out_csv, "output CSV");
        cmd->add_option("--out-report", out_report, "output JSON report");
    }

    auto* evolve = app.add_subcommand("evolve", "run the filament evolution");
    double dt = 1e-5;
    long steps = 100, correction_every = 0, snapshot_every = 0;
    std::string variant = "frame-spectral", outdir = "run";
    bool reparameterize = false;
    evolve->add_option("--curve", curve_path, "initial curve JSON")->required();
    evolve->add_option("--dt", dt, "time step")->check(CLI::PositiveNumber);
    evolve->add_option("--steps", steps, "number of steps")->check(CLI::PositiveNumber);
    evolve->add_option("--variant", variant, "frame-spectral|cartesian")
        ->check(CLI::IsMember({"frame-spectral", "cartesian"}));
    evolve->add_option("--correction-every", correction_every,
                       "apply the boundary-integral correction every M steps (0: off)");
    evolve->add_option("--snapshot-every", snapshot_every, "write curve snapshots (0: off)");
    evolve->add_option("--outdir", outdir, "output directory");
    evolve->add_flag("--reparameterize", reparameterize,
                     "rescale and reparameterize the input to unit length first");

    auto* converge = app.add_subcommand("converge", "convergence studies");
    std::string study = "quadrature";
    std::string conv_out = "converge.csv";
    std::size_t conv_ns = 96, conv_ntheta = 12;
    converge->add_option("--study", study, "quadrature|decomposition|dt")
        ->check(CLI::IsMember({"quadrature", "decomposition", "dt"}));
    converge->add_option("--out", conv_out, "output CSV");
    converge->add_option("--ns", conv_ns, "centerline grid for the decomposition study");
    converge->add_option("--ntheta", conv_ntheta, "angular grid for the decomposition study");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mult->parsed()) return cmd_multipliers(eps, kmax, out);
        if (verify->parsed()) return cmd_verify(suite, verify_out);
        if (dtn->parsed())
            return cmd_solve(true, curve_path, field_path, ns, ntheta, out_csv, out_report);
        if (ntd->parsed())
            return cmd_solve(false, curve_path, field_path, ns, ntheta, out_csv, out_report);
        if (evolve->parsed())
            return cmd_evolve(curve_path, dt, steps, variant, correction_every,
                              snapshot_every, outdir, reparameterize);
        if (converge->parsed()) return cmd_converge(study, conv_out, conv_ns, conv_ntheta);
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const GridMismatchError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
