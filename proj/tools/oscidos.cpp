// Command line front end: parameter parsing, table/figure emission, and the
// verification suite runner.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/precondition error,
// 3 numeric failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oscidos/density.hpp"
#include "oscidos/discretization.hpp"
#include "oscidos/model.hpp"
#include "oscidos/partition.hpp"
#include "oscidos/transforms.hpp"
#include "oscidos/verify.hpp"

using json = nlohmann::json;
using namespace oscidos;

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr const char* kSchema = "oscidos/1";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunConfig {
    double phi{0.0};
    double eta{1.0};
    double gamma{-1.0};  // <= 0: cutoff removed
    double rho{1.0};
    std::string rho_range;  // a:b:n
    double tmax{10.0 * pi};
    double dt{2.0 * pi / 2048.0};
    int terms{0};  // 0: default rule
    int jmax{4};
    long lmax{0};  // 0: auto
    std::string out;
    std::string format{"csv"};
    std::string profile{"fast"};
    std::uint64_t seed{20260811};

    special::PrecisionPolicy policy() const {
        return profile == "strict" ? special::PrecisionPolicy{1e-13, 1e-12, 48}
                                   : special::PrecisionPolicy{1e-11, 1e-9, 44};
    }
    long lmax_for(double gamma_uv) const {
        if (lmax > 0) return lmax;
        return std::max(2000L, long(std::ceil(8.0 * gamma_uv * rho_max())) + 400);
    }
    std::vector<double> rhos() const {
        if (rho_range.empty()) return {rho};
        double a, b;
        long n;
        char c1, c2;
        std::istringstream is(rho_range);
        if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(a > 0.0) ||
            !(b >= a))
            throw std::domain_error("--rho-range must be a:b:n with 0 < a <= b, n >= 1");
        std::vector<double> out;
        for (long i = 0; i < n; ++i)
            out.push_back(n == 1 ? a : a + (b - a) * double(i) / double(n - 1));
        return out;
    }
    double rho_max() const {
        double m = 0.0;
        for (double r : rhos()) m = std::max(m, r);
        return m;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // '\n' endings on every platform
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    return os;
}

// ------------------------------------------------------------- partition

int cmd_partition(const RunConfig& cfg) {
    const auto rhos = cfg.rhos();
    const bool with_cutoff = cfg.gamma > 0.0;

    json rows = json::array();
    std::ostringstream csv;
    csv << "rho,z0,z_cutoff,z_full,log_z_binet,f_ex(eta)\n";
    for (double r : rhos) {
        const double z0v = partition::z0(r);
        const double zf = std::exp(partition::log_z_full(r, cfg.phi));
        std::optional<double> zc, lb;
        if (with_cutoff)
            zc = partition::z_cutoff(r, cfg.phi, cfg.gamma, cfg.lmax_for(cfg.gamma),
                                     cfg.policy())
                     .value;
        if (cfg.phi > 0.0) lb = partition::log_z_binet(r, cfg.phi, cfg.policy());
        const double fex = partition::excess_free_energy(r, cfg.phi, cfg.eta);

        csv << fmt(r) << ',' << fmt(z0v) << ',' << (zc ? fmt(*zc) : "") << ',' << fmt(zf) << ','
            << (lb ? fmt(*lb) : "") << ',' << fmt(fex) << "\n";
        json row{{"rho", r}, {"z0", z0v}, {"z_full", zf}, {"f_ex", fex}};
        row["z_cutoff"] = zc ? json(*zc) : json(nullptr);
        row["log_z_binet"] = lb ? json(*lb) : json(nullptr);
        rows.push_back(std::move(row));
    }

    if (cfg.format == "json") {
        json doc{{"schema", kSchema},
                 {"command", "partition"},
                 {"params",
                  {{"phi", cfg.phi}, {"eta", cfg.eta}, {"gamma", cfg.gamma}}},
                 {"rows", rows}};
        if (cfg.out.empty())
            std::cout << doc.dump(2) << "\n";
        else
            open_out(cfg.out) << doc.dump(2) << "\n";
    } else if (cfg.out.empty()) {
        std::cout << csv.str();
    } else {
        open_out(cfg.out) << csv.str();
    }
    return 0;
}

// --------------------------------------------------------------- density

int cmd_density(const RunConfig& cfg) {
    if (!(cfg.phi > 0.0))
        throw std::domain_error("density requires phi > 0 (series kernel has real-axis poles at phi = 0)");
    const model::ModelParams p{cfg.phi, cfg.eta, cfg.gamma};
    const int terms = cfg.terms > 0 ? cfg.terms : density::default_n_terms(cfg.phi, cfg.tmax);
    const auto m = density::rho_density(p, cfg.tmax, cfg.dt, terms);
    const auto d = density::phi_of_omega(m);
    const auto table = density::coefficient_table(std::max(cfg.jmax, 4));
    const auto geom = model::resonance_geometry(p, std::max(cfg.jmax, 4));

    std::ostringstream rho_csv, phi_csv, lines_csv, resid_csv;
    rho_csv << "t,rho\n";
    for (std::size_t i = 0; i < m.density.size(); ++i)
        rho_csv << fmt(i * m.dt) << ',' << fmt(m.density[i]) << "\n";

    phi_csv << "omega,(omega-omega_phi)/eta,phi\n";
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double w = d.x0 + i * d.dx;
        phi_csv << fmt(w) << ',' << fmt((w - m.atom_location) / cfg.eta) << ','
                << fmt(d.values[i]) << "\n";
    }

    lines_csv << "j,omega_j,gamma_j,mass,peak_height\n";
    json lines = json::array();
    for (int j = 1; j <= cfg.jmax; ++j) {
        const auto line = density::lorentz_line(j, p);
        const double mass = double(table.row_sum[j - 1]);  // exact small integer
        lines_csv << j << ',' << fmt(line.center) << ',' << fmt(geom.widths[j - 1]) << ','
                  << fmt(mass) << ',' << fmt(1.0 / (pi * line.half_width)) << "\n";
        lines.push_back({{"j", j},
                         {"omega_j", line.center},
                         {"gamma_j", geom.widths[j - 1]},
                         {"mass", mass}});
    }

    // per-interval difference to the Lorentz approximation (figure 1b layout)
    resid_csv << "j,omega,(omega-omega_phi)/eta,residual\n";
    for (int j = 1; j <= cfg.jmax; ++j) {
        const auto line = density::lorentz_line(j, p);
        const long lo = std::lround((line.center - 0.5 * cfg.eta - d.x0) / d.dx);
        const long hi = std::lround((line.center + 0.5 * cfg.eta - d.x0) / d.dx);
        for (long i = std::max(0L, lo); i <= std::min(long(d.values.size()) - 1, hi); ++i) {
            const double w = d.x0 + i * d.dx;
            double lor = 0.0;
            for (int k = 1; k <= terms; ++k)
                lor += density::binomial_mass(k) * density::lorentz_profile(k, p, w);
            resid_csv << j << ',' << fmt(w) << ',' << fmt((w - m.atom_location) / cfg.eta) << ','
                      << fmt(d.values[i] - lor) << "\n";
        }
    }

    if (cfg.format == "json") {
        json doc{{"schema", kSchema},
                 {"command", "density"},
                 {"params",
                  {{"phi", cfg.phi},
                   {"eta", cfg.eta},
                   {"tmax", cfg.tmax},
                   {"dt", cfg.dt},
                   {"terms", terms}}},
                 {"omega_phi", m.atom_location},
                 {"truncation_bound", m.truncation_bound},
                 {"t", json::array()},
                 {"rho", json::array()},
                 {"omega", json::array()},
                 {"phi_of_omega", json::array()},
                 {"lines", lines}};
        for (std::size_t i = 0; i < m.density.size(); ++i) {
            doc["t"].push_back(i * m.dt);
            doc["rho"].push_back(m.density[i]);
            doc["omega"].push_back(d.x0 + i * d.dx);
            doc["phi_of_omega"].push_back(d.values[i]);
        }
        const std::string path = cfg.out.empty() ? "density.json" : cfg.out + ".json";
        open_out(path) << doc.dump() << "\n";
        std::cout << "wrote " << path << "\n";
    } else {
        const std::string prefix = cfg.out.empty() ? "density" : cfg.out;
        open_out(prefix + "_rho.csv") << rho_csv.str();
        open_out(prefix + "_phi.csv") << phi_csv.str();
        open_out(prefix + "_lines.csv") << lines_csv.str();
        open_out(prefix + "_residual.csv") << resid_csv.str();
        std::cout << "wrote " << prefix << "_{rho,phi,lines,residual}.csv (omega_phi = "
                  << fmt(m.atom_location) << ", " << terms << " terms)\n";
    }
    return 0;
}

// --------------------------------------------------------------- lorentz

int cmd_lorentz(const RunConfig& cfg) {
    if (!(cfg.phi > 0.0)) throw std::domain_error("lorentz requires phi > 0");
    const model::ModelParams p{cfg.phi, cfg.eta, cfg.gamma};
    const auto geom = model::resonance_geometry(p, cfg.jmax);

    std::ostringstream csv;
    csv << "j,omega_j,gamma_j,half_width,mass,peak_height\n";
    json rows = json::array();
    for (int j = 1; j <= cfg.jmax; ++j) {
        const auto line = density::lorentz_line(j, p);
        csv << j << ',' << fmt(line.center) << ',' << fmt(geom.widths[j - 1]) << ','
            << fmt(line.half_width) << ',' << fmt(line.mass) << ','
            << fmt(1.0 / (pi * line.half_width)) << "\n";
        rows.push_back({{"j", j},
                        {"omega_j", line.center},
                        {"gamma_j", geom.widths[j - 1]},
                        {"mass", line.mass}});
    }
    if (cfg.format == "json") {
        json doc{{"schema", kSchema},
                 {"command", "lorentz"},
                 {"params", {{"phi", cfg.phi}, {"eta", cfg.eta}}},
                 {"omega_phi", geom.omega_ground},
                 {"lines", rows}};
        if (cfg.out.empty())
            std::cout << doc.dump(2) << "\n";
        else
            open_out(cfg.out) << doc.dump(2) << "\n";
    } else if (cfg.out.empty()) {
        std::cout << csv.str();
    } else {
        open_out(cfg.out) << csv.str();
    }
    return 0;
}

// ------------------------------------------------------------ discretize

int cmd_discretize(const RunConfig& cfg, int level, const std::vector<long>& ls) {
    if (!(cfg.gamma > 0.0)) throw std::domain_error("discretize requires a finite --gamma");
    const model::ModelParams p{cfg.phi, cfg.eta, cfg.gamma};
    const auto set = discretization::build_mode_set(level, p);
    const double beta = 2.0 * pi * cfg.rho / cfg.eta;

    json report{{"schema", kSchema},
                {"command", "discretize"},
                {"params",
                 {{"phi", cfg.phi},
                  {"eta", cfg.eta},
                  {"gamma", cfg.gamma},
                  {"rho", cfg.rho},
                  {"N", level}}},
                {"modes", set.modes.size()}};

    const double rn = discretization::renorm_sum(set);
    const double rc = discretization::renorm_continuum(p);
    report["renorm_sum"] = rn;
    report["renorm_continuum"] = rc;
    std::cout << "N=" << level << ": " << set.modes.size() << " cubes, renorm sum " << fmt(rn)
              << " (continuum " << fmt(rc) << ")\n";

    json sl = json::array();
    for (long l : ls) {
        const Eigen::Matrix3d sn = discretization::s_l_discrete(set, l, beta);
        const Eigen::Matrix3d sc = discretization::s_l_continuum(l, beta, p);
        const double gap = (sn - sc).norm() / sc.norm();
        sl.push_back({{"l", l}, {"S_lN_trace", sn.trace()}, {"S_l_trace", sc.trace()},
                      {"rel_frobenius_gap", gap}});
        std::cout << "  l=" << l << ": tr S_{l,N} = " << fmt(sn.trace()) << ", tr S_l = "
                  << fmt(sc.trace()) << ", rel gap " << fmt(gap) << "\n";
    }
    report["s_l"] = sl;

    const long lmax = cfg.lmax > 0 ? cfg.lmax : 400;
    const double lzn = discretization::log_z_n(set, beta, lmax);
    const double lzc =
        partition::z_cutoff(cfg.rho, cfg.phi, cfg.gamma, cfg.lmax_for(cfg.gamma), cfg.policy())
            .log_value;
    report["log_z_n"] = lzn;
    report["log_z_cutoff"] = lzc;
    std::cout << "  ln Z_N = " << fmt(lzn) << " vs ln Z(beta;gamma) = " << fmt(lzc) << "\n";

    if (!cfg.out.empty()) {
        auto os = open_out(cfg.out);
        discretization::write_mode_set_csv(set, os);
        std::cout << "wrote mode set to " << cfg.out << "\n";
    }
    if (cfg.format == "json") std::cout << report.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------- transform

int cmd_transform(const RunConfig& cfg) {
    if (!(cfg.phi > 0.0)) throw std::domain_error("transform requires phi > 0");
    const model::ModelParams p{cfg.phi, cfg.eta, -1.0};
    const int terms = cfg.terms > 0 ? cfg.terms : 40;
    const auto m = density::rho_density(p, cfg.tmax, cfg.dt, terms);

    std::ostringstream csv;
    csv << "rho,laplace(atom+density),Y_closed_form,rel_gap\n";
    json rows = json::array();
    for (double r : cfg.rhos()) {
        const double lhs = transforms::laplace_of_measure(m, r, 1e-2);
        const double rhs = std::exp(partition::log_z_full(r, cfg.phi) + model::t_phi(cfg.phi) * r);
        const double gap = std::abs(lhs / rhs - 1.0);
        csv << fmt(r) << ',' << fmt(lhs) << ',' << fmt(rhs) << ',' << fmt(gap) << "\n";
        rows.push_back({{"rho", r}, {"laplace", lhs}, {"closed_form", rhs}, {"rel_gap", gap}});
    }

    // complete monotonicity of the closed form (Bernstein check, order 8)
    std::vector<double> grid(40);
    for (int i = 0; i < 40; ++i) grid[i] = 1.0 + 7.0 * i / 39.0;
    const auto cm = transforms::complete_monotonicity_check(
        [&](double beta) { return std::exp(partition::log_z_full(beta / (2.0 * pi), cfg.phi)); },
        grid, 8, 1e-10);

    if (cfg.format == "json") {
        json doc{{"schema", kSchema},
                 {"command", "transform"},
                 {"params", {{"phi", cfg.phi}, {"eta", cfg.eta}, {"terms", terms}}},
                 {"laplace", rows},
                 {"complete_monotonicity",
                  {{"pass", cm.pass},
                   {"orders", cm.points},
                   {"worst_normalized", cm.values}}}};
        if (cfg.out.empty())
            std::cout << doc.dump(2) << "\n";
        else
            open_out(cfg.out) << doc.dump(2) << "\n";
    } else {
        if (!cfg.out.empty())
            open_out(cfg.out) << csv.str();
        else
            std::cout << csv.str();
        std::cout << "# complete monotonicity to order 8: " << (cm.pass ? "pass" : "FAIL")
                  << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& cfg, const std::vector<int>& only) {
    verify::Options opt;
    opt.seed = cfg.seed;
    opt.strict = cfg.profile == "strict";
    opt.only = only;
    const auto results = verify::run_acceptance(opt);

    json criteria = json::array();
    for (const auto& r : results) {
        std::printf("[%s] %2d/16 %-24s measured=%.3e bound=%.3e %s\n", r.pass ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.measured, r.bound, r.detail.c_str());
        criteria.push_back({{"id", r.id},
                            {"name", r.name},
                            {"measured", r.measured},
                            {"bound", r.bound},
                            {"pass", r.pass},
                            {"detail", r.detail},
                            {"seconds", r.seconds}});
    }
    const bool ok = verify::all_pass(results);
    json doc{{"schema", kSchema},
             {"command", "verify"},
             {"seed", cfg.seed},
             {"profile", cfg.profile},
             {"pass", ok},
             {"criteria", criteria}};
    if (!cfg.out.empty()) open_out(cfg.out) << doc.dump(2) << "\n";
    if (cfg.format == "json" && cfg.out.empty()) std::cout << doc.dump(2) << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"effective partition function and density of states of a charged oscillator in a photon field"};
    app.require_subcommand(1);

    RunConfig cfg;
    int level = 2;
    std::vector<long> ls{1, 2, 5};
    std::vector<int> only;

    auto add_common = [&](CLI::App* sub, bool needs_phi = true) {
        if (needs_phi)
            sub->add_option("--phi", cfg.phi, "coupling angle, 0 <= phi < pi/2")
                ->check(CLI::Range(0.0, pi / 2.0 - 1e-12));
        sub->add_option("--eta", cfg.eta, "oscillator frequency, > 0")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "output path (or prefix)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tolerance-profile", cfg.profile, "fast or strict")
            ->check(CLI::IsMember({"fast", "strict"}));
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    };

    auto* p_part = app.add_subcommand("partition", "Z0, Z(beta;gamma), Z(beta), ln Z Binet, F_ex");
    add_common(p_part);
    p_part->add_option("--gamma", cfg.gamma, "UV cutoff gamma = cC/eta (omit: removed)");
    p_part->add_option("--rho", cfg.rho, "reduced inverse temperature")->check(CLI::PositiveNumber);
    p_part->add_option("--rho-range", cfg.rho_range, "a:b:n sweep");
    p_part->add_option("--lmax", cfg.lmax, "product truncation (0: auto)");

    auto* p_dens = app.add_subcommand("density", "effective density of states grids and line summary");
    add_common(p_dens);
    p_dens->add_option("--tmax", cfg.tmax, "reduced-grid extent")->check(CLI::PositiveNumber);
    p_dens->add_option("--dt", cfg.dt, "reduced-grid spacing")->check(CLI::PositiveNumber);
    p_dens->add_option("--terms", cfg.terms, "series terms (0: default rule)");
    p_dens->add_option("--jmax", cfg.jmax, "lines in the summary")->check(CLI::PositiveNumber);

    auto* p_lor = app.add_subcommand("lorentz", "Lorentz line table (centers, widths, masses)");
    add_common(p_lor);
    p_lor->add_option("--jmax", cfg.jmax, "number of lines")->check(CLI::PositiveNumber);

    auto* p_disc = app.add_subcommand("discretize", "finite-mode lattice: S_{l,N}, renormalization sum, Z_N");
    add_common(p_disc);
    p_disc->add_option("--gamma", cfg.gamma, "UV cutoff (required, finite)");
    p_disc->add_option("--n", level, "lattice level N")->check(CLI::Range(1, 10));
    p_disc->add_option("--rho", cfg.rho, "reduced inverse temperature")
        ->check(CLI::PositiveNumber);
    p_disc->add_option("--l", ls, "l values for S_{l,N}");
    p_disc->add_option("--lmax", cfg.lmax, "product truncation for Z_N (0: auto)");

    auto* p_tr = app.add_subcommand("transform", "Laplace round trip and complete-monotonicity report");
    add_common(p_tr);
    p_tr->add_option("--rho", cfg.rho, "reduced inverse temperature")->check(CLI::PositiveNumber);
    p_tr->add_option("--rho-range", cfg.rho_range, "a:b:n sweep");
    p_tr->add_option("--tmax", cfg.tmax, "reduced-grid extent")->check(CLI::PositiveNumber);
    p_tr->add_option("--dt", cfg.dt, "reduced-grid spacing")->check(CLI::PositiveNumber);
    p_tr->add_option("--terms", cfg.terms, "series terms (0: 40)");

    auto* p_ver = app.add_subcommand("verify", "run the acceptance suite");
    add_common(p_ver, false);
    p_ver->add_option("--only", only, "criterion ids to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (p_part->parsed()) return cmd_partition(cfg);
        if (p_dens->parsed()) return cmd_density(cfg);
        if (p_lor->parsed()) return cmd_lorentz(cfg);
        if (p_disc->parsed()) return cmd_discretize(cfg, level, ls);
        if (p_tr->parsed()) return cmd_transform(cfg);
        if (p_ver->parsed()) return cmd_verify(cfg, only);
    } catch (const std::domain_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
