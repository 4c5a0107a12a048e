#include "ringres/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "ringres/dynamics.hpp"
#include "ringres/normalform.hpp"
#include "ringres/reference_data.hpp"
#include "ringres/verification.hpp"

namespace ringres::cli {

namespace {

constexpr const char* kVersion = "ringres 1.0.0";
constexpr double kPi = std::numbers::pi;

struct CommonOpts {
    std::string body = "AS";
    std::string body_file;
    int ell_max = 5;
    int rho_order = 16;
    std::string out = "ringres_out";
    double grav_override = 0.0;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

BodyParams resolve_body(const CommonOpts& o) {
    BodyParams b = o.body_file.empty() ? preset_body(o.body) : load_body_file(o.body_file);
    if (o.grav_override > 0.0) b.gm = o.grav_override * b.mass;
    return b;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--body", o.body, "Body preset name (AS or HA)")->capture_default_str();
    cmd->add_option("--body-file", o.body_file,
                    "Body definition file (keys a_km b_km c_km mass_kg rotation_period_h)");
    cmd->add_option("--ell-max", o.ell_max, "Potential truncation order (1..8)")
        ->capture_default_str();
    cmd->add_option("--rho-order", o.rho_order, "Radial expansion order (2..16)")
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--gravity-constant", o.grav_override,
                    "Override G (km^3 kg^-1 s^-2); default CODATA 2018");
}

class OutputDir {
public:
    OutputDir(const CommonOpts& o, const std::string& subcommand, int argc,
              const char* const* argv)
        : start_(std::chrono::steady_clock::now()) {
        dir_ = std::filesystem::path(o.out) / subcommand;
        std::filesystem::create_directories(dir_);
        std::ostringstream cl;
        for (int i = 0; i < argc; ++i) cl << (i ? " " : "") << argv[i];
        cmdline_ = cl.str();
        std::ofstream cfg(dir_ / "config.txt");
        cfg << "body " << o.body << "\nbody_file " << o.body_file << "\nell_max " << o.ell_max
            << "\nrho_order " << o.rho_order << "\nout " << o.out << "\ngravity_constant "
            << (o.grav_override > 0.0 ? num(o.grav_override) : num(kGravitationalConstant))
            << "\n";
    }
    ~OutputDir() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::ofstream mf(dir_ / "manifest.txt");
        mf << "tool " << kVersion << "\ncommand " << cmdline_ << "\nwall_time_s " << num(secs)
           << "\n";
    }
    std::ofstream open_csv(const std::string& name) const {
        return std::ofstream(dir_ / name);
    }
    const std::filesystem::path& path() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::string cmdline_;
    std::chrono::steady_clock::time_point start_;
};

ResonanceSpec spec_for_label(const PotentialModel& model, const std::string& res) {
    if (res == "1:1") return resonant_radius(model, 1, 1);
    if (res == "1:2") return resonant_radius(model, 1, 2);
    if (res == "1:3") return resonant_radius(model, 1, 3);
    throw CLI::ValidationError("--res", "expected one of 1:1, 1:2, 1:3");
}

ReducedHamiltonian build_reduced(const PotentialModel& model, const ResonanceSpec& spec,
                                 int rho_order, double e) {
    const ExpansionCenter center = ExpansionCenter::at_radius(model, spec.r_res, rho_order);
    const EpicyclicHamiltonian epi = assemble(center, model);
    return spec.q == spec.p ? reduce_corotation(epi, e) : reduce_lindblad(epi, spec, e);
}

struct ERange {
    double lo = 1e-3, hi = 0.5;
    int n = 100;
};

ERange parse_erange(const std::string& text) {
    ERange r;
    if (text.empty()) return r;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> r.lo >> c1 >> r.hi) || c1 != ':')
        throw CLI::ValidationError("--e-range", "expected lo:hi or lo:hi:n");
    if (in >> c2 >> r.n) {
        if (c2 != ':' || r.n < 2) throw CLI::ValidationError("--e-range", "bad step count");
    }
    return r;
}

const char* kind_name(EquilibriumPoint::Kind k) {
    switch (k) {
        case EquilibriumPoint::Kind::Centre: return "centre";
        case EquilibriumPoint::Kind::Saddle: return "saddle";
        default: return "degenerate";
    }
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_potential_sample(const CommonOpts& o, double r_min, double r_max, int r_steps,
                         int theta_steps, int argc, const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    OutputDir out(o, "potential", argc, argv);
    auto csv = out.open_csv("potential_sample.csv");
    csv << "r_km,theta_rad,U_s_km2_s2,U_ns_km2_s2,n_rad_s,kappa_rad_s\n";
    if (r_min <= 0.0) r_min = 1.05 * body.a;
    if (r_max <= 0.0) r_max = 3.0 * keplerian_radius(body, 1, 1);
    for (int i = 0; i < r_steps; ++i) {
        const double r = r_min + (r_max - r_min) * i / std::max(1, r_steps - 1);
        const double n2 = n_squared(model, r), k2 = kappa_squared(model, r);
        for (int j = 0; j < theta_steps; ++j) {
            const double th = kPi * j / std::max(1, theta_steps);
            csv << num(r) << ',' << num(th) << ',' << num(u_axisymmetric(model, r)) << ','
                << num(u_nonaxisymmetric(model, r, th)) << ','
                << (n2 > 0 ? num(std::sqrt(n2)) : "nan") << ','
                << (k2 > 0 ? num(std::sqrt(k2)) : "nan") << '\n';
        }
    }
    std::cout << "wrote " << (out.path() / "potential_sample.csv").string() << "\n";
    return 0;
}

int cmd_resonance_locate(const CommonOpts& o, int p, int q, int argc, const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    const ResonanceSpec spec = resonant_radius(model, p, q);
    const double d = std::abs(spec.r_kep - spec.r_res) / spec.r_kep;
    OutputDir out(o, "resonance_locate", argc, argv);
    auto csv = out.open_csv("resonance_locate.csv");
    const std::string row = std::to_string(p) + "," + std::to_string(q) + "," + num(spec.r_kep) +
                            "," + num(spec.r_res) + "," + num(d);
    csv << "p,q,r_kep_km,r_res_km,d\n" << row << "\n";
    std::cout << "p,q,r_kep_km,r_res_km,d\n" << row << "\n";
    return 0;
}

void dump_reduced(std::ostream& csv, const ReducedHamiltonian& red) {
    csv << "component,harmonic,power,coefficient\n";
    for (std::size_t k = 1; k < red.normal.size(); ++k)
        csv << "normal,0," << k << ',' << num(red.normal[k]) << '\n';
    for (std::size_t h = 0; h < red.harmonic.size(); ++h)
        for (std::size_t d = 0; d < red.harmonic[h].size(); ++d)
            csv << "harmonic," << (h + 1) * red.angle_multiplier << ',' << d << ','
                << num(red.harmonic[h][d]) << '\n';
}

int cmd_resonance_reduce(const CommonOpts& o, const std::string& res, double e, int argc,
                         const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    const ResonanceSpec spec = spec_for_label(model, res);
    const ReducedHamiltonian red = build_reduced(model, spec, o.rho_order, e);
    OutputDir out(o, "resonance_reduce", argc, argv);
    auto csv = out.open_csv("reduced_hamiltonian.csv");
    dump_reduced(csv, red);
    std::cout << "resonance " << res << " at r = " << red.resonance.r_res
              << " km; action levels: J0 = " << red.j0;
    if (res != "1:1") std::cout << ", I0 = " << red.i0 << ", L0 = " << red.l0;
    std::cout << "\nwrote " << (out.path() / "reduced_hamiltonian.csv").string() << "\n";
    return 0;
}

int cmd_hamiltonian_expand(const CommonOpts& o, const std::string& res, const std::string& format,
                           int argc, const char* const* argv) {
    if (format != "csv") throw CLI::ValidationError("--format", "only csv is supported");
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    const ResonanceSpec spec = spec_for_label(model, res);
    const ExpansionCenter center = ExpansionCenter::at_radius(model, spec.r_res, o.rho_order);
    const EpicyclicHamiltonian epi = assemble(center, model);
    OutputDir out(o, "hamiltonian_expand", argc, argv);
    auto csv = out.open_csv("hamiltonian.csv");
    epi.series.write_csv(csv);
    std::cout << "expanded " << epi.series.size() << " terms at r* = " << center.r_star
              << " km\nwrote " << (out.path() / "hamiltonian.csv").string() << "\n";
    return 0;
}

int cmd_kam_check(const CommonOpts& o, int argc, const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    std::vector<std::pair<std::string, double>> radii;
    for (int q = 1; q <= 3; ++q) {
        const ResonanceSpec spec = resonant_radius(model, 1, q);
        radii.emplace_back(spec.label, spec.r_res);
    }
    const auto rows = nondegeneracy_report(model, radii);
    OutputDir out(o, "kam_check", argc, argv);
    auto csv = out.open_csv("kam_check.csv");
    const char* header = "body,resonance,order,omega1_rad_s,omega2_rad_s,A_per_km2_s,"
                         "d04,determinant,verdict\n";
    csv << header;
    std::cout << header;
    for (const auto& r : rows) {
        std::ostringstream line;
        line << r.body << ',' << r.resonance << ',' << r.order << ',' << num(r.omega1) << ','
             << num(r.omega2) << ',' << num(r.coupling) << ',' << num(r.d04) << ','
             << num(r.determinant) << ','
             << (r.non_degenerate ? "non-degenerate" : "degenerate") << '\n';
        csv << line.str();
        std::cout << line.str();
    }
    return 0;
}

int cmd_equilibria(const CommonOpts& o, const std::string& res, double e, int argc,
                   const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    const ResonanceSpec spec = spec_for_label(model, res);
    const ReducedHamiltonian red = build_reduced(model, spec, o.rho_order, e);
    const auto points = find_equilibria(red);
    OutputDir out(o, "equilibria", argc, argv);
    auto csv = out.open_csv("equilibria.csv");
    const std::string unit = res == "1:1" ? "action_km2_s" : "action_G_km2_s";
    csv << "angle_rad," << unit << ",kind,hessian_det\n";
    std::cout << "angle_rad," << unit << ",kind,hessian_det\n";
    for (const auto& p : points) {
        std::ostringstream line;
        line << num(p.angle) << ',' << num(p.action) << ',' << kind_name(p.kind) << ','
             << num(p.hessian_det) << '\n';
        csv << line.str();
        std::cout << line.str();
    }
    return 0;
}

int cmd_portrait(const CommonOpts& o, const std::string& res, double e, int grid, int argc,
                 const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    const ResonanceSpec spec = spec_for_label(model, res);
    const ReducedHamiltonian red = build_reduced(model, spec, o.rho_order, e);
    const auto points = find_equilibria(red);
    double lo = 1e300, hi = -1e300;
    for (const auto& p : points) {
        lo = std::min(lo, p.action);
        hi = std::max(hi, p.action);
    }
    if (points.empty()) {
        lo = -1.0;
        hi = 1.0;
    }
    const double pad = std::max(1.0, 0.75 * (hi - lo));
    lo -= pad;
    hi += pad;

    OutputDir out(o, "portrait", argc, argv);
    auto csv = out.open_csv("portrait.csv");
    csv << "angle_rad,action_km2_s,energy_km2_s2\n";
    for (int ia = 0; ia <= grid; ++ia) {
        const double ang = 2.0 * kPi * ia / grid;
        for (int ix = 0; ix <= grid; ++ix) {
            const double x = lo + (hi - lo) * ix / grid;
            csv << num(ang) << ',' << num(x) << ',' << num(red.energy(x, ang)) << '\n';
        }
    }
    // separatrix polyline through the lowest-|energy-gap| saddle
    auto sep = out.open_csv("separatrix.csv");
    sep << "angle_rad,action_km2_s,branch\n";
    const EquilibriumPoint* saddle = nullptr;
    for (const auto& p : points)
        if (p.kind == EquilibriumPoint::Kind::Saddle && !saddle) saddle = &p;
    if (saddle) {
        const double es = red.energy(saddle->action, saddle->angle);
        for (int ia = 0; ia <= 4 * grid; ++ia) {
            const double ang = 2.0 * kPi * ia / (4 * grid);
            std::vector<double> level = red.normal;
            for (std::size_t k = 0; k < red.harmonic.size(); ++k) {
                const double ck = std::cos((k + 1) * red.angle_multiplier * ang);
                if (level.size() < red.harmonic[k].size())
                    level.resize(red.harmonic[k].size(), 0.0);
                for (std::size_t d = 0; d < red.harmonic[k].size(); ++d)
                    level[d] += ck * red.harmonic[k][d];
            }
            level[0] -= es;
            int branch = 0;
            for (double rt : poly_real_roots(level, lo, hi))
                sep << num(ang) << ',' << num(rt) << ',' << branch++ << '\n';
        }
    }
    std::cout << "wrote " << (out.path() / "portrait.csv").string() << " and separatrix.csv\n";
    return 0;
}

int cmd_amplitude(const CommonOpts& o, const std::string& res, const ERange& er, int argc,
                  const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    const ResonanceSpec spec = spec_for_label(model, res);
    const ExpansionCenter center = ExpansionCenter::at_radius(model, spec.r_res, o.rho_order);
    const EpicyclicHamiltonian epi = assemble(center, model);
    OutputDir out(o, "amplitude", argc, argv);
    auto csv = out.open_csv("amplitude.csv");
    csv << "e,pendulum_semi_amplitude_km2_s,separatrix_1_km2_s,separatrix_2_km2_s\n";
    for (int i = 0; i < er.n; ++i) {
        const double e = er.lo + (er.hi - er.lo) * i / std::max(1, er.n - 1);
        const ReducedHamiltonian red =
            spec.p == spec.q ? reduce_corotation(epi, e) : reduce_lindblad(epi, spec, e);
        std::string pend = "nan", s1 = "nan", s2 = "nan";
        if (spec.p == spec.q) {
            try {
                pend = num(pendulum_amplitude(red));
            } catch (const std::domain_error&) {
            }
        }
        try {
            const auto points = find_equilibria(red);
            int slot = 0;
            for (const auto& p : points) {
                if (p.kind != EquilibriumPoint::Kind::Centre || slot >= 2) continue;
                if (p.angle > 1e-9 && std::abs(p.angle - kPi) > 1e-9 && res != "1:1") continue;
                try {
                    const double w = separatrix_amplitude(red, p);
                    (slot == 0 ? s1 : s2) = num(w);
                    ++slot;
                } catch (const std::runtime_error&) {
                }
                if (res == "1:1" && slot == 1) break;  // symmetric islands
            }
        } catch (const std::exception&) {
        }
        csv << num(e) << ',' << pend << ',' << s1 << ',' << s2 << '\n';
    }
    std::cout << "wrote " << (out.path() / "amplitude.csv").string() << "\n";
    return 0;
}

const char* event_kind(const BifurcationEvent& ev) {
    return ev.kind == BifurcationEvent::Kind::Pitchfork ? "pitchfork" : "saddle-node";
}
const char* event_direction(const BifurcationEvent& ev) {
    switch (ev.direction) {
        case BifurcationEvent::Direction::Creation: return "creation";
        case BifurcationEvent::Direction::Annihilation: return "annihilation";
        default: return "stability-exchange";
    }
}

int cmd_bifurcation(const CommonOpts& o, const std::string& res, const ERange& er, int steps,
                    int grid, int argc, const char* const* argv) {
    const BodyParams body = resolve_body(o);
    const PotentialModel model = PotentialModel::build(body, o.ell_max);
    const ResonanceSpec spec = spec_for_label(model, res);
    const ExpansionCenter center = ExpansionCenter::at_radius(model, spec.r_res, o.rho_order);
    const EpicyclicHamiltonian epi = assemble(center, model);
    auto builder = [&](double e) {
        return spec.p == spec.q ? reduce_corotation(epi, e) : reduce_lindblad(epi, spec, e);
    };
    const auto events = bifurcation_scan(builder, er.lo, er.hi, steps, grid);
    OutputDir out(o, "bifurcation", argc, argv);
    auto csv = out.open_csv("bifurcation.csv");
    csv << "e_crit,angle_rad,kind,direction\n";
    std::cout << "e_crit,angle_rad,kind,direction\n";
    for (const auto& ev : events) {
        std::ostringstream line;
        line << num(ev.e_crit) << ',' << num(ev.angle) << ',' << event_kind(ev) << ','
             << event_direction(ev) << '\n';
        csv << line.str();
        std::cout << line.str();
    }
    return 0;
}

int cmd_reproduce(const CommonOpts& o, int steps, int grid, int argc, const char* const* argv) {
    OutputDir out(o, "reproduce-paper", argc, argv);

    // tables: radii, shape constants, reduced-Hamiltonian coefficient sets
    {
        auto csv = out.open_csv("table_radii.csv");
        csv << "body,resonance,r_kep_km,r_res_km,d\n";
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            for (int q = 1; q <= 3; ++q) {
                const ResonanceSpec spec = resonant_radius(model, 1, q);
                csv << name << ',' << spec.label << ',' << num(spec.r_kep) << ','
                    << num(spec.r_res) << ','
                    << num(std::abs(spec.r_kep - spec.r_res) / spec.r_kep) << '\n';
            }
        }
    }
    {
        auto csv = out.open_csv("table_shape.csv");
        csv << "body,R_trunc_km,oblateness,elongation\n";
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const ShapeConstants sc = shape_parameters(resolve_body(ob), true);
            csv << name << ',' << num(sc.ref_radius) << ',' << num(sc.oblateness) << ','
                << num(sc.elongation) << '\n';
        }
    }
    {
        auto csv = out.open_csv("reduced_coefficients.csv");
        csv << "body,resonance,component,harmonic,power,coefficient\n";
        auto eqcsv = out.open_csv("equilibria.csv");
        eqcsv << "body,resonance,angle_rad,action_km2_s,kind\n";
        auto ampcsv = out.open_csv("amplitudes.csv");
        ampcsv << "body,resonance,pendulum_km2_s,separatrix_km2_s,island_2_km2_s\n";
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            for (int q = 1; q <= 3; ++q) {
                const ResonanceSpec spec = resonant_radius(model, 1, q);
                const ReducedHamiltonian red = build_reduced(model, spec, o.rho_order, 1e-3);
                for (std::size_t k = 1; k < red.normal.size(); ++k)
                    csv << name << ',' << spec.label << ",normal,0," << k << ','
                        << num(red.normal[k]) << '\n';
                for (std::size_t h = 0; h < red.harmonic.size(); ++h)
                    for (std::size_t d = 0; d < red.harmonic[h].size(); ++d)
                        csv << name << ',' << spec.label << ",harmonic,"
                            << (h + 1) * red.angle_multiplier << ',' << d << ','
                            << num(red.harmonic[h][d]) << '\n';
                const auto points = find_equilibria(red);
                for (const auto& p : points)
                    eqcsv << name << ',' << spec.label << ',' << num(p.angle) << ','
                          << num(p.action) << ',' << kind_name(p.kind) << '\n';
                std::string pend = "nan", s1 = "nan", s2 = "nan";
                if (q == 1) {
                    try {
                        pend = num(pendulum_amplitude(red));
                    } catch (const std::domain_error&) {
                    }
                }
                int slot = 0;
                for (const auto& p : points) {
                    if (p.kind != EquilibriumPoint::Kind::Centre || slot >= 2) continue;
                    if (q != 1 && p.angle > 1e-9 && std::abs(p.angle - kPi) > 1e-9) continue;
                    try {
                        (slot == 0 ? s1 : s2) = num(separatrix_amplitude(red, p));
                        ++slot;
                    } catch (const std::runtime_error&) {
                    }
                    if (q == 1 && slot == 1) break;
                }
                ampcsv << name << ',' << spec.label << ',' << pend << ',' << s1 << ',' << s2
                       << '\n';
            }
        }
    }
    {
        // radius-discrepancy sweep from corotation out to 1:3
        auto csv = out.open_csv("figure_radii.csv");
        csv << "body,p,q,ratio,r_kep_km,r_res_km,d\n";
        const int ratios[][2] = {{1, 1}, {6, 7}, {5, 6}, {4, 5}, {3, 4}, {2, 3},
                                 {3, 5}, {1, 2}, {2, 5}, {1, 3}};
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            for (const auto& pq : ratios) {
                const ResonanceSpec spec = resonant_radius(model, pq[0], pq[1]);
                csv << name << ',' << pq[0] << ',' << pq[1] << ','
                    << num(double(pq[0]) / pq[1]) << ',' << num(spec.r_kep) << ','
                    << num(spec.r_res) << ','
                    << num(std::abs(spec.r_kep - spec.r_res) / spec.r_kep) << '\n';
            }
        }
    }
    {
        // corotation semi-amplitude as the eccentricity varies
        auto csv = out.open_csv("amplitude_scan.csv");
        csv << "body,e,pendulum_semi_amplitude_km2_s\n";
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            const ResonanceSpec spec = resonant_radius(model, 1, 1);
            const ExpansionCenter center =
                ExpansionCenter::at_radius(model, spec.r_res, o.rho_order);
            const EpicyclicHamiltonian epi = assemble(center, model);
            for (int i = 0; i < 100; ++i) {
                const double e = 1e-3 + (0.5 - 1e-3) * i / 99.0;
                const ReducedHamiltonian red = reduce_corotation(epi, e);
                std::string pend = "nan";
                try {
                    pend = num(pendulum_amplitude(red));
                } catch (const std::domain_error&) {
                }
                csv << name << ',' << num(e) << ',' << pend << '\n';
            }
        }
    }
    {
        // equilibrium branch diagrams: location and stability against e
        auto csv = out.open_csv("branch_diagram.csv");
        csv << "body,resonance,e,angle_rad,action_km2_s,kind\n";
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            for (int q = 1; q <= 3; ++q) {
                const ResonanceSpec spec = resonant_radius(model, 1, q);
                const ExpansionCenter center =
                    ExpansionCenter::at_radius(model, spec.r_res, o.rho_order);
                const EpicyclicHamiltonian epi = assemble(center, model);
                for (int i = 0; i < 250; ++i) {
                    const double e = 1e-3 + (0.5 - 1e-3) * i / 249.0;
                    const ReducedHamiltonian red =
                        q == 1 ? reduce_corotation(epi, e) : reduce_lindblad(epi, spec, e);
                    for (const auto& pt : find_equilibria(red, 24))
                        csv << name << ',' << spec.label << ',' << num(e) << ','
                            << num(pt.angle) << ',' << num(pt.action) << ','
                            << kind_name(pt.kind) << '\n';
                }
            }
        }
    }
    {
        // phase portraits at e = 1e-3 for each (body, resonance)
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            for (int q = 1; q <= 3; ++q) {
                const ResonanceSpec spec = resonant_radius(model, 1, q);
                const ReducedHamiltonian red = build_reduced(model, spec, o.rho_order, 1e-3);
                const auto points = find_equilibria(red);
                double lo = 1e300, hi = -1e300;
                for (const auto& p : points) {
                    lo = std::min(lo, p.action);
                    hi = std::max(hi, p.action);
                }
                const double pad = std::max(1e-3, 0.75 * (hi - lo));
                lo -= pad;
                hi += pad;
                auto csv = out.open_csv(std::string("portrait_") + name + "_1" +
                                        std::to_string(q) + ".csv");
                csv << "angle_rad,action_km2_s,energy_km2_s2\n";
                constexpr int kGrid = 48;
                for (int ia = 0; ia <= kGrid; ++ia) {
                    const double ang = 2.0 * kPi * ia / kGrid;
                    for (int ix = 0; ix <= kGrid; ++ix) {
                        const double x = lo + (hi - lo) * ix / kGrid;
                        csv << num(ang) << ',' << num(x) << ',' << num(red.energy(x, ang))
                            << '\n';
                    }
                }
            }
        }
    }
    {
        auto csv = out.open_csv("bifurcations.csv");
        csv << "body,resonance,e_crit,angle_rad,kind,direction\n";
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            for (int q = 1; q <= 3; ++q) {
                const ResonanceSpec spec = resonant_radius(model, 1, q);
                const ExpansionCenter center =
                    ExpansionCenter::at_radius(model, spec.r_res, o.rho_order);
                const EpicyclicHamiltonian epi = assemble(center, model);
                auto builder = [&](double e) {
                    return spec.p == spec.q ? reduce_corotation(epi, e)
                                            : reduce_lindblad(epi, spec, e);
                };
                for (const auto& ev : bifurcation_scan(builder, 1e-3, 0.5, steps, grid))
                    csv << name << ',' << spec.label << ',' << num(ev.e_crit) << ','
                        << num(ev.angle) << ',' << event_kind(ev) << ','
                        << event_direction(ev) << '\n';
            }
        }
    }
    {
        auto csv = out.open_csv("kam.csv");
        csv << "body,resonance,order,omega1_rad_s,omega2_rad_s,A_per_km2_s,d04,determinant,"
               "verdict\n";
        for (const char* name : {"AS", "HA"}) {
            CommonOpts ob = o;
            ob.body = name;
            const PotentialModel model = PotentialModel::build(resolve_body(ob), o.ell_max);
            std::vector<std::pair<std::string, double>> radii;
            for (int q = 1; q <= 3; ++q) {
                const ResonanceSpec spec = resonant_radius(model, 1, q);
                radii.emplace_back(spec.label, spec.r_res);
            }
            for (const auto& r : nondegeneracy_report(model, radii))
                csv << r.body << ',' << r.resonance << ',' << r.order << ',' << num(r.omega1)
                    << ',' << num(r.omega2) << ',' << num(r.coupling) << ',' << num(r.d04) << ','
                    << num(r.determinant) << ','
                    << (r.non_degenerate ? "non-degenerate" : "degenerate") << '\n';
        }
    }

    // verification report
    VerificationOptions vopt;
    vopt.scan_steps = steps;
    vopt.scan_grid = grid;
    const VerificationReport rep = run_verification(vopt);
    auto report = out.open_csv("report.txt");
    int hard_failures = 0;
    for (int crit = 1; crit <= 10; ++crit) {
        int pass = 0, total = 0;
        for (const auto& c : rep.checks) {
            if (c.criterion != crit) continue;
            ++total;
            if (c.pass) ++pass;
        }
        std::ostringstream line;
        line << "criterion " << crit << ": " << (pass == total ? "PASS" : "FAIL") << " (" << pass
             << "/" << total << " checks)";
        report << line.str() << "\n";
        std::cout << line.str() << "\n";
        for (const auto& c : rep.checks) {
            if (c.criterion != crit || c.pass) continue;
            const bool documented = c.label.find("truncation remainder") != std::string::npos;
            report << "  FAIL " << c.label << (c.detail.empty() ? "" : ": " + c.detail)
                   << (documented ? " [documented limitation]" : "") << "\n";
            std::cout << "  FAIL " << c.label << (c.detail.empty() ? "" : ": " + c.detail)
                      << (documented ? " [documented limitation]" : "") << "\n";
            if (!documented) ++hard_failures;
        }
    }
    std::cout << "artifacts in " << out.path().string() << "\n";
    return hard_failures == 0 ? 0 : 3;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Ring-resonance analysis for a rotating triaxial ellipsoid"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts common;

    // potential sample
    auto* potential = app.add_subcommand("potential", "Potential evaluation");
    auto* sample = potential->add_subcommand("sample", "Sample U_s, U_ns, n, kappa on a grid");
    double r_min = 0.0, r_max = 0.0;
    int r_steps = 200, theta_steps = 8;
    add_common(sample, common);
    sample->add_option("--r-min", r_min, "Start radius, km (default 1.05 a)");
    sample->add_option("--r-max", r_max, "End radius, km (default 3 r_kep)");
    sample->add_option("--r-steps", r_steps, "Radial samples")->capture_default_str();
    sample->add_option("--theta-steps", theta_steps, "Angular samples on [0, pi)")
        ->capture_default_str();

    // resonance locate / reduce
    auto* resonance = app.add_subcommand("resonance", "Resonance location and reduction");
    auto* locate = resonance->add_subcommand("locate", "Solve the resonant radius");
    int p = 1, q = 1;
    add_common(locate, common);
    locate->add_option("--p", p, "Resonance numerator")->capture_default_str();
    locate->add_option("--q", q, "Resonance denominator")->capture_default_str();
    auto* reduce = resonance->add_subcommand("reduce", "Reduce to the 1-DOF resonant Hamiltonian");
    std::string res_label = "1:1";
    double ecc = 1e-3;
    add_common(reduce, common);
    reduce->add_option("--res", res_label, "Resonance (1:1, 1:2, 1:3)")->capture_default_str();
    reduce->add_option("--e", ecc, "Eccentricity")->capture_default_str();

    // hamiltonian expand
    auto* ham = app.add_subcommand("hamiltonian", "Series expansion");
    auto* expand = ham->add_subcommand("expand", "Dump the epicyclic Hamiltonian series");
    std::string expand_res = "1:1", expand_format = "csv";
    add_common(expand, common);
    expand->add_option("--resonance", expand_res, "Expansion center (1:1, 1:2, 1:3)")
        ->capture_default_str();
    expand->add_option("--format", expand_format, "Output format")->capture_default_str();

    // kam-check
    auto* kam = app.add_subcommand("kam-check", "Non-degeneracy report");
    add_common(kam, common);

    // portrait / equilibria / amplitude / bifurcation
    auto* portrait = app.add_subcommand("portrait", "Phase portrait grid and separatrix");
    std::string por_res = "1:1";
    double por_e = 1e-3;
    int por_grid = 64;
    add_common(portrait, common);
    portrait->add_option("--res", por_res, "Resonance")->capture_default_str();
    portrait->add_option("--e", por_e, "Eccentricity")->capture_default_str();
    portrait->add_option("--grid", por_grid, "Grid resolution")->capture_default_str();

    auto* equilibria = app.add_subcommand("equilibria", "Equilibrium points");
    std::string eq_res = "1:1";
    double eq_e = 1e-3;
    add_common(equilibria, common);
    equilibria->add_option("--res", eq_res, "Resonance")->capture_default_str();
    equilibria->add_option("--e", eq_e, "Eccentricity")->capture_default_str();

    auto* amplitude = app.add_subcommand("amplitude", "Libration amplitudes over e");
    std::string amp_res = "1:1", amp_range = "0.001:0.5:100";
    add_common(amplitude, common);
    amplitude->add_option("--res", amp_res, "Resonance")->capture_default_str();
    amplitude->add_option("--e-range", amp_range, "lo:hi[:n]")->capture_default_str();

    auto* bifurcation = app.add_subcommand("bifurcation", "Bifurcation scan over e");
    std::string bif_res = "1:1", bif_range = "0.001:0.5";
    int bif_steps = 500, bif_grid = 64;
    add_common(bifurcation, common);
    bifurcation->add_option("--res", bif_res, "Resonance")->capture_default_str();
    bifurcation->add_option("--e-range", bif_range, "lo:hi")->capture_default_str();
    bifurcation->add_option("--steps", bif_steps, "Grid points")->capture_default_str();
    bifurcation->add_option("--grid", bif_grid, "Off-axis search grid")->capture_default_str();

    auto* reproduce = app.add_subcommand("reproduce-paper",
                                         "Regenerate benchmark tables and the comparison report");
    int rep_steps = 500, rep_grid = 64;
    add_common(reproduce, common);
    reproduce->add_option("--steps", rep_steps, "Bifurcation scan grid points")
        ->capture_default_str();
    reproduce->add_option("--grid", rep_grid, "Off-axis search grid")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sample->parsed()) return cmd_potential_sample(common, r_min, r_max, r_steps,
                                                          theta_steps, argc, argv);
        if (locate->parsed()) return cmd_resonance_locate(common, p, q, argc, argv);
        if (reduce->parsed()) return cmd_resonance_reduce(common, res_label, ecc, argc, argv);
        if (expand->parsed())
            return cmd_hamiltonian_expand(common, expand_res, expand_format, argc, argv);
        if (kam->parsed()) return cmd_kam_check(common, argc, argv);
        if (portrait->parsed()) return cmd_portrait(common, por_res, por_e, por_grid, argc, argv);
        if (equilibria->parsed()) return cmd_equilibria(common, eq_res, eq_e, argc, argv);
        if (amplitude->parsed())
            return cmd_amplitude(common, amp_res, parse_erange(amp_range), argc, argv);
        if (bifurcation->parsed())
            return cmd_bifurcation(common, bif_res, parse_erange(bif_range), bif_steps, bif_grid,
                                   argc, argv);
        if (reproduce->parsed()) return cmd_reproduce(common, rep_steps, rep_grid, argc, argv);
        std::cerr << app.help();
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ringres::cli
