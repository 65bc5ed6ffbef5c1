#include "experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "zpf/dipole_flux.hpp"
#include "zpf/errors.hpp"
#include "zpf/field_core.hpp"
#include "zpf/filament.hpp"
#include "zpf/fringe.hpp"
#include "zpf/splitter.hpp"
#include "zpf/toroid.hpp"

namespace zpflab {

namespace {

using zpf::kPi;
using zpf::kTwoPi;
namespace fl = zpf::filament;

constexpr double kBig = 1e300;

fl::MediumModel read_medium(Params& root) {
    auto& p = root.child("medium");
    fl::MediumModel m;
    m.n0 = p.positive("n0", m.n0);
    m.n2 = p.positive("n2", m.n2);
    m.saturation_field = p.positive("saturation_field", m.saturation_field);
    m.magnetic.f_max = p.number("f_max", m.magnetic.f_max, 0.0, kBig);
    m.magnetic.s_sat = p.positive("s_sat", m.magnetic.s_sat);
    m.validate();
    return m;
}

fl::SolveOptions read_solver(Params& root) {
    auto& p = root.child("solver");
    fl::SolveOptions o;
    o.step = p.number("step", o.step, 1e-5, 0.1);
    o.nodes = static_cast<int>(p.integer("nodes", o.nodes, 0, 20));
    o.max_scaled_radius = p.number("max_scaled_radius", o.max_scaled_radius, 1.0, 1e4);
    o.tail_floor = p.number("tail_floor", o.tail_floor, 1e-15, 1e-3);
    return o;
}

std::string profile_csv(const fl::RadialProfile& pr) {
    Csv csv({"r", "field", "slope"});
    for (std::size_t i = 0; i < pr.r.size(); ++i) csv.row({pr.r[i], pr.field[i], pr.slope.empty() ? 0.0 : pr.slope[i]});
    return csv.str();
}

json profile_summary(const fl::RadialProfile& pr) {
    const auto pw = fl::beam_power(pr);
    return {{"peak", pr.peak},         {"k", pr.k},
            {"q", pr.q},               {"power", pw.power},
            {"power_truncated", pw.truncated},
            {"dimensionless_power", fl::dimensionless_power(pr)},
            {"diffraction_length", fl::diffraction_length(pr)},
            {"half_width", pr.half_width()},
            {"residual", pr.residual}, {"nodes", pr.nodes}};
}

// Flat float64 dump of a complex grid (re, im interleaved, row-major) plus a text header.
void dump_field(OutputDir& out, const std::string& stem, const fl::Field2D& f, double z) {
    const std::string bin = stem + ".bin", hdr = stem + ".hdr";
    {
        std::ofstream os(out.path(bin), std::ios::binary);
        for (const auto& v : f.data) {
            const double pair[2] = {v.real(), v.imag()};
            os.write(reinterpret_cast<const char*>(pair), sizeof pair);
        }
        if (!os) throw std::ios_base::failure("cannot write " + out.path(bin).string());
    }
    out.add(bin);
    std::ostringstream h;
    h << "data = " << bin << "\n"
      << "dtype = float64\n"
      << "byte_order = " << (std::endian::native == std::endian::little ? "little" : "big") << "\n"
      << "layout = row-major, index = iy * n + ix, interleaved real imag\n"
      << "n = " << f.n << "\n"
      << "extent = " << format_number(f.extent) << "\n"
      << "dx = " << format_number(f.dx()) << "\n"
      << "origin = " << format_number(f.coord(0)) << "\n"
      << "z = " << format_number(z) << "\n";
    out.write_text(hdr, h.str());
}

Job plan_fringe(Params& p, const RunConfig& c) {
    auto& gp = p.child("geometry");
    zpf::fringe::FringeGeometry g;
    g.s1 = gp.vec3("s1", g.s1);
    g.s2 = gp.vec3("s2", g.s2);
    g.r1 = gp.vec3("r1", g.r1);
    g.r2 = gp.vec3("r2", g.r2);
    g.wavelength = gp.positive("wavelength", g.wavelength);
    g.validate();
    zpf::fringe::FringeParams fp;
    fp.zpf_amplitude = p.number("zpf_amplitude", fp.zpf_amplitude, 0.0, kBig);
    fp.conventional_amplitude = p.number("conventional_amplitude", fp.conventional_amplitude, 0.0, kBig);
    fp.shots = p.integer("shots", fp.shots, 1, std::int64_t{1} << 40);
    fp.sampling = p.choice("sampling", "stratified", {"stratified", "independent"}) == "stratified"
                      ? zpf::fringe::PhaseSampling::Stratified
                      : zpf::fringe::PhaseSampling::Independent;
    fp.stochastic_zpf = p.flag("stochastic_zpf", false);
    fp.seed = c.seed;
    fp.validate();
    const auto points = static_cast<std::size_t>(p.integer("points", 64, 4, 100000));
    const int periods = static_cast<int>(p.integer("periods", 2, 2, 1000));

    return [=](OutputDir& out, json& summary) {
        const auto deltas = zpf::fringe::uniform_deltas(points, periods, g.wavelength);
        const auto table = zpf::fringe::correlation_scan(g, fp, deltas);
        Csv csv({"delta", "mean", "stderr", "oracle"});
        std::vector<double> d, mean, oracle;
        double worst = 0.0;
        for (const auto& r : table) {
            csv.row({r.delta, r.mean, r.stderr_, r.oracle});
            d.push_back(r.delta);
            mean.push_back(r.mean);
            oracle.push_back(r.oracle);
            if (r.stderr_ > 0) worst = std::max(worst, std::abs(r.mean - r.oracle) / r.stderr_);
        }
        out.write_text("fringe.csv", csv.str());
        out.write_text("fringe_signal.dat", series(d, mean));
        out.write_text("fringe_oracle.dat", series(d, oracle));
        const auto h = zpf::fringe::fringe_analysis(table, g.wavelength);
        const double z = fp.zpf_amplitude, f = fp.conventional_amplitude;
        summary = {{"points", table.size()},
                   {"max_abs_deviation_in_stderr", worst},
                   {"harmonic_first", h.first},
                   {"harmonic_second", h.second},
                   {"harmonic_ratio", h.first != 0.0 ? h.second / h.first : 0.0},
                   {"expected_ratio", z > 0 ? f * f / (16 * z * z) : 0.0},
                   {"dominant_period", h.first >= h.second ? 2 * g.wavelength : g.wavelength}};
    };
}

Job plan_splitter(Params& p, const RunConfig& c) {
    zpf::splitter::SplitterSpec s;
    s.reflectance = p.number("reflectance", s.reflectance, 0.0, 1.0);
    s.convention = p.choice("convention", "reflected-leads", {"reflected-leads", "reflected-lags"}) == "reflected-leads"
                       ? zpf::splitter::PhaseConvention::ReflectedLeads
                       : zpf::splitter::PhaseConvention::ReflectedLags;
    s.validate();
    const double amp1 = p.number("amplitude1", 1.0, 0.0, kBig);
    const double amp2 = p.number("amplitude2", 1.0, 0.0, kBig);
    const double zpf_level = p.number("zpf_level", 1.0, 0.0, kBig);
    const auto shots = p.integer("shots", 200000, 1000, std::int64_t{1} << 40);
    const auto points = static_cast<int>(p.integer("points", 64, 2, 100000));
    const auto seed = c.seed;

    return [=](OutputDir& out, json& summary) {
        using namespace zpf::splitter;
        const double a2 = amp2 > 0 ? amp2 : zpf_level;
        const Phasor in1{amp1, 0.0};
        const double base = relative_phase(in1, Phasor{a2, 0.0}, s);
        Csv csv({"theta", "out1", "out2", "product"});
        std::vector<double> th, prod;
        for (int i = 0; i < points; ++i) {
            const double theta = kTwoPi * i / points;
            const auto [o1, o2] = interfere_two_sources(in1, Phasor::from_complex(std::polar(a2, base - theta)), s);
            csv.row({theta, o1.intensity(), o2.intensity(), o1.intensity() * o2.intensity()});
            th.push_back(theta);
            prod.push_back(o1.intensity() * o2.intensity());
        }
        out.write_text("splitter.csv", csv.str());
        out.write_text("splitter_product.dat", series(th, prod));
        const auto st = coalescence_statistics(amp1, amp2, zpf_level, shots, seed, s);
        summary = {{"mean_product", st.mean_product},
                   {"stderr", st.stderr_},
                   {"baseline_product", st.baseline_product},
                   {"product_over_baseline", st.baseline_product > 0 ? st.mean_product / st.baseline_product : 0.0},
                   {"min_product", st.min_product},
                   {"sampled_min", st.sampled_min},
                   {"second_amplitude", st.second_amplitude}};
    };
}

Job plan_dipole(Params& p, const RunConfig& c) {
    const auto pc = c.constants();
    zpf::dipole::DipoleSource d;
    d.omega = p.positive("omega", d.omega);
    d.moment = p.positive("moment", d.moment);
    d.validate();
    zpf::dipole::SphereQuadrature q;
    q.radius = p.positive("radius", q.radius);
    q.nodes = static_cast<int>(p.integer("nodes", q.nodes, 16, 10'000'000));
    q.azimuth_nodes = static_cast<int>(p.integer("azimuth_nodes", q.azimuth_nodes, 4, 100000));
    q.validate(d.wavelength(pc));
    const double amplitude = p.positive("amplitude", 1.0);
    const double phase = p.number("phase", -kPi / 2, -kBig, kBig);

    return [=](OutputDir& out, json& summary) {
        const auto r = zpf::dipole::compare_inputs(d, amplitude, phase, q, pc);
        Csv csv({"case", "phi_x", "phi_y", "phi_total", "ratio"});
        csv.row("spherical", {r.spherical.phi_x, r.spherical.phi_y, r.spherical.total(), r.ratio});
        csv.row("plane", {r.plane.phi_x, r.plane.phi_y, r.plane.total(), 1.0});
        out.write_text("dipole_flux.csv", csv.str());
        const double tot = r.spherical.total();
        summary = {{"spherical_total", tot},
                   {"plane_total", r.plane.total()},
                   {"ratio", r.ratio},
                   {"spherical_xy_asymmetry", tot != 0.0 ? std::abs(r.spherical.phi_x - r.spherical.phi_y) / std::abs(tot) : 0.0},
                   {"plane_phi_x", r.plane.phi_x},
                   {"plane_projection_abs2", std::norm(r.plane_projection)},
                   {"plane_scale", r.plane_scale}};
    };
}

Job plan_filament_solve(Params& p, const RunConfig& c) {
    const auto pc = c.constants();
    const auto m = read_medium(p);
    const auto o = read_solver(p);
    const double omega = p.positive("omega", 1.0);
    const double peak = p.positive("peak", 1.0);

    return [=](OutputDir& out, json& summary) {
        const auto pr = fl::solve_profile(m, omega, peak, o, pc);
        const auto s = profile_summary(pr);
        Csv csv({"peak", "power", "k", "q", "dimensionless_power", "residual"});
        csv.row({pr.peak, s["power"].get<double>(), pr.k, pr.q, s["dimensionless_power"].get<double>(), pr.residual});
        out.write_text("filament_summary.csv", csv.str());
        out.write_text("filament_profile.csv", profile_csv(pr));
        out.write_text("filament_profile.dat", series(pr.r, pr.field));
        summary = s;
    };
}

Job plan_filament_propagate(Params& p, const RunConfig& c) {
    const auto pc = c.constants();
    const auto m = read_medium(p);
    const auto so = read_solver(p);
    const double omega = p.positive("omega", 1.0);
    const double peak = p.positive("peak", 1.0);
    auto& gp = p.child("grid");
    const int n = static_cast<int>(gp.integer("n", 256, 16, 8192));
    if (n % 2) throw ConfigError("'parameters.grid.n' must be even");
    const double extent_scale = gp.positive("extent_decay_lengths", 32.0);
    const double dz_frac = p.positive("dz_diffraction_lengths", 0.02);
    const auto steps = static_cast<int>(p.integer("steps", 1000, 1, 10'000'000));
    const auto every = static_cast<int>(p.integer("snapshot_every", 250, 0, 10'000'000));
    const double scale = p.positive("amplitude_scale", 1.0);
    const double pair_sep = p.number("pair_separation_half_widths", 0.0, 0.0, kBig);
    const double pair_phase = p.number("pair_phase", 0.0, -kBig, kBig);

    return [=](OutputDir& out, json& summary) {
        const auto pr = fl::solve_profile(m, omega, peak, so, pc);
        const double extent = extent_scale / pr.q, ld = fl::diffraction_length(pr);
        fl::Field2D init;
        if (pair_sep > 0.0) {
            const double sep = pair_sep * pr.half_width();
            init = fl::embed_profile(pr, n, extent, -sep / 2, 0.0, scale);
            const auto b = fl::embed_profile(pr, n, extent, sep / 2, 0.0, std::polar(scale, pair_phase));
            for (std::size_t i = 0; i < init.data.size(); ++i) init.data[i] += b.data[i];
        } else {
            init = fl::embed_profile(pr, n, extent, 0.0, 0.0, scale);
        }
        fl::PropagateOptions o;
        o.dz = dz_frac * ld;
        o.steps = steps;
        o.snapshot_every = every;
        const auto h = fl::propagate(init, m, omega, o, pc);

        Csv power({"z", "power"});
        for (std::size_t i = 0; i < h.z.size(); ++i) power.row({h.z[i], h.power[i]});
        out.write_text("propagate_power.csv", power.str());
        out.write_text("propagate_power.dat", series(h.z, h.power));
        Csv snaps({"z", "power", "rms_width", "centroid_separation", "shape_drift"});
        std::vector<double> zs, widths;
        for (std::size_t i = 0; i < h.snapshots.size(); ++i) {
            const auto& f = h.snapshots[i];
            snaps.row({h.snapshot_z[i], fl::grid_power(f), fl::rms_width(f), fl::centroid_separation(f),
                       fl::shape_drift(f, h.snapshots.front())});
            zs.push_back(h.snapshot_z[i]);
            widths.push_back(fl::rms_width(f));
            char stem[32];
            std::snprintf(stem, sizeof stem, "field_%04zu", i);
            dump_field(out, stem, f, h.snapshot_z[i]);
        }
        out.write_text("propagate_snapshots.csv", snaps.str());
        out.write_text("propagate_width.dat", series(zs, widths));
        out.write_text("filament_profile.dat", series(pr.r, pr.field));
        summary = profile_summary(pr);
        summary["grid_n"] = n;
        summary["extent"] = extent;
        summary["dz"] = o.dz;
        summary["length_diffraction_lengths"] = steps * dz_frac;
        summary["shape_drift"] = fl::shape_drift(h.snapshots.back(), h.snapshots.front());
        summary["max_step_power_change"] = h.max_step_power_change;
        summary["band_edge_fraction"] = fl::band_edge_fraction(h.snapshots.back());
    };
}

Job plan_toroid(Params& p, const RunConfig& c) {
    using namespace zpf::toroid;
    const auto pc = c.constants();
    const auto m = read_medium(p);
    const auto so = read_solver(p);
    const double omega = p.positive("omega", 1.0);
    const double peak = p.positive("peak", 1.0);
    const auto points = static_cast<int>(p.integer("points", 64, 4, 100000));
    RotationOptions ro;
    auto& qp = p.child("quadrature");
    ro.radial_panels = static_cast<int>(qp.integer("radial_panels", ro.radial_panels, 1, 100000));
    ro.panel_nodes = static_cast<int>(qp.integer("panel_nodes", ro.panel_nodes, 2, 64));
    ro.azimuth_panels = static_cast<int>(qp.integer("azimuth_panels", ro.azimuth_panels, 4, 100000));
    if (ro.azimuth_panels % 4) throw ConfigError("'parameters.quadrature.azimuth_panels' must be a multiple of 4");
    ro.support_floor = qp.number("support_floor", ro.support_floor, 1e-12, 0.49);
    // 0 selects ten windings around the natural one, 2 pi R0 / Lambda
    const auto m_lo = static_cast<int>(p.integer("m_min", 0, 0, 1'000'000));
    const auto m_hi = static_cast<int>(p.integer("m_max", 0, 0, 1'000'000));
    const auto adjust = p.choice("adjustment", "frequency", {"frequency", "medium"}) == "frequency"
                            ? Adjustment::Frequency
                            : Adjustment::Medium;
    const auto speed = p.choice("transit_speed", "group", {"group", "phase"}) == "group" ? TransitSpeed::Group
                                                                                       : TransitSpeed::Phase;

    return [=](OutputDir& out, json& summary) {
        const auto pr = fl::solve_profile(m, omega, peak, so, pc);
        const auto carrier = carrier_of(pr, pc);
        const auto table = response_table(pr, carrier, m, points, ro);
        Csv csv({"curvature", "gamma"});
        std::vector<double> cs, gs;
        for (const auto& r : table) {
            csv.row({r.curvature, r.gamma});
            cs.push_back(r.curvature);
            gs.push_back(r.gamma);
        }
        out.write_text("toroid_response.csv", csv.str());
        out.write_text("toroid_gamma.dat", series(cs, gs));
        summary = {{"gamma_at_zero", table.front().gamma}, {"max_curvature", table.back().curvature}};

        FixedPointOptions fo;
        fo.scan_points = points;
        fo.rotation = ro;
        const auto fp = find_stable_curvature(pr, carrier, m, fo);
        std::ostringstream side;
        side << "curvature = " << format_number(fp.curvature) << "\n"
             << "gamma = " << format_number(fp.gamma) << "\n"
             << "slope = " << format_number(fp.slope) << "\n"
             << "radius = " << format_number(fp.radius()) << "\n";
        out.write_text("toroid_fixed_point.txt", side.str());
        summary["curvature"] = fp.curvature;
        summary["radius"] = fp.radius();
        summary["slope"] = fp.slope;

        QuantizeSpec qs;
        qs.carrier = carrier;
        qs.n0 = m.n0;
        qs.transverse_q = pr.q;
        qs.critical_power = fl::beam_power(pr).power;
        qs.adjustment = adjust;
        qs.speed = speed;
        const int natural = static_cast<int>(std::lround(fp.radius() * carrier.k));
        const int m_min = m_lo ? m_lo : std::max(1, natural - 5);
        const int m_max = m_hi ? m_hi : natural + 4;
        const auto sol = quantize_torus(fp.curvature, qs, m_min, m_max, pc);
        summary["natural_winding"] = kTwoPi * fp.radius() / carrier.period();
        Csv tab({"m", "R0", "Lambda", "energy", "freq_shift"});
        double worst = 0.0;
        bool increasing = true;
        for (std::size_t i = 0; i < sol.size(); ++i) {
            const auto& s = sol[i];
            tab.row({static_cast<double>(s.m), s.radius, s.period, s.energy, s.freq_shift});
            worst = std::max(worst, s.residual);
            if (i > 0 && !(s.energy > sol[i - 1].energy)) increasing = false;
        }
        out.write_text("toroid_solutions.csv", tab.str());
        summary["solutions"] = sol.size();
        summary["max_winding_residual"] = worst;
        summary["energy_increasing"] = increasing;
    };
}

Job plan_planck(Params& p, const RunConfig& c) {
    const auto pc = c.constants();
    const double nu = p.positive("frequency", 1.0);
    const double t_min = p.positive("t_min", 0.1);
    const double t_max = p.positive("t_max", 1000.0);
    if (!(t_max > t_min)) throw ConfigError("'parameters.t_max' must exceed 'parameters.t_min'");
    const auto points = static_cast<int>(p.integer("points", 64, 2, 1'000'000));
    const double x_probe = p.positive("x_probe", 0.01);

    return [=](OutputDir& out, json& summary) {
        using zpf::PlanckLaw;
        Csv csv({"temperature", "x", "first_law", "second_law", "classical"});
        std::vector<double> ts, second;
        for (int i = 0; i < points; ++i) {
            const double t = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (points - 1));
            const double kt = pc.kB * t;
            const double s = zpf::planck_mean_energy(nu, t, PlanckLaw::Second, pc);
            csv.row({t, pc.h * nu / kt, zpf::planck_mean_energy(nu, t, PlanckLaw::First, pc), s, kt});
            ts.push_back(t);
            second.push_back(s);
        }
        out.write_text("planck.csv", csv.str());
        out.write_text("planck_second_law.dat", series(ts, second));
        const double t = pc.h * nu / (pc.kB * x_probe);
        const double excess = zpf::planck_mean_energy(nu, t, PlanckLaw::Second, pc) / (pc.kB * t) - 1.0;
        summary = {{"x_probe", x_probe},
                   {"relative_excess", excess},
                   {"x2_over_12", x_probe * x_probe / 12},
                   {"excess_over_x2_12", excess / (x_probe * x_probe / 12)}};
    };
}

Job plan_quantum(Params& p, const RunConfig& c) {
    const auto pc = c.constants();
    const auto freqs = p.numbers("frequencies", {0.5, 1.0, 2.0, 4.0});
    if (freqs.empty()) throw ConfigError("'parameters.frequencies' must not be empty");
    for (double f : freqs)
        if (!(f > 0)) throw ConfigError("'parameters.frequencies' entries must be positive");
    const double quanta = p.positive("quanta", 1.0);

    return [=](OutputDir& out, json& summary) {
        Csv csv({"frequency", "energy", "action", "action_over_h"});
        double worst = 0.0;
        for (double f : freqs) {
            const double w = quanta * pc.h * f;
            const double a = zpf::spectral_quantum(zpf::SpectrumSample::line(f, w));
            csv.row({f, w, a, a / pc.h});
            worst = std::max(worst, std::abs(a / (quanta * pc.h) - 1.0));
        }
        out.write_text("quantum.csv", csv.str());
        summary = {{"lines", freqs.size()}, {"max_relative_error", worst}};
    };
}

}  // namespace

const std::vector<ExperimentEntry>& experiments() {
    static const std::vector<ExperimentEntry> all{
        {"fringe", plan_fringe},
        {"splitter", plan_splitter},
        {"dipole-flux", plan_dipole},
        {"filament-solve", plan_filament_solve},
        {"filament-propagate", plan_filament_propagate},
        {"toroid", plan_toroid},
        {"planck", plan_planck},
        {"quantum", plan_quantum},
    };
    return all;
}

const ExperimentEntry& experiment(const std::string& name) {
    for (const auto& e : experiments())
        if (e.name == name) return e;
    throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace zpflab
