#include "zpf/dipole_flux.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "zpf/errors.hpp"
#include "zpf/quadrature.hpp"

namespace zpf::dipole {

namespace {

constexpr cdouble kI{0.0, 1.0};

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
CVec3 cross(const Vec3& a, const CVec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
CVec3 scale(const Vec3& v, cdouble s) { return {v[0] * s, v[1] * s, v[2] * s}; }

// j1(x)/x and j0(x) - j1(x)/x, with series near the origin.
double j1_over_x(double x) {
    if (x < 1e-3) return 1.0 / 3.0 - x * x / 30.0 + x * x * x * x / 840.0;
    return std::sph_bessel(1, x) / x;
}
double j1_derivative_term(double x) {
    if (x < 1e-3) return 2.0 / 3.0 - x * x / 15.0 + x * x * x * x / 280.0;
    return std::sph_bessel(0, x) - std::sph_bessel(1, x) / x;
}
double j1(double x) { return x < 1e-3 ? x * j1_over_x(x) : std::sph_bessel(1, x); }

// Regular z-oriented dipolar mode with field `amp` * z-hat at the origin.
ComplexFields regular_mode(cdouble amp, const Vec3& point, double k, double eta) {
    const double r = norm(point);
    if (r == 0.0) return {{0.0, 0.0, amp}, {0.0, 0.0, 0.0}};
    const Vec3 n{point[0] / r, point[1] / r, point[2] / r};
    const Vec3 zhat{0.0, 0.0, 1.0};
    const double x = k * r;
    const double a = 3.0 * n[2] * j1_over_x(x);
    const double b = 1.5 * j1_derivative_term(x);
    ComplexFields f;
    for (int c = 0; c < 3; ++c) f.e[c] = amp * (a * n[c] - b * (n[2] * n[c] - zhat[c]));
    f.h = scale(cross(zhat, n), -1.5 * kI * amp * j1(x) / eta);
    return f;
}

struct Frame {
    Vec3 axis, e1, e2;
};

Frame frame_about(const Vec3& axis) {
    const Vec3 a{axis[0] / norm(axis), axis[1] / norm(axis), axis[2] / norm(axis)};
    const Vec3 helper = std::abs(a[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    Vec3 e1 = cross(helper, a);
    const double l = norm(e1);
    e1 = {e1[0] / l, e1[1] / l, e1[2] / l};
    return {a, e1, cross(a, e1)};
}

Vec3 polar_axis_for(const IncidentField& inc) {
    return inc.kind == IncidentKind::PlaneWave ? inc.propagation : Vec3{0.0, 0.0, 1.0};
}

// Visits every node of the sphere rule with (unit normal, area weight).
template <class F>
void for_each_node(const SphereQuadrature& q, const Vec3& polar_axis, F visit) {
    const auto rule = gauss_legendre(static_cast<std::size_t>(q.polar_nodes()));
    const Frame fr = frame_about(polar_axis);
    const double dphi = kTwoPi / q.azimuth_nodes;
    const double r2 = q.radius * q.radius;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double mu = rule.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < q.azimuth_nodes; ++j) {
            const double phi = (j + 0.5) * dphi;
            const double cp = std::cos(phi), sp = std::sin(phi);
            Vec3 n;
            for (int c = 0; c < 3; ++c) n[c] = mu * fr.axis[c] + s * (cp * fr.e1[c] + sp * fr.e2[c]);
            visit(n, rule.weights[i] * dphi * r2);
        }
    }
}

void check_plane_wave_resolution(const SphereQuadrature& q, double k) {
    // Gauss-Legendre resolves exp(i a mu) once n exceeds roughly 0.7 a.
    const double needed = 0.7 * k * q.radius + 16.0;
    if (q.polar_nodes() < needed) {
        std::ostringstream os;
        os << "sphere quadrature: " << q.polar_nodes() << " polar nodes cannot resolve k r = " << k * q.radius
           << " (need about " << static_cast<int>(needed) << ")";
        throw ResolutionError(os.str());
    }
}

}  // namespace

void DipoleSource::validate() const {
    detail::require(norm(position) == 0.0, "dipole must sit at the origin");
    detail::require(axis[0] == 0.0 && axis[1] == 0.0 && axis[2] == 1.0, "dipole axis must be +z");
    detail::require(omega > 0 && moment > 0, "dipole frequency and moment must be positive");
}

void SphereQuadrature::validate(double wavelength) const {
    detail::require(radius > 10.0 * wavelength, "sphere radius must exceed 10 wavelengths");
    detail::require(nodes >= 128, "sphere quadrature needs at least 128 nodes");
    detail::require(azimuth_nodes >= 8 && polar_nodes() >= 8, "sphere quadrature: too few azimuth/polar nodes");
}

void IncidentField::validate() const {
    detail::require(amplitude >= 0 && omega > 0, "incident amplitude must be >= 0 and frequency > 0");
    detail::require(std::abs(norm(polarization) - 1.0) < 1e-12, "incident polarization must be a unit vector");
    if (kind == IncidentKind::PlaneWave) {
        detail::require(std::abs(norm(propagation) - 1.0) < 1e-12, "propagation axis must be a unit vector");
        detail::require(std::abs(dot(polarization, propagation)) < 1e-12, "plane wave must be transverse");
    } else {
        detail::require(std::abs(polarization[2]) == 1.0, "dipolar input must be polarized along the dipole axis");
    }
}

ComplexFields dipole_phasor(const DipoleSource& d, const Vec3& point, const PhysicalConstants& pc) {
    const double r = norm(point);
    if (r == 0.0) throw DomainError("dipole field is singular at the dipole position");
    const double k = d.wavenumber(pc);
    const Vec3 n{point[0] / r, point[1] / r, point[2] / r};
    const Vec3 p{0.0, 0.0, d.moment};
    const cdouble g = std::exp(kI * (k * r));
    const double np = dot(n, p);
    const cdouble near = (1.0 / (r * r * r) - kI * k / (r * r));
    ComplexFields f;
    for (int c = 0; c < 3; ++c) {
        const double transverse = p[c] - n[c] * np;
        const double longitudinal = 3.0 * n[c] * np - p[c];
        f.e[c] = g / (4.0 * kPi * pc.eps0) * (k * k * transverse / r + longitudinal * near);
    }
    f.h = scale(cross(n, p), pc.c * k * k / (4.0 * kPi) * g / r * (1.0 + kI / (k * r)));
    return f;
}

ComplexFields dipole_far_phasor(const DipoleSource& d, const Vec3& point, const PhysicalConstants& pc) {
    const double r = norm(point);
    if (r == 0.0) throw DomainError("dipole field is singular at the dipole position");
    const double k = d.wavenumber(pc);
    const Vec3 n{point[0] / r, point[1] / r, point[2] / r};
    const Vec3 p{0.0, 0.0, d.moment};
    const cdouble g = std::exp(kI * (k * r)) / r;
    const double np = dot(n, p);
    ComplexFields f;
    for (int c = 0; c < 3; ++c) f.e[c] = g * k * k / (4.0 * kPi * pc.eps0) * (p[c] - n[c] * np);
    f.h = scale(cross(n, p), pc.c * k * k / (4.0 * kPi) * g);
    return f;
}

RealFields dipole_fields(const DipoleSource& d, const Vec3& point, double t, const PhysicalConstants& pc) {
    const auto f = dipole_phasor(d, point, pc);
    const cdouble rot = std::exp(-kI * (d.omega * t));
    RealFields out;
    for (int c = 0; c < 3; ++c) {
        out.e[c] = std::real(f.e[c] * rot);
        out.h[c] = std::real(f.h[c] * rot);
    }
    return out;
}

ComplexFields incident_phasor(const IncidentField& inc, const Vec3& point, const PhysicalConstants& pc) {
    const double k = inc.omega / pc.c;
    const double eta = pc.impedance();
    const cdouble amp = std::polar(inc.amplitude, inc.phase);
    if (inc.kind == IncidentKind::ConvergingDipolar) return regular_mode(amp, point, k, eta);
    const cdouble wave = amp * std::exp(kI * (k * dot(inc.propagation, point)));
    ComplexFields f;
    f.e = scale(inc.polarization, wave);
    f.h = scale(cross(inc.propagation, inc.polarization), wave / eta);
    return f;
}

FluxComponents interference_flux(const DipoleSource& d, const IncidentField& inc, const SphereQuadrature& q,
                                 const PhysicalConstants& pc) {
    d.validate();
    inc.validate();
    if (std::abs(inc.omega - d.omega) > 1e-12 * d.omega)
        throw ModelError("interference_flux: incident frequency differs from the dipole frequency");
    const double k = d.wavenumber(pc);
    q.validate(d.wavelength(pc));
    if (inc.kind == IncidentKind::PlaneWave) check_plane_wave_resolution(q, k);

    std::array<std::vector<double>, 3> terms;
    for (auto& t : terms) t.reserve(static_cast<std::size_t>(q.nodes));
    for_each_node(q, polar_axis_for(inc), [&](const Vec3& n, double w) {
        const Vec3 pt{q.radius * n[0], q.radius * n[1], q.radius * n[2]};
        const auto fd = dipole_phasor(d, pt, pc);
        const auto fi = incident_phasor(inc, pt, pc);
        const CVec3 n_ed = cross(n, fd.e);
        const CVec3 n_ei = cross(n, fi.e);
        // (E x c_hat H_c*) . n = H_c* (n x E)_c ; outward flux counted negative.
        for (int c = 0; c < 3; ++c) {
            const cdouble s = std::conj(fi.h[c]) * n_ed[c] + std::conj(fd.h[c]) * n_ei[c];
            terms[c].push_back(-0.5 * w * s.real());
        }
    });
    return {pairwise_sum<double>(terms[0]), pairwise_sum<double>(terms[1]), pairwise_sum<double>(terms[2])};
}

cdouble mode_projection(const IncidentField& inc, const DipoleSource& d, const SphereQuadrature& q,
                        const PhysicalConstants& pc) {
    d.validate();
    inc.validate();
    if (std::abs(inc.omega - d.omega) > 1e-12 * d.omega)
        throw ModelError("mode_projection: incident frequency differs from the dipole frequency");
    const double k = d.wavenumber(pc);
    q.validate(d.wavelength(pc));
    if (inc.kind == IncidentKind::PlaneWave) check_plane_wave_resolution(q, k);

    std::vector<cdouble> overlap;
    std::vector<double> self;
    for_each_node(q, polar_axis_for(inc), [&](const Vec3& n, double w) {
        const Vec3 pt{q.radius * n[0], q.radius * n[1], q.radius * n[2]};
        const auto mode = regular_mode(1.0, pt, k, pc.impedance());
        const auto fi = incident_phasor(inc, pt, pc);
        cdouble o{};
        double m2 = 0.0;
        for (int c = 0; c < 3; ++c) {
            o += std::conj(mode.e[c]) * fi.e[c];
            m2 += std::norm(mode.e[c]);
        }
        overlap.push_back(w * o);
        self.push_back(w * m2);
    });
    return pairwise_sum<cdouble>(overlap) / pairwise_sum<double>(self);
}

FactorTwoReport compare_inputs(const DipoleSource& d, double amplitude, double phase, const SphereQuadrature& q,
                               const PhysicalConstants& pc) {
    IncidentField sph{IncidentKind::ConvergingDipolar, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, amplitude, phase, d.omega};
    IncidentField pw{IncidentKind::PlaneWave, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, amplitude, phase, d.omega};
    FactorTwoReport rep;
    rep.spherical = interference_flux(d, sph, q, pc);
    const cdouble c_sph = mode_projection(sph, d, q, pc);
    rep.plane_projection = mode_projection(pw, d, q, pc);
    // Rescale and rephase the plane wave so its projection equals the
    // spherical input's projection.
    const cdouble fix = c_sph / rep.plane_projection;
    rep.plane_scale = std::abs(fix);
    pw.amplitude *= std::abs(fix);
    pw.phase += std::arg(fix);
    rep.plane = interference_flux(d, pw, q, pc);
    rep.ratio = rep.spherical.total() / rep.plane.total();
    return rep;
}

}  // namespace zpf::dipole
