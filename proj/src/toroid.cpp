#include "zpf/toroid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zpf/errors.hpp"
#include "zpf/quadrature.hpp"

namespace zpf::toroid {

namespace {

void require_profile(const RadialProfile& p) {
    if (p.r.size() < 2 || p.r.size() != p.field.size() || p.peak <= 0.0)
        throw ArgumentError("toroid: profile is empty or not converged");
}

struct RadialRule {
    std::vector<double> r, w;
};

RadialRule panel_rule(double lo, double hi, int panels, int nodes) {
    const auto gl = gauss_legendre(static_cast<std::size_t>(nodes));
    RadialRule rule;
    const double width = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
        const double mid = lo + (k + 0.5) * width;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            rule.r.push_back(mid + 0.5 * width * gl.nodes[i]);
            rule.w.push_back(0.5 * width * gl.weights[i]);
        }
    }
    return rule;
}

void validate_rotation(const RotationOptions& o) {
    detail::require(o.radial_panels >= 1 && o.panel_nodes >= 2 && o.azimuth_panels >= 4 && o.azimuth_panels % 4 == 0,
                    "rotation quadrature: need >= 1 radial panel, >= 2 nodes per panel, azimuth panels a positive multiple of 4");
}

// Linear-response limit of gamma as C -> 0 on the truncated disc.
double gamma_at_zero(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m, const RotationOptions& o) {
    const double rs = support_radius(p, o);
    const auto rule = panel_rule(0.0, rs, o.radial_panels, o.panel_nodes);
    const double slope = m.magnetic.slope_at_zero() * c.k * c.k;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rule.r.size(); ++i) {
        const double r = rule.r[i], e = p.at(r);
        num += rule.w[i] * slope * e * e * 2.0 * e * p.slope_at(r) * r * r;
        den += rule.w[i] * e * e * r;
    }
    const double es = p.at(rs);
    // (-pi int h w' r^2 dr + pi rs^2 w(rs) h(rs)) / (2 pi int w r dr), h = f'(0) k^2 E^2
    return (-num + rs * rs * es * es * slope * es * es) / (2.0 * den);
}

}  // namespace

void CarrierSpec::validate() const {
    detail::require(omega > 0.0 && k > 0.0, "carrier frequency and wavenumber must be positive");
}

CarrierSpec carrier_of(const RadialProfile& p, const PhysicalConstants& pc) {
    require_profile(p);
    return {p.k0 * pc.c, p.k};
}

double CurvedFrame::rho(double r, double theta) const {
    const double v = major_radius + r * std::cos(theta);
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << "curved frame: rho = R + r cos(theta) = " << v << " is not positive (R = " << major_radius << ", r = " << r
           << ")";
        throw ModelError(os.str());
    }
    return v;
}

AnsatzSample straight_ansatz(const RadialProfile& p, const CarrierSpec& c, const Vec3& point, double t) {
    const double r = std::hypot(point[0], point[1]);
    const double e = p.at(r), de = r > 0.0 ? p.slope_at(r) : 0.0;
    const double phi = c.k * point[2] - c.omega * t;
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double ux = r > 0.0 ? point[0] / r : 0.0, uy = r > 0.0 ? point[1] / r : 0.0;
    AnsatzSample s;
    s.e = {e * cp, e * sp, 0.0};
    s.curl = {-c.k * e * cp, -c.k * e * sp, de * (ux * sp - uy * cp)};
    return s;
}

double curl_squared_straight(const RadialProfile& p, const CarrierSpec& c, double r) {
    const double e = p.at(r), de = p.slope_at(r);
    return c.k * c.k * e * e + 0.5 * de * de;
}

double curl_squared_curved(const RadialProfile& p, const CarrierSpec& c, const CurvedFrame& f, double r,
                           double theta) {
    const double ratio = f.major_radius / f.rho(r, theta);
    const double e = p.at(r), de = p.slope_at(r);
    return ratio * ratio * c.k * c.k * e * e + 0.5 * de * de;
}

double delta_mu_straight(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m, double r, double) {
    return m.magnetic(curl_squared_straight(p, c, r));
}

double delta_mu_curved(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m, const CurvedFrame& f,
                       double r, double theta) {
    return m.magnetic(curl_squared_curved(p, c, f, r, theta));
}

double support_radius(const RadialProfile& p, const RotationOptions& o) {
    require_profile(p);
    detail::require(o.support_floor > 0.0 && o.support_floor < 0.5, "support floor must lie in (0, 0.5)");
    const double floor = o.support_floor * p.peak;
    for (std::size_t i = p.r.size() - 1; i > 0; --i)
        if (std::abs(p.field[i - 1]) >= floor) {
            const double a = std::abs(p.field[i - 1]), b = std::abs(p.field[i]);
            return p.r[i - 1] + (a - floor) / (a - b) * (p.r[i] - p.r[i - 1]);
        }
    throw ArgumentError("toroid: profile has no support above the floor");
}

double max_curvature(const RadialProfile& p, const RotationOptions& o) { return 0.9 / support_radius(p, o); }

double rotation_ratio(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m, double curvature,
                      const RotationOptions& o) {
    require_profile(p);
    c.validate();
    m.validate();
    detail::require(curvature >= 0.0, "curvature must be >= 0");
    validate_rotation(o);
    if (m.magnetic.f_max == 0.0) return 0.0;
    if (m.magnetic.f_max >= 1.0) throw ModelError("rotation ratio needs f_max < 1 so that 1 + f stays positive");
    if (curvature == 0.0) return gamma_at_zero(p, c, m, o);
    const double rs = support_radius(p, o);
    if (curvature * rs >= 1.0) {
        std::ostringstream os;
        os << "curvature " << curvature << " folds the cross-section (C r_support = " << curvature * rs << " >= 1)";
        throw ModelError(os.str());
    }
    const auto rule = panel_rule(0.0, rs, o.radial_panels, o.panel_nodes);
    // f(Delta s) varies on the scale s_sat next to cos(theta) = 0, so the angle is graded there:
    // theta = pi/2 +- (pi/2) t^2 on [0, pi], mirrored onto [-pi, 0].
    const auto tr = panel_rule(0.0, 1.0, o.azimuth_panels / 4, o.panel_nodes);
    std::vector<double> cosines, aw;
    for (double side : {-1.0, 1.0})
        for (std::size_t l = 0; l < tr.r.size(); ++l) {
            const double t = tr.r[l];
            cosines.push_back(std::cos(kPi / 2 + side * kPi / 2 * t * t));
            aw.push_back(2.0 * tr.w[l] * kPi * t);
        }
    const auto& f = m.magnetic;
    const double k2 = c.k * c.k;

    // Curvature-induced permeability f(Delta s), Delta s = ((R / rho)^2 - 1) k^2 E^2; ln n_eff gains (1/2) ln(1 + f).
    auto g = [&](double r, double e, double cth) {
        const double x = curvature * r * cth;
        const double ds = -x * (2.0 + x) / ((1.0 + x) * (1.0 + x)) * k2 * e * e;
        return 0.5 * std::log1p(f(ds));
    };
    auto ring = [&](double r, double e) {
        double s = 0.0;
        for (std::size_t l = 0; l < cosines.size(); ++l) s += aw[l] * g(r, e, cosines[l]) * cosines[l];
        return s;
    };

    // int w dx(g) dA = -int g dx(w) dA + boundary, with dx(w) = 2 E E' cos(theta).
    std::vector<double> terms;
    terms.reserve(rule.r.size());
    double weight = 0.0;
    for (std::size_t i = 0; i < rule.r.size(); ++i) {
        const double r = rule.r[i], e = p.at(r), de = p.slope_at(r);
        terms.push_back(rule.w[i] * r * ring(r, e) * 2.0 * e * de);
        weight += rule.w[i] * r * kTwoPi * e * e;
    }
    const double es = p.at(rs);
    const double grad = -pairwise_sum<double>(terms) + rs * es * es * ring(rs, es);
    const double kappa = -grad / weight;  // positive when n_eff rises toward the torus axis
    return kappa / curvature;
}

std::vector<ResponseRow> response_table(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m,
                                        int points, const RotationOptions& o) {
    detail::require(points >= 2, "response table needs at least two points");
    const double cmax = max_curvature(p, o);
    std::vector<ResponseRow> rows;
    for (int i = 0; i < points; ++i) {
        const double cv = cmax * i / (points - 1);
        rows.push_back({cv, rotation_ratio(p, c, m, cv, o)});
    }
    return rows;
}

CurvatureResponse find_stable_curvature(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m,
                                        const FixedPointOptions& o) {
    detail::require(o.scan_points >= 4, "fixed-point scan needs at least 4 points");
    if (m.magnetic.f_max == 0.0) throw NoSolutionError("no curvature fixed point: magnetic response is zero");
    const auto table = response_table(p, c, m, o.scan_points, o.rotation);
    double gmax = 0.0;
    bool rising = false;
    std::size_t hit = table.size();
    for (std::size_t i = 0; i < table.size(); ++i) {
        gmax = std::max(gmax, table[i].gamma);
        if (i + 1 < table.size()) {
            const double a = table[i].gamma - 1.0, b = table[i + 1].gamma - 1.0;
            if (a > 0.0 && b <= 0.0 && hit == table.size()) hit = i;
            if (a <= 0.0 && b > 0.0) rising = true;
        }
    }
    if (hit == table.size()) {
        std::ostringstream os;
        if (rising) {
            os << "only unstable curvature fixed points (gamma crosses 1 upward)";
            throw ModelError(os.str());
        }
        if (gmax <= 1.0)
            os << "no curvature fixed point: max gamma = " << gmax << " <= 1";
        else
            os << "no curvature fixed point below the admissible curvature " << table.back().curvature
               << " (gamma stays above 1)";
        throw NoSolutionError(os.str());
    }
    double lo = table[hit].curvature, hi = table[hit + 1].curvature;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (rotation_ratio(p, c, m, mid, o.rotation) > 1.0 ? lo : hi) = mid;
    }
    CurvatureResponse out;
    out.curvature = 0.5 * (lo + hi);
    out.gamma = rotation_ratio(p, c, m, out.curvature, o.rotation);
    const double step = 1e-5 * out.curvature;
    out.slope = (rotation_ratio(p, c, m, out.curvature + step, o.rotation) -
                 rotation_ratio(p, c, m, out.curvature - step, o.rotation)) /
                (2.0 * step);
    if (!(out.slope < 0.0)) {
        std::ostringstream os;
        os << "curvature fixed point at C = " << out.curvature << " is not stable (d gamma / dC = " << out.slope << ")";
        throw ModelError(os.str());
    }
    return out;
}

std::vector<TorusSolution> quantize_torus(double c0, const QuantizeSpec& spec, int m_min, int m_max,
                                          const PhysicalConstants& pc) {
    detail::require(c0 > 0.0, "curvature C0 must be positive");
    spec.carrier.validate();
    detail::require(spec.n0 > 0.0 && spec.critical_power > 0.0, "n0 and critical power must be positive");
    detail::require(spec.max_iterations >= 1, "max_iterations must be >= 1");
    std::vector<TorusSolution> out;
    if (m_max < m_min) return out;
    detail::require(m_min >= 1, "winding numbers must be positive");

    const double w0 = spec.carrier.omega, n0 = spec.n0;
    double q = spec.transverse_q;
    if (q == 0.0) {
        const double q2 = spec.carrier.k * spec.carrier.k - std::pow(w0 * n0 / pc.c, 2);
        detail::require(q2 >= 0.0, "carrier wavenumber is below the light line k < omega n0 / c");
        q = std::sqrt(q2);
    }
    auto k_of = [&](double w) { return std::sqrt(std::pow(w * n0 / pc.c, 2) + q * q); };
    auto speed = [&](double w) {
        const double k = k_of(w);
        return spec.speed == TransitSpeed::Group ? pc.c * pc.c * k / (w * n0 * n0) : w / k;
    };
    auto radius = [&](double w) { return spec.radius_response ? spec.radius_response(w) : 1.0 / c0; };

    for (int m = m_min; m <= m_max; ++m) {
        TorusSolution s;
        s.m = m;
        if (spec.adjustment == Adjustment::Medium) {
            s.omega = w0;
            s.period = spec.carrier.period();
            s.radius = m * s.period / kTwoPi;
            s.medium_scale = s.radius * c0;
            s.residual = std::abs(kTwoPi * s.radius / s.period - m);
            s.energy = spec.critical_power * kTwoPi * s.radius / speed(w0);
            out.push_back(s);
            continue;
        }
        double w = w0;
        int it = 0;
        for (; it < spec.max_iterations; ++it) {
            const double r0 = radius(w);
            const double k_target = m / r0;
            if (!(k_target > q)) {
                std::ostringstream os;
                os << "winding m = " << m << " needs k = " << k_target << " below the transverse constant " << q;
                throw NoSolutionError(os.str());
            }
            w = pc.c / n0 * std::sqrt(k_target * k_target - q * q);
            if (std::abs(radius(w) * k_of(w) - m) < 1e-12 * m) break;
        }
        s.iterations = it + 1;
        s.omega = w;
        s.radius = radius(w);
        s.period = kTwoPi / k_of(w);
        s.residual = std::abs(kTwoPi * s.radius / s.period - m);
        if (it == spec.max_iterations || s.residual >= 1e-9) {
            std::ostringstream os;
            os << "torus quantization for m = " << m << " did not converge in " << spec.max_iterations
               << " iterations (residual " << s.residual << ")";
            throw SolverError(os.str());
        }
        s.freq_shift = (w - w0) / w0;
        s.energy = spec.critical_power * kTwoPi * s.radius / speed(w);
        out.push_back(s);
    }
    return out;
}

}  // namespace zpf::toroid
