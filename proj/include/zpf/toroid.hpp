#pragma once

#include <functional>
#include <vector>

#include "zpf/constants.hpp"
#include "zpf/field_core.hpp"
#include "zpf/filament.hpp"

namespace zpf::toroid {

using filament::MediumModel;
using filament::RadialProfile;

/// Carrier wave cos(k z - omega t) of the filament; period Lambda = 2 pi / k.
struct CarrierSpec {
    double omega = 1.0;
    double k = 1.0;

    void validate() const;
    [[nodiscard]] double period() const { return kTwoPi / k; }
};

/// Carrier of a solved profile.
[[nodiscard]] CarrierSpec carrier_of(const RadialProfile& p, const PhysicalConstants& pc = PhysicalConstants::natural());

/// Torus of major radius R; a point is (r, theta) in the cross-section, theta = 0 pointing away from the axis.
struct CurvedFrame {
    double major_radius = 0.0;

    /// rho = R + r cos(theta); throws ModelError when rho <= 0.
    [[nodiscard]] double rho(double r, double theta) const;
};

/// Instantaneous field and curl of the circularly polarized straight ansatz
/// E = E_t(r) (x cos(kz - wt) + y sin(kz - wt)).
struct AnsatzSample {
    Vec3 e;
    Vec3 curl;
};
[[nodiscard]] AnsatzSample straight_ansatz(const RadialProfile& p, const CarrierSpec& c, const Vec3& point, double t);

/// Cycle-averaged |curl E|^2 in straight coordinates: k^2 E^2 + E'^2 / 2.
[[nodiscard]] double curl_squared_straight(const RadialProfile& p, const CarrierSpec& c, double r);

/// Cycle-averaged |curl E|^2 in curved coordinates with E_alpha = 0: (R/rho)^2 k^2 E^2 + E'^2 / 2.
[[nodiscard]] double curl_squared_curved(const RadialProfile& p, const CarrierSpec& c, const CurvedFrame& f, double r,
                                         double theta);

[[nodiscard]] double delta_mu_straight(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m, double r,
                                       double theta);
[[nodiscard]] double delta_mu_curved(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m,
                                     const CurvedFrame& f, double r, double theta);

struct RotationOptions {
    int radial_panels = 64;
    int panel_nodes = 8;
    int azimuth_panels = 16;
    double support_floor = 1e-4;  ///< cross-section truncated where |E| < floor * peak
};

/// Radius of the integration disc (profile support above the floor).
[[nodiscard]] double support_radius(const RadialProfile& p, const RotationOptions& o = {});
/// Largest admissible curvature, 0.9 / support radius.
[[nodiscard]] double max_curvature(const RadialProfile& p, const RotationOptions& o = {});

/// gamma(C) = kappa / C. kappa is the E^2-weighted mean gradient of ln n_eff toward the torus
/// axis, where the curvature excess Delta s = ((R/rho)^2 - 1) k^2 E^2 of the squared curl drives
/// the permeability f(Delta s). gamma(0) is the linear-response limit.
[[nodiscard]] double rotation_ratio(const RadialProfile& p, const CarrierSpec& c, const MediumModel& m,
                                    double curvature, const RotationOptions& o = {});

struct CurvatureResponse {
    double curvature = 0.0;  ///< C0 = 1 / R0
    double gamma = 0.0;
    double slope = 0.0;      ///< d gamma / dC at C0
    [[nodiscard]] double radius() const { return 1.0 / curvature; }
};

struct FixedPointOptions {
    int scan_points = 64;
    RotationOptions rotation;
};

/// Stable root of gamma(C) = 1 on a decreasing branch.
[[nodiscard]] CurvatureResponse find_stable_curvature(const RadialProfile& p, const CarrierSpec& c,
                                                      const MediumModel& m, const FixedPointOptions& o = {});

/// (C, gamma) table on a uniform grid over [0, max_curvature].
struct ResponseRow {
    double curvature;
    double gamma;
};
[[nodiscard]] std::vector<ResponseRow> response_table(const RadialProfile& p, const CarrierSpec& c,
                                                      const MediumModel& m, int points,
                                                      const RotationOptions& o = {});

enum class Adjustment {
    Frequency,  ///< retune omega (hence Lambda) until 2 pi R0 = m Lambda
    Medium,     ///< hold Lambda and rescale the medium so R0 = m Lambda / (2 pi)
};

enum class TransitSpeed { Group, Phase };

/// Guided dispersion k^2 = (omega n0 / c)^2 + q^2 with q held fixed.
struct QuantizeSpec {
    CarrierSpec carrier;
    double n0 = 1.0;
    double transverse_q = 0.0;
    double critical_power = 1.0;
    Adjustment adjustment = Adjustment::Frequency;
    TransitSpeed speed = TransitSpeed::Group;
    /// R0 as a function of omega; empty = R0 held at 1 / C0.
    std::function<double(double)> radius_response;
    int max_iterations = 100;
};

struct TorusSolution {
    int m = 0;
    double radius = 0.0;   ///< R0
    double period = 0.0;   ///< Lambda
    double omega = 0.0;
    double energy = 0.0;
    double freq_shift = 0.0;    ///< relative change of omega
    double medium_scale = 1.0;  ///< R0(m) / R0 for medium adjustment
    double residual = 0.0;      ///< |2 pi R0 / Lambda - m|
    int iterations = 0;
};

[[nodiscard]] std::vector<TorusSolution> quantize_torus(double c0, const QuantizeSpec& spec, int m_min, int m_max,
                                                        const PhysicalConstants& pc = PhysicalConstants::natural());

}  // namespace zpf::toroid
