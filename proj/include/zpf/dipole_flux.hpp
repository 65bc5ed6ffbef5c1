#pragma once

#include <array>
#include <complex>
#include <string>

#include "zpf/constants.hpp"
#include "zpf/field_core.hpp"

namespace zpf::dipole {

using cdouble = std::complex<double>;
using CVec3 = std::array<cdouble, 3>;

/// Oscillating point dipole at the origin, oriented along z.
struct DipoleSource {
    Vec3 position{0.0, 0.0, 0.0};
    Vec3 axis{0.0, 0.0, 1.0};
    double omega = kTwoPi;  ///< angular frequency
    double moment = 1.0;    ///< dipole moment amplitude

    void validate() const;
    [[nodiscard]] double wavenumber(const PhysicalConstants& pc) const { return omega / pc.c; }
    [[nodiscard]] double wavelength(const PhysicalConstants& pc) const { return kTwoPi / wavenumber(pc); }
};

enum class QuadratureScheme { ProductGauss };

/// Sphere of integration centred on the dipole. Product Gauss-Legendre in
/// cos(polar angle) times a uniform azimuth rule; the polar axis is chosen
/// per incident field (the propagation axis for a plane wave).
struct SphereQuadrature {
    double radius = 50.0;
    int nodes = 10'000;
    int azimuth_nodes = 16;
    QuadratureScheme scheme = QuadratureScheme::ProductGauss;

    void validate(double wavelength) const;
    [[nodiscard]] int polar_nodes() const { return nodes / azimuth_nodes; }
};

enum class IncidentKind {
    ConvergingDipolar,  ///< regular dipolar standing mode: converges onto the dipole and re-emerges
    PlaneWave,
};

/// External field at the dipole frequency. For the dipolar kind the
/// amplitude is the field at the dipole; for the plane wave it is the
/// plane-wave amplitude.
struct IncidentField {
    IncidentKind kind = IncidentKind::ConvergingDipolar;
    Vec3 polarization{0.0, 0.0, 1.0};
    Vec3 propagation{1.0, 0.0, 0.0};
    double amplitude = 1.0;
    double phase = 0.0;
    double omega = kTwoPi;

    void validate() const;
};

struct ComplexFields {
    CVec3 e;
    CVec3 h;
};

struct RealFields {
    Vec3 e;
    Vec3 h;
};

/// Complex amplitudes (time dependence exp(-i omega t)) of the full dipole
/// field, near and far terms. Throws DomainError at the dipole position.
[[nodiscard]] ComplexFields dipole_phasor(const DipoleSource& d, const Vec3& point,
                                          const PhysicalConstants& pc = PhysicalConstants::natural());

/// Instantaneous real fields of the dipole at time t.
[[nodiscard]] RealFields dipole_fields(const DipoleSource& d, const Vec3& point, double t,
                                       const PhysicalConstants& pc = PhysicalConstants::natural());

/// Far-zone part of the dipole field (1/r terms only).
[[nodiscard]] ComplexFields dipole_far_phasor(const DipoleSource& d, const Vec3& point,
                                              const PhysicalConstants& pc = PhysicalConstants::natural());

/// Complex amplitudes of the incident field.
[[nodiscard]] ComplexFields incident_phasor(const IncidentField& inc, const Vec3& point,
                                            const PhysicalConstants& pc = PhysicalConstants::natural());

/// Cycle-averaged interference flux through the sphere, split by the
/// Cartesian component of the magnetic field entering the cross Poynting
/// vector E_d x H_inc* + E_inc x H_d*. Sign: positive = energy flowing in
/// (absorbed by the dipole).
struct FluxComponents {
    double phi_x = 0.0;
    double phi_y = 0.0;
    double phi_z = 0.0;
    [[nodiscard]] double total() const { return phi_x + phi_y + phi_z; }
};

[[nodiscard]] FluxComponents interference_flux(const DipoleSource& d, const IncidentField& inc,
                                               const SphereQuadrature& q,
                                               const PhysicalConstants& pc = PhysicalConstants::natural());

/// Overlap of the incident field with the dipole's own (regular, z-oriented)
/// mode on the quadrature sphere, normalized so the unit mode projects to 1.
[[nodiscard]] cdouble mode_projection(const IncidentField& inc, const DipoleSource& d,
                                      const SphereQuadrature& q = {},
                                      const PhysicalConstants& pc = PhysicalConstants::natural());

/// Summary of the dipolar-vs-plane-wave comparison at matched projection.
struct FactorTwoReport {
    FluxComponents spherical;
    FluxComponents plane;
    cdouble plane_projection;      ///< projection of the amplitude-matched plane wave
    double plane_scale = 1.0;      ///< plane-wave amplitude used for matched projection
    double ratio = 0.0;            ///< total(spherical) / total(plane) at matched projection
};

[[nodiscard]] FactorTwoReport compare_inputs(const DipoleSource& d, double amplitude, double phase,
                                             const SphereQuadrature& q,
                                             const PhysicalConstants& pc = PhysicalConstants::natural());

}  // namespace zpf::dipole
