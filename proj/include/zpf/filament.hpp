#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "zpf/constants.hpp"

namespace zpf::filament {

/// Saturating magnetic response f(s) = f_max s / (|s| + s_sat), odd in s.
struct SaturatingResponse {
    double f_max = 0.05;
    double s_sat = 1e-3;

    void validate() const;
    [[nodiscard]] double operator()(double s) const;
    /// df/ds at s = 0.
    [[nodiscard]] double slope_at_zero() const { return f_max == 0.0 ? 0.0 : f_max / s_sat; }
};

/// Saturable Kerr dielectric: eps(E) = n0^2 + 2 n0 n2 E^2 / (1 + E^2 / Esat^2).
/// An infinite saturation field gives the pure Kerr law.
struct MediumModel {
    double n0 = 1.0;
    double n2 = 0.5;
    double saturation_field = 1.0;
    SaturatingResponse magnetic;

    void validate() const;
    [[nodiscard]] bool pure_kerr() const { return saturation_field == std::numeric_limits<double>::infinity(); }
    [[nodiscard]] double permittivity(double field) const;
    /// eps(E) - n0^2
    [[nodiscard]] double index_contrast(double field) const;
};

struct SolveOptions {
    double step = 0.002;           ///< RK4 step in scaled radius q r
    int nodes = 0;                 ///< radial nodes (0 = ground state)
    double max_scaled_radius = 80.0;
    double tail_floor = 1e-9;      ///< profile is extended until E < tail_floor * peak
    int max_bisections = 400;
};

/// Stationary radial profile E_t(r) with propagation constant k.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> field;
    std::vector<double> slope;  ///< dE/dr; optional, enables cubic Hermite interpolation
    double peak = 0.0;
    double k0 = 0.0;  ///< vacuum wavenumber omega / c
    double k = 0.0;   ///< propagation constant
    double q = 0.0;   ///< transverse decay constant sqrt(k^2 - k0^2 n0^2)
    int nodes = 0;
    double residual = 0.0;  ///< max ODE residual in scaled units
    MediumModel medium;

    /// Hermite interpolation when slopes are present, linear otherwise; zero beyond the grid.
    [[nodiscard]] double at(double radius) const;
    /// dE/dr consistent with at().
    [[nodiscard]] double slope_at(double radius) const;
    /// Radius where |E| first falls to half the peak.
    [[nodiscard]] double half_width() const;
};

/// Shooting solution of E'' + E'/r + k0^2 eps(E) E - k^2 E = 0 with E(0) = peak.
[[nodiscard]] RadialProfile solve_profile(const MediumModel& m, double omega, double peak, const SolveOptions& opt = {},
                                          const PhysicalConstants& pc = PhysicalConstants::natural());

struct PowerResult {
    double power = 0.0;
    bool truncated = false;  ///< edge value above 1e-6 of the peak
};

/// 2 pi * integral of E^2 r dr (trapezoid on the profile grid).
[[nodiscard]] PowerResult beam_power(const RadialProfile& p);

/// Power times 2 k0^2 n0 n2: amplitude-independent for pure Kerr.
[[nodiscard]] double dimensionless_power(const RadialProfile& p);

/// k0 n0 / q^2.
[[nodiscard]] double diffraction_length(const RadialProfile& p);

/// Square transverse grid centred on the axis, periodic.
struct Field2D {
    int n = 0;
    double extent = 0.0;  ///< side length
    std::vector<std::complex<double>> data;  ///< row-major, index = iy * n + ix

    Field2D() = default;
    Field2D(int n_, double extent_) : n(n_), extent(extent_), data(static_cast<std::size_t>(n_) * n_) {}
    [[nodiscard]] double dx() const { return extent / n; }
    [[nodiscard]] double coord(int i) const { return (i - n / 2) * dx(); }
    std::complex<double>& operator()(int ix, int iy) { return data[static_cast<std::size_t>(iy) * n + ix]; }
    const std::complex<double>& operator()(int ix, int iy) const { return data[static_cast<std::size_t>(iy) * n + ix]; }
};

/// Samples scale * E(|x - shift|) onto a grid.
[[nodiscard]] Field2D embed_profile(const RadialProfile& p, int n, double extent, double x_shift = 0.0,
                                    double y_shift = 0.0, std::complex<double> scale = 1.0);

[[nodiscard]] double grid_power(const Field2D& f);
/// RMS radius about the intensity centroid.
[[nodiscard]] double rms_width(const Field2D& f);
/// Difference of the intensity centroids of the x > 0 and x < 0 half planes.
[[nodiscard]] double centroid_separation(const Field2D& f);
/// max | |a| - |b| | / max |b|
[[nodiscard]] double shape_drift(const Field2D& a, const Field2D& b);
/// Fraction of spectral energy with |kx| or |ky| above `edge` of the Nyquist wavenumber.
[[nodiscard]] double band_edge_fraction(const Field2D& f, double edge = 0.9);

struct PropagateOptions {
    double dz = 0.0;
    int steps = 0;
    int snapshot_every = 0;  ///< 0 = first and last only
    double alias_threshold = 1e-6;
    int alias_check_every = 50;
};

struct FieldHistory {
    std::vector<double> z;      ///< after every step, starting at 0
    std::vector<double> power;  ///< grid power at each z
    std::vector<double> snapshot_z;
    std::vector<Field2D> snapshots;
    double max_step_power_change = 0.0;  ///< max relative |P(z + dz) - P(z)| / P(0)
};

/// Strang split-step integration of 2 i k_ref dA/dz + lap A + k0^2 (eps(|A|) - n0^2) A = 0, k_ref = k0 n0.
[[nodiscard]] FieldHistory propagate(const Field2D& initial, const MediumModel& m, double omega,
                                     const PropagateOptions& opt,
                                     const PhysicalConstants& pc = PhysicalConstants::natural());

}  // namespace zpf::filament
