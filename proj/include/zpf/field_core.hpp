#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "zpf/constants.hpp"

namespace zpf {

using Vec3 = std::array<double, 3>;

enum class ModeKind { PlaneWave, ConvergingDipolar, DivergingDipolar };

/// A labeled optical mode.
struct ModeSpec {
    std::string id;
    double frequency = 1.0;  ///< nu [Hz]
    ModeKind kind = ModeKind::PlaneWave;
    Vec3 polarization{0.0, 0.0, 1.0};
    Vec3 axis{1.0, 0.0, 0.0};  ///< propagation (plane wave) or dipole orientation

    /// Throws ArgumentError on nu <= 0, non-unit axes or, for plane waves,
    /// polarization not transverse to the propagation axis.
    void validate() const;
};

/// Seeded ensemble of zero-point realizations of one mode. Each shot holds
/// two real quadratures (a, b); the per-shot energy proxy is (a^2 + b^2)/2.
struct ZpfEnsemble {
    ModeSpec mode;
    std::uint64_t seed = 0;
    std::vector<std::array<double, 2>> quadratures;

    [[nodiscard]] std::size_t shot_count() const { return quadratures.size(); }
    [[nodiscard]] double energy(std::size_t shot) const;
};

struct EnsembleMoments {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Draws `shots` zero-point realizations. Quadratures are independent
/// zero-mean Gaussians of variance h nu / 2, drawn from the counter stream
/// (seed, shot index); the result is bit-identical for equal inputs.
[[nodiscard]] ZpfEnsemble sample_zpf(const ModeSpec& mode, std::uint64_t seed, std::int64_t shots,
                                     const PhysicalConstants& pc = PhysicalConstants::natural());

[[nodiscard]] EnsembleMoments energy_moments(const ZpfEnsemble& e);
[[nodiscard]] EnsembleMoments quadrature_moments(const ZpfEnsemble& e, int which);

enum class PlanckLaw { First, Second };

/// Mean energy of a mode at temperature T. The first law is the Bose term
/// h nu / (exp(h nu / kT) - 1); the second adds the zero-point energy h nu / 2.
[[nodiscard]] double planck_mean_energy(double nu, double temperature, PlanckLaw law,
                                        const PhysicalConstants& pc = PhysicalConstants::natural());

/// Tabulated spectral energy density w(nu), or a monochromatic line.
struct SpectrumSample {
    std::vector<double> grid;
    std::vector<double> density;
    bool monochromatic = false;
    double line_frequency = 0.0;
    double line_energy = 0.0;

    static SpectrumSample line(double nu, double energy);
    void validate() const;
};

/// The action integral of w(nu)/nu over the spectrum (trapezoid rule on the
/// supplied grid; exactly W / nu for a line).
[[nodiscard]] double spectral_quantum(const SpectrumSample& s);

}  // namespace zpf
