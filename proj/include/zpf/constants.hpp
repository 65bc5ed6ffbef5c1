#pragma once

#include <numbers>

namespace zpf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Physical constants used throughout. Everything defaults to natural units
/// (h = kB = c = eps0 = mu0 = 1); the SI preset is available for reports.
struct PhysicalConstants {
    double h = 1.0;     ///< action quantum [J s]
    double kB = 1.0;    ///< Boltzmann constant [J/K]
    double c = 1.0;     ///< vacuum speed of light [m/s]
    double eps0 = 1.0;  ///< vacuum permittivity [F/m]
    double mu0 = 1.0;   ///< vacuum permeability [H/m]

    static constexpr PhysicalConstants natural() { return {}; }

    static constexpr PhysicalConstants si() {
        // CODATA 2018 exact values for h, kB, c; eps0 derived from mu0.
        constexpr double c = 299792458.0;
        constexpr double mu0 = 1.25663706212e-6;
        return {6.62607015e-34, 1.380649e-23, c, 1.0 / (mu0 * c * c), mu0};
    }

    /// Free-space wave impedance sqrt(mu0/eps0).
    [[nodiscard]] double impedance() const;

    /// Throws ArgumentError unless every constant is positive and
    /// c^2 eps0 mu0 = 1 to 1e-12 relative.
    void validate() const;
};

}  // namespace zpf
