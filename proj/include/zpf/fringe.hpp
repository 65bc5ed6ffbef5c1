#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "zpf/field_core.hpp"

namespace zpf::fringe {

/// Two incoherent sources S1, S2 and two receivers R1, R2.
/// Positions are in the same length unit as the wavelength.
struct FringeGeometry {
    Vec3 s1{-10.0, 0.0, 0.0};
    Vec3 s2{10.0, 0.0, 0.0};
    Vec3 r1{0.0, 100.0, 0.0};
    Vec3 r2{0.0, 100.0, 5.0};
    double wavelength = 1.0;

    void validate() const;

    /// Path-length difference S1R_k - S2R_k for receiver k (1 or 2).
    [[nodiscard]] double path_difference(int receiver) const;

    /// Delta = S1R1 - S2R1 - S1R2 + S2R2.
    [[nodiscard]] double delta() const { return path_difference(1) - path_difference(2); }
};

enum class PhaseSampling {
    Stratified,   ///< psi_i = 2 pi (i + U_i) / N: marginally uniform, low variance
    Independent,  ///< psi_i = 2 pi U_i
};

struct FringeParams {
    double zpf_amplitude = 1.0;           ///< Z
    double conventional_amplitude = 0.1;  ///< F
    std::int64_t shots = 1'000'000;
    std::uint64_t seed = 0;
    PhaseSampling sampling = PhaseSampling::Stratified;
    /// Draw Z per shot as a zero-point amplitude with mean square Z^2
    /// instead of using the deterministic common value.
    bool stochastic_zpf = false;

    void validate() const;
};

/// Detected intensities I_k = [Z + F cos(pi (S1R_k - S2R_k)/lambda + psi)]^2.
[[nodiscard]] std::pair<double, double> shot_intensities(const FringeGeometry& g, const FringeParams& p, double psi);

/// Phase average of I1 I2 in closed form for deterministic Z:
/// Z^4 + Z^2 F^2 (1 + 2 cos(pi D/l)) + F^4 (1/4 + 1/8 cos(2 pi D/l)).
[[nodiscard]] double closed_form_mean(double z, double f, double delta, double wavelength);

/// Returns a copy of `tmpl` with R2 moved along the S1->S2 direction so the
/// geometry's Delta equals `delta`. Throws ModelError when unreachable.
[[nodiscard]] FringeGeometry geometry_for_delta(const FringeGeometry& tmpl, double delta);

struct ScanRow {
    double delta = 0;
    double mean = 0;    ///< Monte Carlo mean of I1 I2
    double stderr_ = 0;  ///< its standard error
    double oracle = 0;  ///< closed-form phase average
};

/// Monte Carlo estimate of <I1 I2> at each Delta. The per-shot phase stream
/// is shared across Delta values (common random numbers).
[[nodiscard]] std::vector<ScanRow> correlation_scan(const FringeGeometry& tmpl, const FringeParams& p,
                                                    std::span<const double> deltas);

struct Harmonics {
    double first = 0;   ///< A1, amplitude at period 2 lambda in Delta
    double second = 0;  ///< A2, amplitude at period lambda
    double offset = 0;
    double first_stderr = 0;
    double second_stderr = 0;
};

/// Discrete Fourier extraction of the fringe harmonics. The scan must be
/// uniform and span a whole number (>= 2) of periods 2 lambda.
[[nodiscard]] Harmonics fringe_analysis(std::span<const ScanRow> table, double wavelength);

/// Uniform Delta grid of `points` values over `periods` periods of 2 lambda,
/// endpoint excluded.
[[nodiscard]] std::vector<double> uniform_deltas(std::size_t points, int periods, double wavelength);

}  // namespace zpf::fringe
