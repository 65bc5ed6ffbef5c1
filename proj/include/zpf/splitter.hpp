#pragma once

#include <complex>
#include <cstdint>
#include <utility>

namespace zpf::splitter {

/// Scalar single-mode field: amplitude >= 0 and phase wrapped to [0, 2 pi).
struct Phasor {
    double amplitude = 0.0;
    double phase = 0.0;

    static Phasor from_complex(std::complex<double> z);
    [[nodiscard]] std::complex<double> value() const { return std::polar(amplitude, phase); }
    [[nodiscard]] double intensity() const { return amplitude * amplitude; }
};

enum class PhaseConvention {
    ReflectedLeads,  ///< phase(r) - phase(t) = +pi/2
    ReflectedLags,   ///< phase(r) - phase(t) = -pi/2 (the 3 pi / 2 surface choice)
};

/// Lossless beam splitter of reflectance rho; transmittance is 1 - rho.
struct SplitterSpec {
    double reflectance = 0.5;
    PhaseConvention convention = PhaseConvention::ReflectedLeads;

    void validate() const;
    [[nodiscard]] double transmittance() const { return 1.0 - reflectance; }
};

struct SplitOutput {
    Phasor reflected;
    Phasor transmitted;
};

[[nodiscard]] SplitOutput split(const Phasor& in, const SplitterSpec& s);

/// Outputs of two sources meeting on the splitter:
/// out1 = t(in1) + r(in2), out2 = r(in1) + t(in2).
[[nodiscard]] std::pair<Phasor, Phasor> interfere_two_sources(const Phasor& in1, const Phasor& in2,
                                                              const SplitterSpec& s);

/// Relative phase theta = phase(t(in1)) - phase(r(in2)); theta = 0 is
/// coalescence into output 1.
[[nodiscard]] double relative_phase(const Phasor& in1, const Phasor& in2, const SplitterSpec& s);

/// Mach-Zehnder: split, propagate both arms with phase difference
/// `arm_phase`, recombine on a second identical splitter.
[[nodiscard]] std::pair<Phasor, Phasor> mach_zehnder(const Phasor& in, const SplitterSpec& s, double arm_phase);

struct CoalescenceStats {
    double mean_product = 0.0;    ///< Monte Carlo <|out1|^2 |out2|^2> over theta
    double stderr_ = 0.0;
    double min_product = 0.0;     ///< minimum over theta (attained at cos^2 theta = 1)
    double baseline_product = 0.0;  ///< product without interference
    double sampled_min = 0.0;     ///< smallest product seen in the samples
    double second_amplitude = 0.0;  ///< amplitude actually fed to input 2
};

/// Monte Carlo over a uniform relative phase. If amp2 == 0 the second input
/// carries the zero-point amplitude Z (anti-bunching); otherwise amp2.
[[nodiscard]] CoalescenceStats coalescence_statistics(double amp1, double amp2, double zpf_level,
                                                      std::int64_t shots, std::uint64_t seed,
                                                      const SplitterSpec& s = {});

}  // namespace zpf::splitter
