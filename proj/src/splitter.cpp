#include "zpf/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zpf/constants.hpp"
#include "zpf/errors.hpp"
#include "zpf/parallel.hpp"
#include "zpf/rng.hpp"

namespace zpf::splitter {

namespace {

double wrap(double phase) {
    double p = std::fmod(phase, kTwoPi);
    if (p < 0) p += kTwoPi;
    if (p >= kTwoPi) p = 0.0;
    return p;
}

double convention_shift(PhaseConvention c) { return c == PhaseConvention::ReflectedLeads ? 0.5 * kPi : -0.5 * kPi; }

}  // namespace

Phasor Phasor::from_complex(std::complex<double> z) {
    const double a = std::abs(z);
    return {a, a > 0 ? wrap(std::arg(z)) : 0.0};
}

void SplitterSpec::validate() const {
    detail::require(reflectance >= 0.0 && reflectance <= 1.0, "splitter reflectance must lie in [0, 1]");
}

SplitOutput split(const Phasor& in, const SplitterSpec& s) {
    s.validate();
    detail::require(in.amplitude >= 0, "phasor amplitude must be non-negative");
    return {Phasor{std::sqrt(s.reflectance) * in.amplitude, wrap(in.phase + convention_shift(s.convention))},
            Phasor{std::sqrt(s.transmittance()) * in.amplitude, wrap(in.phase)}};
}

std::pair<Phasor, Phasor> interfere_two_sources(const Phasor& in1, const Phasor& in2, const SplitterSpec& s) {
    const auto a = split(in1, s);
    const auto b = split(in2, s);
    return {Phasor::from_complex(a.transmitted.value() + b.reflected.value()),
            Phasor::from_complex(a.reflected.value() + b.transmitted.value())};
}

double relative_phase(const Phasor& in1, const Phasor& in2, const SplitterSpec& s) {
    return wrap(in1.phase - (in2.phase + convention_shift(s.convention)));
}

std::pair<Phasor, Phasor> mach_zehnder(const Phasor& in, const SplitterSpec& s, double arm_phase) {
    const auto first = split(in, s);
    Phasor upper = first.transmitted;
    Phasor lower = first.reflected;
    lower.phase = wrap(lower.phase + arm_phase);
    return interfere_two_sources(upper, lower, s);
}

CoalescenceStats coalescence_statistics(double amp1, double amp2, double zpf_level, std::int64_t shots,
                                        std::uint64_t seed, const SplitterSpec& s) {
    s.validate();
    detail::require(amp1 >= 0 && amp2 >= 0 && zpf_level >= 0, "coalescence: amplitudes must be non-negative");
    if (shots < 1000) throw ArgumentError("coalescence_statistics: shots must be >= 1000");

    const double a2 = amp2 > 0 ? amp2 : zpf_level;
    const double rho = s.reflectance, tau = s.transmittance();
    // |out1|^2 = tau a1^2 + rho a2^2 + 2 sqrt(rho tau) a1 a2 cos(theta), and
    // out2 takes the complementary weights with the opposite sign.
    const double i1 = tau * amp1 * amp1 + rho * a2 * a2;
    const double i2 = rho * amp1 * amp1 + tau * a2 * a2;
    const double cross = 2.0 * std::sqrt(rho * tau) * amp1 * a2;

    const CounterRng rng(seed, 0x53504c54);  // "SPLT"
    const Phasor base1{amp1, 0.0};
    struct Acc {
        double sum = 0, sumsq = 0, min = std::numeric_limits<double>::infinity();
    };
    const Acc acc = chunked_reduce(
        static_cast<std::size_t>(shots), Acc{},
        [&](std::size_t b, std::size_t e, Acc& a) {
            for (std::size_t i = b; i < e; ++i) {
                const double phi2 = kTwoPi * rng.uniform(i);
                const auto [o1, o2] = interfere_two_sources(base1, Phasor{a2, phi2}, s);
                const double v = o1.intensity() * o2.intensity();
                a.sum += v;
                a.sumsq += v * v;
                a.min = std::min(a.min, v);
            }
        },
        [](Acc& t, const Acc& c) {
            t.sum += c.sum;
            t.sumsq += c.sumsq;
            t.min = std::min(t.min, c.min);
        });

    const double n = static_cast<double>(shots);
    const double mean = acc.sum / n;
    const double var = std::max(acc.sumsq / n - mean * mean, 0.0) * n / (n - 1.0);
    CoalescenceStats st;
    st.mean_product = mean;
    st.stderr_ = std::sqrt(var / n);
    st.baseline_product = i1 * i2;
    st.min_product = std::min((i1 + cross) * (i2 - cross), (i1 - cross) * (i2 + cross));
    st.sampled_min = acc.min;
    st.second_amplitude = a2;
    return st;
}

}  // namespace zpf::splitter
