#include <doctest.h>

#include <cmath>
#include <random>

#include "zpf/constants.hpp"
#include "zpf/splitter.hpp"

using namespace zpf;
using namespace zpf::splitter;

namespace {
double wrapped_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d < 0) d += kTwoPi;
    return d;
}
}  // namespace

TEST_CASE("split conserves field sum and energy") {
    const SplitterSpec half;
    SUBCASE("unit input") {
        const auto out = split({1.0, 0.0}, half);
        CHECK(out.reflected.amplitude == doctest::Approx(std::sqrt(0.5)));
        CHECK(out.reflected.phase == doctest::Approx(kPi / 2));
        CHECK(out.transmitted.amplitude == doctest::Approx(std::sqrt(0.5)));
        CHECK(out.transmitted.phase == doctest::Approx(0.0));
        CHECK(std::norm(out.reflected.value() + out.transmitted.value()) == doctest::Approx(1.0));
    }
    SUBCASE("energies add") {
        const auto out = split({2.0, kPi / 3}, half);
        CHECK(out.reflected.intensity() == doctest::Approx(2.0));
        CHECK(out.transmitted.intensity() == doctest::Approx(2.0));
    }
    SUBCASE("unequal splitter") {
        const auto out = split({1.0, 0.0}, {0.3});
        CHECK(out.reflected.intensity() == doctest::Approx(0.3));
        CHECK(out.transmitted.intensity() == doctest::Approx(0.7));
        CHECK(std::norm(out.reflected.value() + out.transmitted.value()) == doctest::Approx(1.0));
    }
    SUBCASE("phase conventions") {
        const auto lead = split({1.0, 1.0}, {0.5, PhaseConvention::ReflectedLeads});
        const auto lag = split({1.0, 1.0}, {0.5, PhaseConvention::ReflectedLags});
        CHECK(wrapped_diff(lead.reflected.phase, lead.transmitted.phase) == doctest::Approx(kPi / 2));
        CHECK(wrapped_diff(lag.reflected.phase, lag.transmitted.phase) == doctest::Approx(3 * kPi / 2));
    }
}

TEST_CASE("two-source interference") {
    const SplitterSpec half;
    SUBCASE("coalescence") {
        // phase(t(in1)) = phase(r(in2)) requires phi1 = phi2 + pi/2
        const auto [o1, o2] = interfere_two_sources({1.0, kPi / 2}, {1.0, 0.0}, half);
        CHECK(o1.intensity() == doctest::Approx(2.0));
        CHECK(o2.intensity() <= 1e-24);
    }
    SUBCASE("single source") {
        const auto [o1, o2] = interfere_two_sources({1.3, 0.4}, {0.0, 0.0}, half);
        CHECK(o1.intensity() == doctest::Approx(1.69 / 2));
        CHECK(o2.intensity() == doctest::Approx(1.69 / 2));
    }
    SUBCASE("relative phase sweep") {
        for (int i = 0; i < 64; ++i) {
            const double phi1 = kTwoPi * i / 64.0;
            const Phasor a{1.0, phi1}, b{1.0, 0.3};
            const double theta = relative_phase(a, b, half);
            const auto [o1, o2] = interfere_two_sources(a, b, half);
            CHECK(o2.intensity() == doctest::Approx(1.0 - std::cos(theta)).epsilon(1e-12).scale(1.0));
            CHECK(o1.intensity() == doctest::Approx(1.0 + std::cos(theta)).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("energy conservation on random inputs") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const SplitterSpec s{u(gen), u(gen) < 0.5 ? PhaseConvention::ReflectedLeads : PhaseConvention::ReflectedLags};
        const Phasor a{3 * u(gen), kTwoPi * u(gen)}, b{3 * u(gen), kTwoPi * u(gen)};
        const auto [o1, o2] = interfere_two_sources(a, b, s);
        const double in = a.intensity() + b.intensity();
        CHECK(std::abs(o1.intensity() + o2.intensity() - in) <= 1e-12 * std::max(1.0, in));
    }
}

TEST_CASE("convention flip swaps the coalescing port") {
    const Phasor a{1.0, kPi / 2}, b{1.0, 0.0};
    const auto [l1, l2] = interfere_two_sources(a, b, {0.5, PhaseConvention::ReflectedLeads});
    const auto [g1, g2] = interfere_two_sources(a, b, {0.5, PhaseConvention::ReflectedLags});
    CHECK(l1.intensity() == doctest::Approx(2.0));
    CHECK(g2.intensity() == doctest::Approx(2.0));
    CHECK(g1.intensity() <= 1e-24);
    CHECK(l1.intensity() + l2.intensity() == doctest::Approx(g1.intensity() + g2.intensity()));
}

TEST_CASE("balanced Mach-Zehnder returns everything to one port") {
    for (auto conv : {PhaseConvention::ReflectedLeads, PhaseConvention::ReflectedLags}) {
        const auto [o1, o2] = mach_zehnder({1.0, 0.2}, {0.5, conv}, 0.0);
        CHECK(o1.amplitude <= 1e-12);
        CHECK(std::abs(o2.amplitude - 1.0) <= 1e-12);
    }
}

TEST_CASE("coalescence statistics") {
    SUBCASE("equal sources") {
        const auto st = coalescence_statistics(1.0, 1.0, 0.0, 200'000, 5);
        CHECK(st.min_product == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
        CHECK(std::abs(st.mean_product - 0.5) <= 3.0 * st.stderr_);
        CHECK(st.baseline_product == doctest::Approx(1.0));
    }
    SUBCASE("single source") {
        const auto st = coalescence_statistics(1.0, 0.0, 0.0, 10'000, 5);
        CHECK(st.mean_product == doctest::Approx(0.25));
        CHECK(st.stderr_ <= 1e-15);
    }
    SUBCASE("anti-bunching with a zero-point input") {
        const auto st = coalescence_statistics(1.0, 0.0, 1.0, 200'000, 8);
        CHECK(st.second_amplitude == 1.0);
        CHECK(std::abs(st.mean_product - 0.5 * st.baseline_product) <= 3.0 * st.stderr_);
    }
}
