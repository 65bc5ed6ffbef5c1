#include "zpf/field_core.hpp"

#include <cmath>
#include <sstream>

#include "zpf/errors.hpp"
#include "zpf/parallel.hpp"
#include "zpf/rng.hpp"

namespace zpf {

namespace {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

double PhysicalConstants::impedance() const { return std::sqrt(mu0 / eps0); }

void PhysicalConstants::validate() const {
    detail::require(h > 0 && kB > 0 && c > 0 && eps0 > 0 && mu0 > 0, "physical constants must be positive");
    detail::require(std::abs(c * c * eps0 * mu0 - 1.0) <= 1e-12, "constants violate c^2 eps0 mu0 = 1");
}

void ModeSpec::validate() const {
    detail::require(frequency > 0 && std::isfinite(frequency), "mode frequency must be positive");
    detail::require(std::abs(norm(polarization) - 1.0) <= 1e-12, "polarization must be a unit vector");
    detail::require(std::abs(norm(axis) - 1.0) <= 1e-12, "mode axis must be a unit vector");
    if (kind == ModeKind::PlaneWave)
        detail::require(std::abs(dot(polarization, axis)) <= 1e-12,
                        "plane-wave polarization must be transverse to propagation");
}

double ZpfEnsemble::energy(std::size_t shot) const {
    const auto& q = quadratures.at(shot);
    return 0.5 * (q[0] * q[0] + q[1] * q[1]);
}

ZpfEnsemble sample_zpf(const ModeSpec& mode, std::uint64_t seed, std::int64_t shots, const PhysicalConstants& pc) {
    if (shots < 1) throw ArgumentError("sample_zpf: shots must be >= 1");
    mode.validate();
    const double sigma = std::sqrt(pc.h * mode.frequency / 2.0);
    const CounterRng rng(seed);
    ZpfEnsemble e{mode, seed, std::vector<std::array<double, 2>>(static_cast<std::size_t>(shots))};
    for (std::size_t i = 0; i < e.quadratures.size(); ++i) {
        const auto [a, b] = rng.normal_pair(i);
        e.quadratures[i] = {sigma * a, sigma * b};
    }
    return e;
}

namespace {

template <class F>
EnsembleMoments moments(std::size_t n, F value) {
    struct Acc {
        double sum = 0, sumsq = 0;
    };
    // Shift by the first sample to keep the variance well conditioned.
    const double shift = n ? value(0) : 0.0;
    const Acc acc = chunked_reduce(
        n, Acc{},
        [&](std::size_t b, std::size_t e, Acc& a) {
            for (std::size_t i = b; i < e; ++i) {
                const double d = value(i) - shift;
                a.sum += d;
                a.sumsq += d * d;
            }
        },
        [](Acc& t, const Acc& c) {
            t.sum += c.sum;
            t.sumsq += c.sumsq;
        });
    const double dn = static_cast<double>(n);
    const double m = acc.sum / dn;
    const double var = n > 1 ? (acc.sumsq - dn * m * m) / (dn - 1.0) : 0.0;
    return {shift + m, std::sqrt(std::max(var, 0.0) / dn)};
}

}  // namespace

EnsembleMoments energy_moments(const ZpfEnsemble& e) {
    return moments(e.shot_count(), [&](std::size_t i) { return e.energy(i); });
}

EnsembleMoments quadrature_moments(const ZpfEnsemble& e, int which) {
    detail::require(which == 0 || which == 1, "quadrature index must be 0 or 1");
    return moments(e.shot_count(), [&](std::size_t i) { return e.quadratures[i][which]; });
}

double planck_mean_energy(double nu, double temperature, PlanckLaw law, const PhysicalConstants& pc) {
    if (!(nu > 0) || !(temperature > 0)) throw DomainError("planck_mean_energy: nu and T must be positive");
    const double quantum = pc.h * nu;
    const double x = quantum / (pc.kB * temperature);
    const double bose = x > 700.0 ? 0.0 : quantum / std::expm1(x);
    return law == PlanckLaw::First ? bose : bose + 0.5 * quantum;
}

SpectrumSample SpectrumSample::line(double nu, double energy) {
    SpectrumSample s;
    s.monochromatic = true;
    s.line_frequency = nu;
    s.line_energy = energy;
    return s;
}

void SpectrumSample::validate() const {
    if (monochromatic) {
        if (!(line_frequency > 0)) throw DomainError("spectral line frequency must be positive");
        detail::require(line_energy >= 0, "spectral line energy must be non-negative");
        return;
    }
    detail::require(grid.size() >= 2, "spectrum grid needs at least two points");
    detail::require(grid.size() == density.size(), "spectrum grid and density sizes differ");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0)) {
            std::ostringstream os;
            os << "spectrum grid point " << i << " is not positive (" << grid[i] << ")";
            throw DomainError(os.str());
        }
        detail::require(i == 0 || grid[i] > grid[i - 1], "spectrum grid must be strictly increasing");
        detail::require(density[i] >= 0, "spectral density must be non-negative");
    }
}

double spectral_quantum(const SpectrumSample& s) {
    s.validate();
    if (s.monochromatic) return s.line_energy / s.line_frequency;
    double sum = 0.0;
    for (std::size_t i = 1; i < s.grid.size(); ++i) {
        const double f0 = s.density[i - 1] / s.grid[i - 1];
        const double f1 = s.density[i] / s.grid[i];
        sum += 0.5 * (f0 + f1) * (s.grid[i] - s.grid[i - 1]);
    }
    return sum;
}

}  // namespace zpf
