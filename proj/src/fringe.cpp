#include "zpf/fringe.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "zpf/errors.hpp"
#include "zpf/parallel.hpp"
#include "zpf/rng.hpp"

namespace zpf::fringe {

namespace {

double distance(const Vec3& a, const Vec3& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

double path_difference_at(const FringeGeometry& g, const Vec3& r) { return distance(g.s1, r) - distance(g.s2, r); }

// Stream lanes: 0 -> phase jitter, 1.. -> stochastic zpf quadratures.
double shot_phase(const CounterRng& rng, PhaseSampling mode, std::uint64_t i, std::uint64_t n) {
    const double u = rng.uniform(i, 0);
    if (mode == PhaseSampling::Independent) return kTwoPi * u;
    return kTwoPi * (static_cast<double>(i) + u) / static_cast<double>(n);
}

double shot_zpf(const CounterRng& rng, const FringeParams& p, std::uint64_t i) {
    if (!p.stochastic_zpf) return p.zpf_amplitude;
    const auto [a, b] = rng.normal_pair(i, 1);
    return p.zpf_amplitude * std::sqrt(0.5 * (a * a + b * b));
}

}  // namespace

void FringeGeometry::validate() const {
    detail::require(wavelength > 0 && std::isfinite(wavelength), "fringe geometry: wavelength must be positive");
    for (const auto* s : {&s1, &s2})
        for (const auto* r : {&r1, &r2})
            detail::require(distance(*s, *r) > 0, "fringe geometry: a source coincides with a receiver");
}

double FringeGeometry::path_difference(int receiver) const {
    detail::require(receiver == 1 || receiver == 2, "receiver index must be 1 or 2");
    return path_difference_at(*this, receiver == 1 ? r1 : r2);
}

void FringeParams::validate() const {
    detail::require(zpf_amplitude >= 0, "fringe params: Z must be >= 0");
    detail::require(conventional_amplitude >= 0, "fringe params: F must be >= 0");
    detail::require(shots >= 1, "fringe params: shots must be >= 1");
}

std::pair<double, double> shot_intensities(const FringeGeometry& g, const FringeParams& p, double psi) {
    detail::require(psi >= 0 && psi < kTwoPi, "shot_intensities: psi must lie in [0, 2 pi)");
    const double a1 = kPi * g.path_difference(1) / g.wavelength;
    const double a2 = kPi * g.path_difference(2) / g.wavelength;
    const double e1 = p.zpf_amplitude + p.conventional_amplitude * std::cos(a1 + psi);
    const double e2 = p.zpf_amplitude + p.conventional_amplitude * std::cos(a2 + psi);
    return {e1 * e1, e2 * e2};
}

double closed_form_mean(double z, double f, double delta, double wavelength) {
    const double x = kPi * delta / wavelength;
    const double z2 = z * z, f2 = f * f;
    return z2 * z2 + z2 * f2 * (1.0 + 2.0 * std::cos(x)) + f2 * f2 * (0.25 + 0.125 * std::cos(2.0 * x));
}

FringeGeometry geometry_for_delta(const FringeGeometry& tmpl, double delta) {
    tmpl.validate();
    const Vec3 axis{tmpl.s2[0] - tmpl.s1[0], tmpl.s2[1] - tmpl.s1[1], tmpl.s2[2] - tmpl.s1[2]};
    const double sep = std::hypot(axis[0], axis[1], axis[2]);
    if (!(sep > 0)) throw ModelError("fringe geometry: sources coincide, Delta cannot vary");
    const double target = tmpl.path_difference(1) - delta;  // required S1R2 - S2R2
    if (std::abs(target) >= sep) throw ModelError("fringe geometry: requested Delta is not reachable");

    // d(t) = |R - S1| - |R - S2| is increasing along the S1->S2 direction.
    auto moved = [&](double t) {
        Vec3 r = tmpl.r2;
        for (int k = 0; k < 3; ++k) r[k] += t * axis[k] / sep;
        return r;
    };
    double lo = -sep, hi = sep;
    while (path_difference_at(tmpl, moved(lo)) > target) lo *= 2.0;
    while (path_difference_at(tmpl, moved(hi)) < target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (path_difference_at(tmpl, moved(mid)) < target ? lo : hi) = mid;
    }
    FringeGeometry g = tmpl;
    g.r2 = moved(0.5 * (lo + hi));
    g.validate();
    return g;
}

std::vector<ScanRow> correlation_scan(const FringeGeometry& tmpl, const FringeParams& p,
                                      std::span<const double> deltas) {
    p.validate();
    if (deltas.empty()) throw ArgumentError("correlation_scan: empty Delta list");
    if (p.shots < 1000) throw ArgumentError("correlation_scan: shots must be >= 1000");

    std::vector<FringeGeometry> geos;
    geos.reserve(deltas.size());
    for (double d : deltas) geos.push_back(geometry_for_delta(tmpl, d));

    const std::size_t nd = deltas.size();
    std::vector<double> c1(nd), s1(nd), c2(nd), s2(nd);
    for (std::size_t j = 0; j < nd; ++j) {
        const double a1 = kPi * geos[j].path_difference(1) / tmpl.wavelength;
        const double a2 = kPi * geos[j].path_difference(2) / tmpl.wavelength;
        c1[j] = std::cos(a1), s1[j] = std::sin(a1), c2[j] = std::cos(a2), s2[j] = std::sin(a2);
    }

    const auto n = static_cast<std::uint64_t>(p.shots);
    const CounterRng rng(p.seed, 0x46524e47);  // "FRNG"
    const double f = p.conventional_amplitude;
    const bool stratified = p.sampling == PhaseSampling::Stratified;

    // Per Delta: sum of products, and a variance accumulator. For stratified
    // sampling the variance uses collapsed adjacent strata (conservative).
    struct Acc {
        std::vector<double> sum, var;
    };
    const Acc init{std::vector<double>(nd, 0.0), std::vector<double>(nd, 0.0)};
    auto product = [&](std::uint64_t i, std::size_t j) {
        const double psi = shot_phase(rng, p.sampling, i, n);
        const double cp = std::cos(psi), sp = std::sin(psi);
        const double z = shot_zpf(rng, p, i);
        const double e1 = z + f * (c1[j] * cp - s1[j] * sp);
        const double e2 = z + f * (c2[j] * cp - s2[j] * sp);
        return e1 * e1 * e2 * e2;
    };

    // Chunk boundaries are multiples of kChunkSize (even), so strata pairs
    // (2k, 2k+1) never straddle chunks.
    const Acc acc = chunked_reduce(
        static_cast<std::size_t>(n), init,
        [&](std::size_t b, std::size_t e, Acc& a) {
            std::vector<double> prev(nd, 0.0);
            for (std::size_t i = b; i < e; ++i) {
                const double psi = shot_phase(rng, p.sampling, i, n);
                const double cp = std::cos(psi), sp = std::sin(psi);
                const double z = shot_zpf(rng, p, i);
                for (std::size_t j = 0; j < nd; ++j) {
                    const double e1 = z + f * (c1[j] * cp - s1[j] * sp);
                    const double e2 = z + f * (c2[j] * cp - s2[j] * sp);
                    const double v = e1 * e1 * e2 * e2;
                    a.sum[j] += v;
                    if (stratified) {
                        if (i % 2 == 1) a.var[j] += (v - prev[j]) * (v - prev[j]);
                        prev[j] = v;
                    } else {
                        a.var[j] += v * v;
                    }
                }
            }
        },
        [](Acc& t, const Acc& c) {
            for (std::size_t j = 0; j < t.sum.size(); ++j) t.sum[j] += c.sum[j], t.var[j] += c.var[j];
        });

    const double dn = static_cast<double>(n);
    std::vector<ScanRow> rows(nd);
    for (std::size_t j = 0; j < nd; ++j) {
        const double mean = acc.sum[j] / dn;
        double var_of_mean = 0.0;
        if (stratified) {
            double v = acc.var[j];
            if (n % 2 == 1) {
                const double d = product(n - 1, j) - product(n - 2, j);
                v += d * d;
            }
            var_of_mean = v / (dn * dn);
        } else {
            var_of_mean = std::max(acc.var[j] / dn - mean * mean, 0.0) / (dn - 1.0);
        }
        rows[j] = {deltas[j], mean, std::sqrt(var_of_mean),
                   closed_form_mean(p.zpf_amplitude, f, geos[j].delta(), tmpl.wavelength)};
    }
    return rows;
}

Harmonics fringe_analysis(std::span<const ScanRow> table, double wavelength) {
    detail::require(wavelength > 0, "fringe_analysis: wavelength must be positive");
    const std::size_t n = table.size();
    if (n < 8) throw ArgumentError("fringe_analysis: need at least 8 scan points");
    const double h = table[1].delta - table[0].delta;
    if (!(h > 0)) throw ArgumentError("fringe_analysis: Delta values must increase");
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(table[j].delta - table[j - 1].delta - h) > 1e-9 * std::abs(h))
            throw ArgumentError("fringe_analysis: Delta grid must be uniform");
    const double periods = static_cast<double>(n) * h / (2.0 * wavelength);
    if (periods < 2.0 - 1e-9 || std::abs(periods - std::round(periods)) > 1e-9) {
        std::ostringstream os;
        os << "fringe_analysis: scan covers " << periods << " periods of 2 lambda; need a whole number >= 2";
        throw ArgumentError(os.str());
    }

    std::complex<double> h1{}, h2{};
    double offset = 0, var = 0;
    for (const auto& row : table) {
        const double x = kPi * row.delta / wavelength;
        h1 += row.mean * std::polar(1.0, -x);
        h2 += row.mean * std::polar(1.0, -2.0 * x);
        offset += row.mean;
        var += row.stderr_ * row.stderr_;
    }
    const double dn = static_cast<double>(n);
    const double se = 2.0 / dn * std::sqrt(var);
    return {2.0 / dn * std::abs(h1), 2.0 / dn * std::abs(h2), offset / dn, se, se};
}

std::vector<double> uniform_deltas(std::size_t points, int periods, double wavelength) {
    detail::require(points >= 1 && periods >= 1 && wavelength > 0, "uniform_deltas: invalid arguments");
    std::vector<double> d(points);
    const double span = 2.0 * wavelength * periods;
    for (std::size_t j = 0; j < points; ++j) d[j] = span * static_cast<double>(j) / static_cast<double>(points);
    return d;
}

}  // namespace zpf::fringe
