#pragma once

// Petviashvili relaxation for R'' + R'/rho - R + R^3 = 0 on a cell-centred
// radial grid. Independent of the shooting solver; used only by tests.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace test_oracle {

struct TownesResult {
    double peak;   // R(0) extrapolated from the first two cells
    double power;  // 2 pi * integral R^2 rho d rho
};

inline TownesResult townes_relaxation(double h, double radius) {
    const auto n = static_cast<std::size_t>(radius / h);
    std::vector<double> rho(n), u(n), rhs(n), a(n), b(n), c(n), cp(n), dp(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = (static_cast<double>(i) + 0.5) * h;
        u[i] = 2.0 * std::exp(-rho[i] * rho[i] / 2.0);
    }
    // L = -lap + 1, tridiagonal; Dirichlet just beyond the last cell.
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i == 0 ? 0.0 : rho[i] - 0.5 * h, right = rho[i] + 0.5 * h;
        a[i] = -left / (rho[i] * h * h);
        c[i] = -right / (rho[i] * h * h);
        b[i] = (left + right) / (rho[i] * h * h) + 1.0;
    }
    auto apply_l = [&](const std::vector<double>& v, std::size_t i) {
        double s = b[i] * v[i];
        if (i > 0) s += a[i] * v[i - 1];
        if (i + 1 < n) s += c[i] * v[i + 1];
        return s;
    };
    for (int it = 0; it < 2000; ++it) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] = u[i] * u[i] * u[i];
            num += u[i] * apply_l(u, i) * rho[i];
            den += u[i] * rhs[i] * rho[i];
        }
        const double m = num / den;
        // Thomas algorithm for L x = rhs
        cp[0] = c[0] / b[0];
        dp[0] = rhs[0] / b[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double d = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / d;
            dp[i] = (rhs[i] - a[i] * dp[i - 1]) / d;
        }
        x[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
        const double gain = std::pow(m, 1.5);
        for (std::size_t i = 0; i < n; ++i) u[i] = gain * x[i];
        if (std::abs(m - 1.0) < 1e-13) {
            double p = 0.0;
            for (std::size_t i = 0; i < n; ++i) p += u[i] * u[i] * rho[i] * h;
            return {1.125 * u[0] - 0.125 * u[1], 2.0 * std::numbers::pi * p};
        }
    }
    throw std::runtime_error("Townes relaxation did not converge");
}

}  // namespace test_oracle
