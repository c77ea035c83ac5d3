#include "levylap/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levylap {

namespace {

constexpr double kPi = std::numbers::pi;

/// Unnormalized associated Legendre P_l^m(cos theta) with Condon-Shortley
/// phase, for a fixed l and all m in [0, l]. Returns p[m] = P_l^m.
std::vector<double> assoc_legendre_row(int l, double x) {
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));  // sin theta
    // Column recurrence in l for each m, seeded at P_m^m and P_{m+1}^m.
    std::vector<double> row(static_cast<size_t>(l) + 1, 0.0);
    for (int m = 0; m <= l; ++m) {
        double pmm = 1.0;  // P_m^m
        for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * sx;
        if (l == m) {
            row[static_cast<size_t>(m)] = pmm;
            continue;
        }
        double pm1 = x * (2.0 * m + 1.0) * pmm;  // P_{m+1}^m
        if (l == m + 1) {
            row[static_cast<size_t>(m)] = pm1;
            continue;
        }
        double pll = 0.0;
        for (int ll = m + 2; ll <= l; ++ll) {
            pll = (x * (2.0 * ll - 1.0) * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
            pmm = pm1;
            pm1 = pll;
        }
        row[static_cast<size_t>(m)] = pll;
    }
    return row;
}

double normalization(int l, int m) {
    double ratio = 1.0;  // (l-m)! / (l+m)!
    for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
    return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
}

}  // namespace

SphHarmJet real_sph_harm_jet(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l)
        throw std::invalid_argument("real_sph_harm_jet: invalid (l, m)");
    const int am = std::abs(m);
    const double x = std::cos(theta);
    const double sx = std::sin(theta);

    std::vector<double> p = assoc_legendre_row(l, x);
    auto pval = [&](int mm) -> double {
        if (mm > l || mm < -l) return 0.0;
        if (mm >= 0) return p[static_cast<size_t>(mm)];
        // P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m for mm = -m < 0.
        double ratio = 1.0;
        for (int k = l + mm + 1; k <= l - mm; ++k) ratio /= k;
        double sign = (mm % 2 == 0) ? 1.0 : -1.0;
        return sign * ratio * p[static_cast<size_t>(-mm)];
    };

    // Theta part and derivatives. dP_l^m/dtheta from the ladder identity;
    // the second derivative from the associated Legendre ODE.
    const double norm = normalization(l, am) * (am > 0 ? std::numbers::sqrt2 : 1.0);
    const double T = norm * pval(am);
    const double Tt = norm * 0.5 *
                      (pval(am + 1) - (l + am) * (l - am + 1.0) * pval(am - 1));
    double Ttt;
    if (sx < 1e-12) {
        Ttt = 0.0;  // callers keep curves away from the poles
    } else {
        const double cot = x / sx;
        Ttt = -cot * Tt - (l * (l + 1.0) - am * am / (sx * sx)) * T;
    }

    // Phi part.
    double F, Fp, Fpp;
    if (m > 0) {
        F = std::cos(m * phi);
        Fp = -m * std::sin(m * phi);
        Fpp = -static_cast<double>(m) * m * F;
    } else if (m < 0) {
        F = std::sin(am * phi);
        Fp = am * std::cos(am * phi);
        Fpp = -static_cast<double>(am) * am * F;
    } else {
        F = 1.0;
        Fp = 0.0;
        Fpp = 0.0;
    }

    SphHarmJet jet;
    jet.y = T * F;
    jet.yt = Tt * F;
    jet.ytt = Ttt * F;
    jet.yp = T * Fp;
    jet.ypp = T * Fpp;
    jet.ytp = Tt * Fp;
    return jet;
}

double real_sph_harm(int l, int m, double theta, double phi) {
    return real_sph_harm_jet(l, m, theta, phi).y;
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    nodes.assign(static_cast<size_t>(n), 0.0);
    weights.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre P_n(x) and derivative by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = x;
        weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace levylap
