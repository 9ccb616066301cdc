#include "wavecharge/sphere_quadrature.hpp"

#include <cmath>

namespace wavecharge {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-angle initial guess, then Newton on P_n(x) = 0.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

SphereQuadrature make_sphere_quadrature(int n_polar, int n_azimuth) {
    std::vector<double> ct, wt;
    gauss_legendre(n_polar, ct, wt);
    SphereQuadrature q;
    q.nodes.reserve(std::size_t(n_polar) * n_azimuth);
    q.weights.reserve(std::size_t(n_polar) * n_azimuth);
    const double dphi = 2.0 * M_PI / n_azimuth;
    for (int i = 0; i < n_polar; ++i) {
        const double cos_t = ct[i];
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double w = wt[i] * dphi;  // total sums to 4*pi
        for (int j = 0; j < n_azimuth; ++j) {
            const double phi = dphi * j;
            q.nodes.push_back({sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t});
            q.weights.push_back(w);
        }
    }
    return q;
}

}  // namespace wavecharge
