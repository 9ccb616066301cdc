#include "wavecharge/kirchhoff.hpp"

namespace wavecharge {

std::vector<double> kirchhoff_eval_many(SpectralTransform& tf, const ScalarField& f, double t,
                                        const std::vector<Vec3>& probes, const SphereQuadrature& quad) {
    const double L = tf.grid().length();
    if (!(t > 0.0)) throw std::invalid_argument("kirchhoff_eval: requires t > 0");
    if (t >= 0.25 * L)
        throw std::invalid_argument("kirchhoff_eval: horizon too large, t must stay below box_length/4");
    if (quad.size() < 590)
        throw std::invalid_argument("kirchhoff_eval: sphere quadrature needs at least 590 nodes");

    std::vector<Vec3> pts;
    pts.reserve(probes.size() * quad.size());
    for (const Vec3& x : probes)
        for (const Vec3& w : quad.nodes) pts.push_back(x + t * w);
    std::vector<double> vals = tf.evaluate_points(f, pts);

    std::vector<double> out(probes.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        double acc = 0.0;
        for (std::size_t q = 0; q < quad.size(); ++q) acc += quad.weights[q] * vals[k++];
        // (1/(4 pi t)) * t^2 * mean-sum: weights already sum to 4 pi
        out[p] = acc * t / (4.0 * M_PI);
    }
    return out;
}

double kirchhoff_eval(SpectralTransform& tf, const ScalarField& f, double t, const Vec3& x,
                      const SphereQuadrature& quad) {
    return kirchhoff_eval_many(tf, f, t, {x}, quad)[0];
}

double kirchhoff_eval(SpectralTransform& tf, const ScalarField& f, double t, const Vec3& x) {
    static const SphereQuadrature default_quad = make_sphere_quadrature();
    return kirchhoff_eval(tf, f, t, x, default_quad);
}

double truncated_newton_kernel(double h, const Vec3& x, const Vec3& y) {
    if (h < 0.0) throw std::invalid_argument("truncated_newton_kernel: h must be nonnegative");
    const double r = norm(x - y);
    if (r < h || r == 0.0) return 0.0;
    return 1.0 / r;
}

}  // namespace wavecharge
