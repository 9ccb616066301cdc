#include "wavecharge/potential.hpp"

#include <cmath>

namespace wavecharge {

PotentialSpec::PotentialSpec(std::vector<GaussianTerm> terms, Vec3 velocity)
    : terms_(std::move(terms)), velocity_(velocity) {
    if (norm(velocity_) >= 1.0)
        throw std::invalid_argument("PotentialSpec: potential speed must stay below 1 (c = 1)");
    for (const auto& t : terms_)
        if (!(t.width[0] > 0.0 && t.width[1] > 0.0 && t.width[2] > 0.0))
            throw std::invalid_argument("PotentialSpec: Gaussian widths must be positive");
}

PotentialSpec PotentialSpec::gaussian_well(double depth, Vec3 width, Vec3 center, Vec3 velocity) {
    if (depth < 0.0) throw std::invalid_argument("gaussian_well: depth is given as a positive number");
    std::vector<GaussianTerm> terms;
    if (depth > 0.0) terms.push_back({-depth, width, center});
    return PotentialSpec(std::move(terms), velocity);
}

double PotentialSpec::depth() const {
    double d = 0.0;
    for (const auto& t : terms_) d = std::max(d, std::abs(t.amplitude));
    return d;
}

double PotentialSpec::value(const BoxGrid& grid, const Vec3& x, double t) const {
    double v = 0.0;
    for (const auto& term : terms_) {
        const Vec3 d = grid.wrap(x - term.center - t * velocity_);
        v += term.amplitude * std::exp(-0.5 * (d[0] * d[0] / (term.width[0] * term.width[0]) +
                                               d[1] * d[1] / (term.width[1] * term.width[1]) +
                                               d[2] * d[2] / (term.width[2] * term.width[2])));
    }
    return v;
}

double PotentialSpec::value_free(const Vec3& x, double t) const {
    double v = 0.0;
    for (const auto& term : terms_) {
        const Vec3 d = x - term.center - t * velocity_;
        v += term.amplitude * std::exp(-0.5 * (d[0] * d[0] / (term.width[0] * term.width[0]) +
                                               d[1] * d[1] / (term.width[1] * term.width[1]) +
                                               d[2] * d[2] / (term.width[2] * term.width[2])));
    }
    return v;
}

Vec3 PotentialSpec::shape_grad(const Vec3& y) const {
    Vec3 g{0.0, 0.0, 0.0};
    for (const auto& term : terms_) {
        const Vec3 d = y - term.center;
        const double val =
            term.amplitude * std::exp(-0.5 * (d[0] * d[0] / (term.width[0] * term.width[0]) +
                                              d[1] * d[1] / (term.width[1] * term.width[1]) +
                                              d[2] * d[2] / (term.width[2] * term.width[2])));
        for (int k = 0; k < 3; ++k) g[k] += val * (-d[k] / (term.width[k] * term.width[k]));
    }
    return g;
}

void PotentialSpec::sample(const BoxGrid& grid, double t, ScalarField& out) const {
    if (out.grid() != grid) out = ScalarField(grid);
    const int n = grid.n();
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                out.at(ix, iy, iz) = value(grid, grid.point(ix, iy, iz), t);
}

PotentialSpec PotentialSpec::compressed() const {
    if (is_static()) return *this;
    if (velocity_[1] != 0.0 || velocity_[2] != 0.0)
        throw std::invalid_argument("PotentialSpec::compressed: boost is only implemented along e1");
    const double v = velocity_[0];
    const double gamma = 1.0 / std::sqrt(1.0 - v * v);
    std::vector<GaussianTerm> terms = terms_;
    for (auto& t : terms) {
        t.width[0] *= gamma;
        t.center[0] *= gamma;
    }
    return PotentialSpec(std::move(terms), {0.0, 0.0, 0.0});
}

ScalarField apply_hamiltonian(SpectralTransform& tf, const ScalarField& sampled_v,
                              const ScalarField& f) {
    require_same_grid(sampled_v, f, "apply_hamiltonian");
    ScalarField out(f.grid());
    tf.laplacian_neg(f, out);
    const auto& vv = sampled_v.values();
    const auto& fv = f.values();
    auto& ov = out.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += vv[i] * fv[i];
    return out;
}

ScalarField apply_hamiltonian(SpectralTransform& tf, const PotentialSpec& spec, double t,
                              const ScalarField& f) {
    if (f.grid() != tf.grid()) throw std::invalid_argument("apply_hamiltonian: grid mismatch");
    ScalarField v(f.grid());
    spec.sample(f.grid(), t, v);
    return apply_hamiltonian(tf, v, f);
}

}  // namespace wavecharge
