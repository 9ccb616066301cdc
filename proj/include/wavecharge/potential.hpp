#pragma once

#include "wavecharge/fft.hpp"
#include "wavecharge/grid.hpp"

namespace wavecharge {

// One anisotropic Gaussian term amplitude * exp(-sum_d (x_d-c_d)^2/(2 w_d^2)).
// Wells carry negative amplitude.
struct GaussianTerm {
    double amplitude = 0.0;
    Vec3 width = {1.0, 1.0, 1.0};
    Vec3 center = {0.0, 0.0, 0.0};
};

// Analytic potential shape translated along a constant subluminal velocity:
// V(x - v t). Gaussian tails dominate every polynomial decay rate, so the
// required <x>^{-alpha} (alpha > 3) falloff holds automatically.
class PotentialSpec {
public:
    PotentialSpec() = default;
    PotentialSpec(std::vector<GaussianTerm> terms, Vec3 velocity);

    static PotentialSpec gaussian_well(double depth, Vec3 width, Vec3 center = {0, 0, 0},
                                       Vec3 velocity = {0, 0, 0});

    const std::vector<GaussianTerm>& terms() const { return terms_; }
    const Vec3& velocity() const { return velocity_; }
    double speed() const { return norm(velocity_); }
    bool is_static() const { return velocity_[0] == 0 && velocity_[1] == 0 && velocity_[2] == 0; }
    bool is_zero() const { return terms_.empty(); }

    // Largest well depth; sets the bound-state threshold delta0 = 1e-3*depth.
    double depth() const;

    // V(x - v t) at a physical point, shape centers folded by minimum image
    // so the moving well stays consistent with the periodic fields.
    double value(const BoxGrid& grid, const Vec3& x, double t) const;
    double value_free(const Vec3& x, double t) const;  // no periodic folding
    // Gradient of the frame-fixed shape V(y) (for the energy flux identity).
    Vec3 shape_grad(const Vec3& y) const;

    void sample(const BoxGrid& grid, double t, ScalarField& out) const;

    // Static spec seen in the frame where this potential rests: velocity zero
    // and the x1 argument dilated by sqrt(1-v^2), i.e. widths stretched by
    // gamma along the motion. Velocity must point along e1.
    PotentialSpec compressed() const;

private:
    std::vector<GaussianTerm> terms_;
    Vec3 velocity_ = {0.0, 0.0, 0.0};
};

// (-Delta + V(. - v t)) f with the Laplacian applied spectrally.
ScalarField apply_hamiltonian(SpectralTransform& tf, const PotentialSpec& spec, double t,
                              const ScalarField& f);

// Same with a pre-sampled potential (hot path).
ScalarField apply_hamiltonian(SpectralTransform& tf, const ScalarField& sampled_v,
                              const ScalarField& f);

}  // namespace wavecharge
