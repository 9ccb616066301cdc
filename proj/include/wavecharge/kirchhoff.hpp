#pragma once

#include "wavecharge/fft.hpp"
#include "wavecharge/sphere_quadrature.hpp"

namespace wavecharge {

// Retarded spherical mean 1/(4 pi t) * integral_{|x-y|=t} f(y) sigma(dy),
// i.e. the displacement sin(t sqrt(-Delta))/sqrt(-Delta) f at one point.
// Off-grid sphere nodes are evaluated by trigonometric interpolation, so the
// quadrature error is purely angular. Requires t < box_length/4 so the sphere
// sees no periodic images.
double kirchhoff_eval(SpectralTransform& tf, const ScalarField& f, double t, const Vec3& x,
                      const SphereQuadrature& quad);
double kirchhoff_eval(SpectralTransform& tf, const ScalarField& f, double t, const Vec3& x);

// Batched form: one spectral pass per call, many probes.
std::vector<double> kirchhoff_eval_many(SpectralTransform& tf, const ScalarField& f, double t,
                                        const std::vector<Vec3>& probes, const SphereQuadrature& quad);

// Kernel of cos(h sqrt(-Delta)) (-Delta)^{-1}, up to the 1/(4 pi) Newton
// normalization: 1/|x-y| where |x-y| >= h, zero inside.
double truncated_newton_kernel(double h, const Vec3& x, const Vec3& y);

}  // namespace wavecharge
