#pragma once

#include "wavecharge/evolution.hpp"

namespace wavecharge {

// Complexified half-wave variable U = A u + i u_t with A = sqrt(-Delta).
// ||U||_L2 matches the energy norm (||u||_{H1dot}^2 + ||ut||_{L2}^2)^{1/2};
// the k = 0 mean of u is invisible to A and carried separately so the round
// trip is exact. The free flow is U(t) = e^{-itA} U(0).
struct ComplexHalfWave {
    BoxGrid grid;
    std::vector<Complex> values;  // physical space
    double time = 0.0;
    double u_mean = 0.0;

    explicit ComplexHalfWave(const BoxGrid& g) : grid(g), values(g.size(), Complex(0.0)) {}
};

ComplexHalfWave to_half_wave(SpectralTransform& tf, const WaveState& state);
WaveState from_half_wave(SpectralTransform& tf, const ComplexHalfWave& U);

double half_wave_norm(const ComplexHalfWave& U);
double half_wave_dist(const ComplexHalfWave& a, const ComplexHalfWave& b);

// e^{-i t A} U, the free half-wave flow.
ComplexHalfWave free_flow(SpectralTransform& tf, const ComplexHalfWave& U, double t);

// U0(0) = U(0) - i integral_0^T e^{isA} (V1 u + V2(. - v s) u)(s) ds,
// trapezoid over the snapshot cadence. The two half-horizon increments of the
// integral witness whether the partial sums look Cauchy.
struct WaveOperatorResult {
    ComplexHalfWave U0;
    double increment_first_half = 0.0;
    double increment_second_half = 0.0;
    double cauchy_ratio = 0.0;
};

// `certified` is the verdict of track_projection_decay; passing false throws,
// the construction is only meaningful for scattering states.
WaveOperatorResult wave_operator_data(SpectralTransform& tf, const SpaceTimeHistory& history,
                                      bool certified);

// d(t) = ||U(t) - e^{-itA} U0|| = ||e^{itA} U(t) - U0|| at snapshot times.
struct ScatteringConvergence {
    std::vector<double> t, deviation;
    double d_final = 0.0;
    double u0_norm_initial = 0.0;  // ||U(0)||
};

ScatteringConvergence scattering_convergence(SpectralTransform& tf, const SpaceTimeHistory& history,
                                             const ComplexHalfWave& U0);

}  // namespace wavecharge
