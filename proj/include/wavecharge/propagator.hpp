#pragma once

#include "wavecharge/fft.hpp"
#include "wavecharge/grid.hpp"

namespace wavecharge {

// Exact free flight on the periodic grid, mode-wise:
//   u^    ->  cos(|k| dt) u^ + sin(|k| dt)/|k| ut^
//   ut^   -> -|k| sin(|k| dt) u^ + cos(|k| dt) ut^
// The k=0 mode uses the limit u^ -> u^ + dt ut^.
// Each mode moves on a circle in (|k| u^, ut^), so the discrete free energy
// integral |grad u|^2 + |ut|^2 is conserved to round-off for any dt.
WaveState free_half_wave(SpectralTransform& tf, const WaveState& state, double dt);

// In-place spectral form used by the stepper (spectra in half-spectrum layout).
void free_half_wave_spectral(const SpectralTransform& tf, std::vector<Complex>& u_spec,
                             std::vector<Complex>& ut_spec, double dt);

// Forcing sampled at a fixed cadence, samples[j] at time j*dt.
struct ForcingSamples {
    double dt = 0.0;
    std::vector<ScalarField> samples;
};

// integral_0^t sin((t-s)sqrt(-Delta))/sqrt(-Delta) F(s) ds by composing exact
// free steps with trapezoidal weights in s. Returns the displacement field.
ScalarField free_duhamel(SpectralTransform& tf, const ForcingSamples& forcing, double t);

// integral |grad u|^2 + |ut|^2 dx.
double free_energy(SpectralTransform& tf, const WaveState& state);

}  // namespace wavecharge
