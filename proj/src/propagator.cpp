#include "wavecharge/propagator.hpp"

#include <cmath>

namespace wavecharge {

void free_half_wave_spectral(const SpectralTransform& tf, std::vector<Complex>& u_spec,
                             std::vector<Complex>& ut_spec, double dt) {
    const auto& kabs = tf.k_abs();
    for (std::size_t i = 0; i < u_spec.size(); ++i) {
        const double k = kabs[i];
        Complex u = u_spec[i], ut = ut_spec[i];
        if (k == 0.0) {
            u_spec[i] = u + dt * ut;  // ut unchanged
        } else {
            const double c = std::cos(k * dt);
            const double s = std::sin(k * dt);
            u_spec[i] = c * u + (s / k) * ut;
            ut_spec[i] = -k * s * u + c * ut;
        }
    }
}

WaveState free_half_wave(SpectralTransform& tf, const WaveState& state, double dt) {
    if (!std::isfinite(dt)) throw std::invalid_argument("free_half_wave: dt must be finite");
    std::vector<Complex> us, uts;
    tf.forward(state.u, us);
    tf.forward(state.ut, uts);
    free_half_wave_spectral(tf, us, uts, dt);
    WaveState out(state.grid());
    tf.inverse(us, out.u);
    tf.inverse(uts, out.ut);
    out.time = state.time + dt;
    return out;
}

ScalarField free_duhamel(SpectralTransform& tf, const ForcingSamples& forcing, double t) {
    if (forcing.dt <= 0.0) throw std::invalid_argument("free_duhamel: forcing cadence must be positive");
    const double steps_real = t / forcing.dt;
    const long steps = std::lround(steps_real);
    if (std::abs(steps_real - double(steps)) > 1e-9 * std::max(1.0, std::abs(steps_real)))
        throw std::invalid_argument("free_duhamel: t is not a multiple of the forcing cadence");
    if (std::size_t(steps) + 1 > forcing.samples.size())
        throw std::invalid_argument("free_duhamel: forcing samples do not cover [0, t]");

    // Kicks injected into ut^ and carried by exact free flight give
    //   sum_j w_j dt sin((t - s_j)A)/A F(s_j),  the trapezoid sum.
    std::vector<Complex> us(tf.spectrum_size(), Complex(0.0));
    std::vector<Complex> uts(tf.spectrum_size(), Complex(0.0));
    std::vector<Complex> fs;
    for (long j = 0; j <= steps; ++j) {
        if (j > 0) free_half_wave_spectral(tf, us, uts, forcing.dt);
        const double w = (j == 0 || j == steps) ? 0.5 : 1.0;
        tf.forward(forcing.samples[std::size_t(j)], fs);
        for (std::size_t i = 0; i < uts.size(); ++i) uts[i] += w * forcing.dt * fs[i];
    }
    ScalarField out(tf.grid());
    tf.inverse(us, out);
    return out;
}

double free_energy(SpectralTransform& tf, const WaveState& state) {
    return tf.h1_seminorm_sq(state.u) + l2_norm_sq(state.ut);
}

}  // namespace wavecharge
