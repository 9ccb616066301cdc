#include "wavecharge/half_wave.hpp"

#include <cmath>

namespace wavecharge {

ComplexHalfWave to_half_wave(SpectralTransform& tf, const WaveState& state) {
    ComplexHalfWave U(state.grid());
    U.time = state.time;
    ScalarField au(state.grid());
    tf.sqrt_laplacian(state.u, au);
    double mean = 0.0;
    for (double v : state.u.values()) mean += v;
    U.u_mean = mean / double(state.grid().size());
    for (std::size_t i = 0; i < U.values.size(); ++i)
        U.values[i] = Complex(au[i], state.ut[i]);
    return U;
}

WaveState from_half_wave(SpectralTransform& tf, const ComplexHalfWave& U) {
    WaveState out(U.grid);
    out.time = U.time;
    ScalarField re(U.grid);
    for (std::size_t i = 0; i < U.values.size(); ++i) {
        re[i] = U.values[i].real();
        out.ut[i] = U.values[i].imag();
    }
    tf.inv_sqrt_laplacian(re, out.u);
    for (double& v : out.u.values()) v += U.u_mean;
    return out;
}

double half_wave_norm(const ComplexHalfWave& U) {
    double s = 0.0;
    for (const Complex& v : U.values) s += std::norm(v);
    return std::sqrt(s * U.grid.cell_volume());
}

double half_wave_dist(const ComplexHalfWave& a, const ComplexHalfWave& b) {
    if (a.grid != b.grid) throw std::invalid_argument("half_wave_dist: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(s * a.grid.cell_volume());
}

namespace {

// multiply by e^{i phase |k|} in the full spectrum
void phase_flow(SpectralTransform& tf, std::vector<Complex>& field, double phase) {
    std::vector<Complex> spec;
    tf.forward_complex(field, spec);
    const auto& kabs = tf.k_abs_full();
    for (std::size_t i = 0; i < spec.size(); ++i)
        spec[i] *= std::exp(Complex(0.0, phase * kabs[i]));
    tf.inverse_complex(spec, field);
}

}  // namespace

ComplexHalfWave free_flow(SpectralTransform& tf, const ComplexHalfWave& U, double t) {
    ComplexHalfWave out = U;
    phase_flow(tf, out.values, -t);
    out.time = U.time + t;
    // the k=0 mode of U carries i*mean(ut); the removed u-mean drifts freely
    out.u_mean = U.u_mean;  // tracked, not evolved: H1dot pairing is mean-blind
    return out;
}

WaveOperatorResult wave_operator_data(SpectralTransform& tf, const SpaceTimeHistory& history,
                                      bool certified) {
    if (!certified)
        throw std::invalid_argument(
            "wave_operator_data: certification failed, not a scattering state");
    const BoxGrid& grid = history.grid;

    // snapshots in [0, T]
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < history.snapshots.size(); ++k)
        if (history.snapshots[k].time >= -1e-12) idx.push_back(k);
    if (idx.size() < 3) throw std::invalid_argument("wave_operator_data: history too short");
    const double dt = history.snapshot_dt();
    const double T = history.snapshots[idx.back()].time;

    ScalarField vsum(grid);
    std::vector<Complex> term(grid.size());
    std::vector<Complex> integral(grid.size(), Complex(0.0));
    std::vector<Complex> first_half;
    double inc1 = 0.0, inc2 = 0.0;

    for (std::size_t j = 0; j < idx.size(); ++j) {
        const WaveState& s = history.snapshots[idx[j]];
        // W(s) = (V1 + V2(. - v s)) u(s)
        const int n = grid.n();
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    double v = 0.0;
                    for (const auto& p : history.config.potentials)
                        v += p.value(grid, grid.point(ix, iy, iz), s.time);
                    vsum.at(ix, iy, iz) = v * s.u.at(ix, iy, iz);
                }
        for (std::size_t i = 0; i < term.size(); ++i) term[i] = Complex(vsum[i], 0.0);
        phase_flow(tf, term, +s.time);
        double w = dt;
        if (j == 0 || j + 1 == idx.size()) w *= 0.5;
        for (std::size_t i = 0; i < integral.size(); ++i) integral[i] += w * term[i];
        if (s.time <= 0.5 * T + 1e-9 &&
            (j + 1 == idx.size() || history.snapshots[idx[j + 1]].time > 0.5 * T + 1e-9))
            first_half = integral;
    }
    if (first_half.empty()) first_half = integral;

    auto l2 = [&](const std::vector<Complex>& a, const std::vector<Complex>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
        return std::sqrt(s * grid.cell_volume());
    };
    std::vector<Complex> zero(grid.size(), Complex(0.0));
    inc1 = l2(first_half, zero);
    inc2 = l2(integral, first_half);

    WaveOperatorResult res{ComplexHalfWave(grid), inc1, inc2, inc1 > 0.0 ? inc2 / inc1 : 0.0};
    ComplexHalfWave U0 = to_half_wave(tf, history.snapshots[idx.front()]);
    for (std::size_t i = 0; i < U0.values.size(); ++i)
        U0.values[i] -= Complex(0.0, 1.0) * integral[i];
    res.U0 = std::move(U0);
    return res;
}

ScatteringConvergence scattering_convergence(SpectralTransform& tf, const SpaceTimeHistory& history,
                                             const ComplexHalfWave& U0) {
    ScatteringConvergence out;
    for (const auto& s : history.snapshots) {
        if (s.time < -1e-12) continue;
        ComplexHalfWave U = to_half_wave(tf, s);
        if (s.time == 0.0) out.u0_norm_initial = half_wave_norm(U);
        phase_flow(tf, U.values, +s.time);  // e^{itA} U(t), unitary
        out.t.push_back(s.time);
        out.deviation.push_back(half_wave_dist(U, U0));
    }
    if (!out.deviation.empty()) out.d_final = out.deviation.back();
    return out;
}

}  // namespace wavecharge
