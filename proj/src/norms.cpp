#include "wavecharge/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavecharge/sphere_quadrature.hpp"

namespace wavecharge {

namespace {

// snapshot indices with 0 <= t <= horizon, plus trapezoid weights
struct TimeGrid {
    std::vector<std::size_t> idx;
    std::vector<double> w;  // quadrature weight (already times dt)
    double dt = 0.0;
};

TimeGrid horizon_grid(const SpaceTimeHistory& h, double horizon) {
    TimeGrid g;
    g.dt = h.snapshot_dt();
    for (std::size_t k = 0; k < h.snapshots.size(); ++k) {
        const double t = h.snapshots[k].time;
        if (t >= -1e-12 && t <= horizon + 1e-12) g.idx.push_back(k);
    }
    if (g.idx.size() < 2)
        throw std::invalid_argument("norms: horizon too short for the snapshot cadence");
    if (h.snapshots[g.idx.back()].time < horizon - 1e-9)
        throw std::invalid_argument("norms: horizon exceeds the stored history");
    g.w.assign(g.idx.size(), g.dt);
    g.w.front() *= 0.5;
    g.w.back() *= 0.5;
    return g;
}

double japanese_bracket(const Vec3& x) { return std::sqrt(1.0 + dot(x, x)); }

// |u(y + v t, t)|^p integrated over the horizon, one value per cell y.
std::vector<double> cell_trajectory_integrals(const SpaceTimeHistory& h, const Vec3& v,
                                              double horizon, double p) {
    const TimeGrid tg = horizon_grid(h, horizon);
    const BoxGrid& grid = h.grid;
    std::vector<double> acc(grid.size(), 0.0);
    const bool moving = !(v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0);
    for (std::size_t j = 0; j < tg.idx.size(); ++j) {
        const WaveState& s = h.snapshots[tg.idx[j]];
        if (!moving) {
            const auto& uv = s.u.values();
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] += tg.w[j] * std::pow(std::abs(uv[i]), p);
        } else {
            const int n = grid.n();
            for (int iz = 0; iz < n; ++iz)
                for (int iy = 0; iy < n; ++iy)
                    for (int ix = 0; ix < n; ++ix) {
                        const double u = s.u.interpolate(grid.point(ix, iy, iz) + s.time * v);
                        acc[grid.index(ix, iy, iz)] += tg.w[j] * std::pow(std::abs(u), p);
                    }
        }
    }
    return acc;
}

double power_mean_cells(const ScalarField& f, double q) {
    if (q == kInf) return f.max_abs();
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v), q);
    return std::pow(s * f.grid().cell_volume(), 1.0 / q);
}

}  // namespace

NormReport mixed_norm(const SpaceTimeHistory& history, const MixedNormSpec& spec) {
    if (spec.p < 1.0 || spec.q < 1.0)
        throw std::invalid_argument("mixed_norm: exponents must lie in [1, inf]");
    if (norm(spec.trajectory_velocity) >= 1.0)
        throw std::invalid_argument("mixed_norm: trajectory velocity must be subluminal");
    if (spec.has_weight && !(spec.weight_alpha > 3.0))
        throw std::invalid_argument("mixed_norm: weight exponent must exceed 3");
    const BoxGrid& grid = history.grid;
    const TimeGrid tg = horizon_grid(history, spec.horizon);

    auto weighted_field = [&](std::size_t snap_idx) {
        ScalarField f = history.snapshots[snap_idx].u;
        if (spec.has_weight) {
            const double t = history.snapshots[snap_idx].time;
            const int n = grid.n();
            for (int iz = 0; iz < n; ++iz)
                for (int iy = 0; iy < n; ++iy)
                    for (int ix = 0; ix < n; ++ix)
                        f.at(ix, iy, iz) *=
                            std::pow(japanese_bracket(grid.point(ix, iy, iz) - t * spec.weight_mu),
                                     -spec.weight_alpha);
        }
        return f;
    };

    NormReport rep;
    rep.norm_id = spec.outer == OuterVariable::time ? "LtLx" : "LxLt";
    rep.grid_n = grid.n();
    rep.horizon = spec.horizon;
    rep.details["snapshot_dt"] = tg.dt;

    if (spec.outer == OuterVariable::time) {
        double acc = 0.0, sup = 0.0;
        for (std::size_t j = 0; j < tg.idx.size(); ++j) {
            const double inner = power_mean_cells(weighted_field(tg.idx[j]), spec.q);
            if (spec.p == kInf)
                sup = std::max(sup, inner);
            else
                acc += tg.w[j] * std::pow(inner, spec.p);
        }
        rep.value = spec.p == kInf ? sup : std::pow(acc, 1.0 / spec.p);
    } else {
        const bool moving = norm(spec.trajectory_velocity) > 0.0;
        std::vector<double> cell_vals(grid.size(), 0.0);
        if (spec.p == kInf) {
            for (std::size_t j = 0; j < tg.idx.size(); ++j) {
                ScalarField f = weighted_field(tg.idx[j]);
                const double t = history.snapshots[tg.idx[j]].time;
                const int n = grid.n();
                for (int iz = 0; iz < n; ++iz)
                    for (int iy = 0; iy < n; ++iy)
                        for (int ix = 0; ix < n; ++ix) {
                            const std::size_t i = grid.index(ix, iy, iz);
                            const double u =
                                moving ? f.interpolate(grid.point(ix, iy, iz) +
                                                       t * spec.trajectory_velocity)
                                       : f[i];
                            cell_vals[i] = std::max(cell_vals[i], std::abs(u));
                        }
            }
        } else {
            for (std::size_t j = 0; j < tg.idx.size(); ++j) {
                ScalarField f = weighted_field(tg.idx[j]);
                const double t = history.snapshots[tg.idx[j]].time;
                const int n = grid.n();
                for (int iz = 0; iz < n; ++iz)
                    for (int iy = 0; iy < n; ++iy)
                        for (int ix = 0; ix < n; ++ix) {
                            const std::size_t i = grid.index(ix, iy, iz);
                            const double u =
                                moving ? f.interpolate(grid.point(ix, iy, iz) +
                                                       t * spec.trajectory_velocity)
                                       : f[i];
                            cell_vals[i] += tg.w[j] * std::pow(std::abs(u), spec.p);
                        }
            }
            for (double& v : cell_vals) v = std::pow(v, 1.0 / spec.p);
        }
        if (spec.q == kInf) {
            rep.value = *std::max_element(cell_vals.begin(), cell_vals.end());
        } else {
            double s = 0.0;
            for (double v : cell_vals) s += std::pow(v, spec.q);
            rep.value = std::pow(s * grid.cell_volume(), 1.0 / spec.q);
        }
    }
    rep.numerator = rep.value;
    return rep;
}

NormReport reversed_endpoint(const SpaceTimeHistory& history, const Vec3& velocity, double horizon) {
    if (!history.has_trace_velocity(velocity))
        throw std::invalid_argument("reversed_endpoint: missing trace velocity");
    NormReport rep;
    rep.norm_id = "sup_x_int_u2_dt";
    rep.grid_n = history.grid.n();
    rep.horizon = horizon;

    // probe traces at the step cadence
    double sup_traces = 0.0;
    const double dt = history.trace_dt();
    for (const auto& tr : history.traces) {
        if (norm(tr.velocity - velocity) > 1e-14) continue;
        double acc = 0.0;
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
            if (tr.t[k] < -1e-12 || tr.t[k] > horizon + 1e-12) continue;
            double w = dt;
            if (std::abs(tr.t[k]) < 1e-12 || std::abs(tr.t[k] - horizon) < 1e-12) w *= 0.5;
            acc += w * tr.u[k] * tr.u[k];
        }
        sup_traces = std::max(sup_traces, acc);
    }

    // every grid cell as a trajectory start, snapshot cadence
    std::vector<double> R = cell_trajectory_integrals(history, velocity, horizon, 2.0);
    const double sup_cells = *std::max_element(R.begin(), R.end());

    rep.details["sup_traces"] = sup_traces;
    rep.details["sup_cells"] = sup_cells;
    rep.details["trace_dt"] = dt;
    rep.details["snapshot_dt"] = history.snapshot_dt();
    rep.value = std::max(sup_traces, sup_cells);  // lower bound for the true sup
    rep.numerator = rep.value;
    return rep;
}

NormReport weighted_local_decay(const SpaceTimeHistory& history, double alpha, const Vec3& mu,
                                double horizon) {
    if (!(alpha > 3.0)) throw std::invalid_argument("weighted_local_decay: need alpha > 3");
    if (norm(mu) >= 1.0) throw std::invalid_argument("weighted_local_decay: |mu| must stay below 1");
    const BoxGrid& grid = history.grid;

    // Sheared-lattice quadrature: summing <y>^{-alpha} R(y) makes the Hoelder
    // reduction against max_y R(y) an exact inequality between these numbers.
    std::vector<double> R = cell_trajectory_integrals(history, mu, horizon, 2.0);
    double envelope = 0.0, value = 0.0, sup_cells = 0.0;
    const int n = grid.n();
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double w = std::pow(japanese_bracket(grid.point(ix, iy, iz)), -alpha);
                const double r = R[grid.index(ix, iy, iz)];
                envelope += w;
                value += w * r;
                sup_cells = std::max(sup_cells, r);
            }
    envelope *= grid.cell_volume();
    value *= grid.cell_volume();

    NormReport rep;
    rep.norm_id = "weighted_local_decay";
    rep.grid_n = grid.n();
    rep.horizon = horizon;
    rep.value = value;
    rep.numerator = value;
    rep.details["envelope"] = envelope;
    rep.details["sup_cells"] = sup_cells;
    rep.details["holder_bound"] = envelope * sup_cells;
    rep.details["slack"] = envelope * sup_cells - value;
    return rep;
}

double lorentz_quasi_norm(const std::vector<double>& values, double cell_measure, double p, double q) {
    if (!(p > 1.0) || p == kInf)
        throw std::invalid_argument("lorentz_quasi_norm: p must lie in (1, inf)");
    if (!(q >= 1.0)) throw std::invalid_argument("lorentz_quasi_norm: q must lie in [1, inf]");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = std::abs(values[a]), vb = std::abs(values[b]);
        if (va != vb) return va > vb;
        return a < b;  // deterministic tie order by cell index
    });
    if (q == kInf) {
        double best = 0.0, s = 0.0;
        for (std::size_t i : order) {
            const double a = std::abs(values[i]);
            if (a == 0.0) break;
            s += cell_measure;
            best = std::max(best, a * std::pow(s, 1.0 / p));
        }
        return best;
    }
    double acc = 0.0, s_prev = 0.0, s_prev_pow = 0.0;
    const double e = q / p;
    for (std::size_t i : order) {
        const double a = std::abs(values[i]);
        if (a == 0.0) break;
        const double s_next = s_prev + cell_measure;
        const double s_next_pow = std::pow(s_next, e);
        acc += std::pow(a, q) * (p / q) * (s_next_pow - s_prev_pow);
        s_prev = s_next;
        s_prev_pow = s_next_pow;
    }
    return std::pow(acc, 1.0 / q);
}

double lorentz_quasi_norm(const ScalarField& f, double p, double q) {
    return lorentz_quasi_norm(f.values(), f.grid().cell_volume(), p, q);
}

NormReport radial_angular_norm(const SpaceTimeHistory& history, const Vec3& center, double p_angular,
                               double horizon) {
    if (!(p_angular >= 1.0) || p_angular == kInf)
        throw std::invalid_argument("radial_angular_norm: need 1 <= p < inf");
    const BoxGrid& grid = history.grid;
    const double r_max = 0.25 * grid.length();
    const double dr = grid.spacing();
    const int n_r = std::max(2, int(r_max / dr));
    static const SphereQuadrature quad = make_sphere_quadrature(12, 24);
    const TimeGrid tg = horizon_grid(history, horizon);

    double acc = 0.0;
    for (std::size_t j = 0; j < tg.idx.size(); ++j) {
        const WaveState& s = history.snapshots[tg.idx[j]];
        double sup_r = 0.0;
        for (int ir = 0; ir < n_r; ++ir) {
            const double r = (ir + 0.5) * dr;
            if (r > r_max) break;
            double ang = 0.0;
            for (std::size_t w = 0; w < quad.size(); ++w) {
                const double u = s.u.interpolate(center + r * quad.nodes[w]);
                ang += quad.weights[w] * std::pow(std::abs(u), p_angular);
            }
            sup_r = std::max(sup_r, std::pow(ang, 1.0 / p_angular));
        }
        acc += tg.w[j] * sup_r * sup_r;
    }
    NormReport rep;
    rep.norm_id = "Lt2_Lrinf_Lomega_p";
    rep.grid_n = grid.n();
    rep.horizon = horizon;
    rep.value = std::sqrt(acc);
    rep.numerator = rep.value;
    rep.details["p_angular"] = p_angular;
    rep.details["r_max"] = r_max;
    rep.details["angular_nodes"] = double(quad.size());
    return rep;
}

NormReport sup_time_reversed_norm(const SpaceTimeHistory& history, double p, double q,
                                  double weight_beta) {
    const BoxGrid& grid = history.grid;
    std::vector<double> sup(grid.size(), 0.0);
    std::size_t used = 0;
    for (const auto& s : history.snapshots) {
        if (s.time < -1e-12) continue;
        ++used;
        const auto& uv = s.u.values();
        for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], std::abs(uv[i]));
    }
    if (weight_beta != 0.0) {
        const int n = grid.n();
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    sup[grid.index(ix, iy, iz)] *=
                        std::pow(japanese_bracket(grid.point(ix, iy, iz)), -weight_beta);
    }
    NormReport rep;
    rep.norm_id = "Lpq_Ltinf";
    rep.grid_n = grid.n();
    rep.horizon = history.t_max();
    rep.value = lorentz_quasi_norm(sup, grid.cell_volume(), p, q);
    rep.numerator = rep.value;
    rep.details["snapshots_used"] = double(used);
    rep.details["snapshot_dt"] = history.snapshot_dt();
    rep.details["weight_beta"] = weight_beta;
    return rep;
}

InteractionSpaceNorm interaction_space_norm(const BoxGrid& grid, const std::vector<ScalarField>& F,
                                            double dt) {
    if (F.empty()) return {};
    for (const auto& f : F)
        if (f.grid() != grid) throw std::invalid_argument("interaction_space_norm: grid mismatch");
    const int n = grid.n();

    // per-cell time L^2 (trapezoid)
    std::vector<double> G(grid.size(), 0.0);
    double l2_tx_sq = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        double w = dt;
        if (k == 0 || k + 1 == F.size()) w *= 0.5;
        const auto& fv = F[k].values();
        for (std::size_t i = 0; i < G.size(); ++i) G[i] += w * fv[i] * fv[i];
    }
    for (double g : G) l2_tx_sq += g;
    l2_tx_sq *= grid.cell_volume();
    for (double& g : G) g = std::sqrt(g);

    InteractionSpaceNorm out;
    out.lorentz_3_2_1 = lorentz_quasi_norm(G, grid.cell_volume(), 1.5, 1.0);
    out.l2_tx = std::sqrt(l2_tx_sq);

    // per x1 slab: 2D Lorentz(2,1) rearrangement over the orthogonal plane
    const double area = grid.spacing() * grid.spacing();
    double slab_sum = 0.0;
    std::vector<double> plane(std::size_t(n) * n);
    for (int ix = 0; ix < n; ++ix) {
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy) plane[std::size_t(iy) + std::size_t(n) * iz] =
                G[grid.index(ix, iy, iz)];
        slab_sum += lorentz_quasi_norm(plane, area, 2.0, 1.0);
    }
    out.slab_1_21 = slab_sum * grid.spacing();
    out.value = std::max({out.lorentz_3_2_1, out.slab_1_21, out.l2_tx});
    return out;
}

TruncatedDuhamelReport truncated_duhamel(SpectralTransform& tf, const TruncatedDuhamelParams& params) {
    const BoxGrid& grid = tf.grid();
    const double dt = params.dt > 0.0 ? params.dt : grid.spacing() / 4.0;
    if (!(params.T > 0.0)) throw std::invalid_argument("truncated_duhamel: need T > 0");
    if (params.t_samples < 2) throw std::invalid_argument("truncated_duhamel: need >= 2 t samples");
    for (double A : params.A_values)
        if (!(A > 0.0) || A > 0.5 * params.T + 1e-12)
            throw std::invalid_argument("truncated_duhamel: window A must lie in (0, T/2]");

    auto snap = [&](double t) { return std::max(0L, std::lround(t / dt)); };

    TruncatedDuhamelReport rep;
    const AnalyticForcing& forcing = params.forcing;
    const BoundStateSet* pc = params.pc_states;

    StrangStepper::ForcingFn fn = [&forcing, &grid, pc](double t, ScalarField& out) {
        forcing.sample(grid, t, out);
        if (pc && !pc->empty()) out = project_continuous(*pc, out);
    };

    for (double A : params.A_values) {
        const long a_steps = snap(A);
        const long T_steps = snap(params.T);
        std::vector<long> sample_steps;
        for (int i = 0; i < params.t_samples; ++i) {
            const double t = A + (params.T - A) * double(i) / double(params.t_samples - 1);
            long st = snap(t);
            st = std::max(a_steps, std::min(st, T_steps));
            if (sample_steps.empty() || st > sample_steps.back()) sample_steps.push_back(st);
        }

        std::vector<ScalarField> kernels;
        std::vector<double> kernel_times;
        for (long target : sample_steps) {
            const long cutoff = target - a_steps;  // forcing active while k <= cutoff
            StrangStepper st(tf, params.potentials, fn);
            WaveState s(grid);
            s.time = 0.0;
            for (long k = 1; k <= target; ++k) {
                st.set_forcing_active(k <= cutoff);
                s = st.step(s, dt);
            }
            kernels.push_back(s.u);
            kernel_times.push_back(target * dt);
        }

        // L_x^inf L_t^2 over the sampled window, fixed and slanted frames
        auto window_norm = [&](bool slanted) {
            std::vector<double> acc(grid.size(), 0.0);
            const double wdt = kernel_times.size() > 1
                                   ? (kernel_times.back() - kernel_times.front()) /
                                         double(kernel_times.size() - 1)
                                   : 0.0;
            for (std::size_t j = 0; j < kernels.size(); ++j) {
                double w = wdt;
                if (j == 0 || j + 1 == kernels.size()) w *= 0.5;
                const int nn = grid.n();
                for (int iz = 0; iz < nn; ++iz)
                    for (int iy = 0; iy < nn; ++iy)
                        for (int ix = 0; ix < nn; ++ix) {
                            const std::size_t i = grid.index(ix, iy, iz);
                            const double u =
                                slanted ? kernels[j].interpolate(grid.point(ix, iy, iz) +
                                                                 kernel_times[j] * params.velocity)
                                        : kernels[j][i];
                            acc[i] += w * u * u;
                        }
            }
            return std::sqrt(*std::max_element(acc.begin(), acc.end()));
        };

        rep.A.push_back(a_steps * dt);
        rep.value.push_back(window_norm(false));
        rep.value_slanted.push_back(window_norm(true));
    }

    // || F ||_{L_x^1 L_t^2} on a coarse time grid
    {
        const double fdt = 4.0 * dt;
        const long m = std::lround(params.T / fdt);
        std::vector<double> cell(grid.size(), 0.0);
        ScalarField f(grid);
        for (long k = 0; k <= m; ++k) {
            forcing.sample(grid, k * fdt, f);
            double w = fdt;
            if (k == 0 || k == m) w *= 0.5;
            for (std::size_t i = 0; i < cell.size(); ++i) cell[i] += w * f[i] * f[i];
        }
        double acc = 0.0;
        for (double c : cell) acc += std::sqrt(c);
        rep.forcing_l1l2 = acc * grid.cell_volume();
    }

    // power fit log(value) vs log(A)
    if (rep.A.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (std::size_t i = 0; i < rep.A.size(); ++i) {
            if (rep.value[i] <= 0.0) continue;
            const double x = std::log(rep.A[i]), y = std::log(rep.value[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        if (m >= 2) rep.fitted_power = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return rep;
}

}  // namespace wavecharge
