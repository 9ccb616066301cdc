#include "wavecharge/evolution.hpp"

#include <cmath>

namespace wavecharge {

double AnalyticForcing::value(const BoxGrid& grid, const Vec3& x, double t) const {
    const Vec3 d = grid.wrap(x - center - t * velocity);
    const double env = std::exp(-0.5 * (t - t_center) * (t - t_center) / (t_sigma * t_sigma));
    return amplitude * env *
           std::exp(-0.5 * (d[0] * d[0] / (width[0] * width[0]) + d[1] * d[1] / (width[1] * width[1]) +
                            d[2] * d[2] / (width[2] * width[2])));
}

void AnalyticForcing::sample(const BoxGrid& grid, double t, ScalarField& out) const {
    if (out.grid() != grid) out = ScalarField(grid);
    const int n = grid.n();
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                out.at(ix, iy, iz) = value(grid, grid.point(ix, iy, iz), t);
}

void EvolutionConfig::validate(const BoxGrid& grid) const {
    const double step = effective_dt(grid);
    if (!(step > 0.0)) throw std::invalid_argument("EvolutionConfig: dt must be positive");
    if (!(t_max >= 0.0) || t_min > 0.0)
        throw std::invalid_argument("EvolutionConfig: need t_min <= 0 <= t_max");
    if (snapshot_stride < 1) throw std::invalid_argument("EvolutionConfig: snapshot_stride >= 1");
    for (const Vec3& v : trace_velocities)
        if (norm(v) >= 1.0)
            throw std::invalid_argument("EvolutionConfig: trace velocities must be subluminal");
    for (const PotentialSpec& p : potentials)
        if (p.speed() >= 1.0)
            throw std::invalid_argument("EvolutionConfig: potential velocities must be subluminal");
    auto integral_steps = [&](double span) {
        const double k = span / step;
        if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k))
            throw std::invalid_argument(
                "EvolutionConfig: horizon must be an integer number of steps (adjust dt or T)");
    };
    integral_steps(t_max);
    integral_steps(-t_min);
}

namespace {

void sample_total_potential(const BoxGrid& grid, const std::vector<PotentialSpec>& pots, double t,
                            ScalarField& out) {
    if (out.grid() != grid) out = ScalarField(grid);
    const int n = grid.n();
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Vec3 x = grid.point(ix, iy, iz);
                double v = 0.0;
                for (const auto& p : pots) v += p.value(grid, x, t);
                out.at(ix, iy, iz) = v;
            }
}

void kick(WaveState& s, const ScalarField& v, double weight) {
    auto& ut = s.ut.values();
    const auto& u = s.u.values();
    const auto& vv = v.values();
    for (std::size_t i = 0; i < ut.size(); ++i) ut[i] -= weight * vv[i] * u[i];
}

}  // namespace

StrangStepper::StrangStepper(SpectralTransform& tf, std::vector<PotentialSpec> potentials,
                             ForcingFn forcing)
    : tf_(tf), potentials_(std::move(potentials)), forcing_(std::move(forcing)), v_now_(tf.grid()),
      v_next_(tf.grid()), f_mid_(tf.grid()) {
    for (const auto& p : potentials_)
        if (!p.is_zero()) has_potential_ = true;
}

void StrangStepper::prime(double t) {
    if (has_potential_) sample_total_potential(tf_.grid(), potentials_, t, v_now_);
    primed_at_ = t;
    primed_ = true;
}

WaveState StrangStepper::step(const WaveState& s, double dt) {
    const double t = s.time;
    if (!primed_ || std::abs(primed_at_ - t) > 1e-12 * std::max(1.0, std::abs(t))) prime(t);
    WaveState out = s;
    if (has_potential_) kick(out, v_now_, 0.5 * dt);
    std::vector<Complex> us, uts;
    tf_.forward(out.u, us);
    tf_.forward(out.ut, uts);
    if (forcing_ && forcing_active_) {
        free_half_wave_spectral(tf_, us, uts, 0.5 * dt);
        forcing_(t + 0.5 * dt, f_mid_);
        std::vector<Complex> fs;
        tf_.forward(f_mid_, fs);
        for (std::size_t i = 0; i < uts.size(); ++i) uts[i] += dt * fs[i];
        free_half_wave_spectral(tf_, us, uts, 0.5 * dt);
    } else {
        free_half_wave_spectral(tf_, us, uts, dt);
    }
    tf_.inverse(us, out.u);
    tf_.inverse(uts, out.ut);
    if (has_potential_) {
        sample_total_potential(tf_.grid(), potentials_, t + dt, v_next_);
        kick(out, v_next_, 0.5 * dt);
        std::swap(v_now_, v_next_);
    }
    out.time = t + dt;
    primed_at_ = out.time;
    return out;
}

WaveState step_strang(SpectralTransform& tf, const WaveState& state,
                      const std::vector<PotentialSpec>& potentials, double t, double dt,
                      const AnalyticForcing* forcing) {
    if (state.time != t) {
        WaveState shifted = state;
        shifted.time = t;
        return step_strang(tf, shifted, potentials, t, dt, forcing);
    }
    StrangStepper::ForcingFn fn;
    if (forcing) {
        const AnalyticForcing f = *forcing;
        const BoxGrid grid = tf.grid();
        fn = [f, grid](double tt, ScalarField& out) { f.sample(grid, tt, out); };
    }
    StrangStepper st(tf, potentials, std::move(fn));
    return st.step(state, dt);
}

namespace {

void record_ledger(SpectralTransform& tf, const std::vector<PotentialSpec>& pots,
                   const WaveState& s, EnergyLedger& ledger) {
    ledger.times.push_back(s.time);
    ledger.kinetic.push_back(l2_norm_sq(s.ut));
    ledger.gradient.push_back(tf.h1_seminorm_sq(s.u));
    if (ledger.potential.size() != pots.size()) ledger.potential.resize(pots.size());
    double pot_total = 0.0;
    ScalarField v(s.grid());
    for (std::size_t j = 0; j < pots.size(); ++j) {
        pots[j].sample(s.grid(), s.time, v);
        double e = 0.0;
        const auto& uv = s.u.values();
        const auto& vv = v.values();
        for (std::size_t i = 0; i < uv.size(); ++i) e += vv[i] * uv[i] * uv[i];
        e *= s.grid().cell_volume();
        ledger.potential[j].push_back(e);
        pot_total += e;
    }
    ledger.total.push_back(ledger.kinetic.back() + ledger.gradient.back() + pot_total);
}

void record_traces(SpectralTransform& tf, const EvolutionConfig& cfg, const WaveState& s,
                   std::vector<TraceSeries>& traces) {
    if (traces.empty()) return;
    if (cfg.spectral_traces) {
        std::vector<Vec3> pts;
        pts.reserve(traces.size());
        for (const auto& tr : traces) pts.push_back(s.grid().wrap(tr.probe + s.time * tr.velocity));
        std::vector<double> us = tf.evaluate_points(s.u, pts);
        std::vector<double> uts = tf.evaluate_points(s.ut, pts);
        for (std::size_t i = 0; i < traces.size(); ++i) {
            traces[i].t.push_back(s.time);
            traces[i].u.push_back(us[i]);
            traces[i].ut.push_back(uts[i]);
        }
        return;
    }
    for (auto& tr : traces) {
        const Vec3 x = tr.probe + s.time * tr.velocity;
        tr.t.push_back(s.time);
        tr.u.push_back(s.u.interpolate(x));
        tr.ut.push_back(s.ut.interpolate(x));
    }
}

}  // namespace

SpaceTimeHistory evolve(SpectralTransform& tf, const EvolutionConfig& cfg, const WaveState& initial) {
    const BoxGrid& grid = tf.grid();
    cfg.validate(grid);
    if (initial.grid() != grid) throw std::invalid_argument("evolve: initial data grid mismatch");
    if (initial.time != 0.0) throw std::invalid_argument("evolve: initial data must sit at t = 0");
    const double dt = cfg.effective_dt(grid);
    const long steps_fwd = std::lround(cfg.t_max / dt);
    const long steps_bwd = std::lround(-cfg.t_min / dt);
    if (steps_fwd % cfg.snapshot_stride != 0 || steps_bwd % cfg.snapshot_stride != 0)
        throw std::invalid_argument(
            "evolve: horizon steps must be a multiple of snapshot_stride for a uniform cadence");

    SpaceTimeHistory hist(grid);
    hist.config = cfg;
    for (std::size_t p = 0; p < cfg.probes.size(); ++p)
        for (const Vec3& v : cfg.trace_velocities)
            hist.traces.push_back(TraceSeries{int(p), cfg.probes[p], v, {}, {}, {}});

    StrangStepper::ForcingFn forcing_fn;
    if (cfg.forcing) {
        const AnalyticForcing f = *cfg.forcing;
        forcing_fn = [f, grid](double tt, ScalarField& out) { f.sample(grid, tt, out); };
    }

    auto run_branch = [&](long steps, double sdt, std::vector<WaveState>& snaps,
                          std::vector<TraceSeries>& traces, EnergyLedger& ledger) {
        StrangStepper st(tf, cfg.potentials, forcing_fn);
        WaveState s = initial;
        record_traces(tf, cfg, s, traces);
        snaps.push_back(s);
        record_ledger(tf, cfg.potentials, s, ledger);
        for (long k = 1; k <= steps; ++k) {
            s = st.step(s, sdt);
            record_traces(tf, cfg, s, traces);
            if (k % cfg.snapshot_stride == 0) {
                if (!s.u.all_finite() || !s.ut.all_finite())
                    throw std::runtime_error("evolve: field is not finite at step " +
                                             std::to_string(k) + " (t = " + std::to_string(s.time) +
                                             ")");
                snaps.push_back(s);
                record_ledger(tf, cfg.potentials, s, ledger);
            }
        }
    };

    std::vector<WaveState> fwd_snaps;
    std::vector<TraceSeries> fwd_traces = hist.traces;
    EnergyLedger fwd_ledger;
    run_branch(steps_fwd, dt, fwd_snaps, fwd_traces, fwd_ledger);

    if (steps_bwd > 0) {
        std::vector<WaveState> bwd_snaps;
        std::vector<TraceSeries> bwd_traces = hist.traces;
        EnergyLedger bwd_ledger;
        run_branch(steps_bwd, -dt, bwd_snaps, bwd_traces, bwd_ledger);
        // merge: backward branch reversed, dropping the duplicate t = 0 entry
        for (std::size_t i = bwd_snaps.size(); i-- > 1;) hist.snapshots.push_back(bwd_snaps[i]);
        for (auto& s : fwd_snaps) hist.snapshots.push_back(std::move(s));
        auto merge_series = [](const std::vector<double>& bwd, const std::vector<double>& fwd) {
            std::vector<double> out;
            for (std::size_t i = bwd.size(); i-- > 1;) out.push_back(bwd[i]);
            out.insert(out.end(), fwd.begin(), fwd.end());
            return out;
        };
        for (std::size_t j = 0; j < hist.traces.size(); ++j) {
            hist.traces[j].t = merge_series(bwd_traces[j].t, fwd_traces[j].t);
            hist.traces[j].u = merge_series(bwd_traces[j].u, fwd_traces[j].u);
            hist.traces[j].ut = merge_series(bwd_traces[j].ut, fwd_traces[j].ut);
        }
        hist.ledger.times = merge_series(bwd_ledger.times, fwd_ledger.times);
        hist.ledger.kinetic = merge_series(bwd_ledger.kinetic, fwd_ledger.kinetic);
        hist.ledger.gradient = merge_series(bwd_ledger.gradient, fwd_ledger.gradient);
        hist.ledger.total = merge_series(bwd_ledger.total, fwd_ledger.total);
        hist.ledger.potential.resize(fwd_ledger.potential.size());
        for (std::size_t j = 0; j < fwd_ledger.potential.size(); ++j)
            hist.ledger.potential[j] = merge_series(bwd_ledger.potential[j], fwd_ledger.potential[j]);
    } else {
        hist.snapshots = std::move(fwd_snaps);
        hist.traces = std::move(fwd_traces);
        hist.ledger = std::move(fwd_ledger);
    }
    return hist;
}

double SpaceTimeHistory::snapshot_dt() const {
    return snapshots.size() > 1 ? snapshots[1].time - snapshots[0].time
                                : config.effective_dt(grid) * config.snapshot_stride;
}

double SpaceTimeHistory::trace_dt() const { return config.effective_dt(grid); }

const TraceSeries& SpaceTimeHistory::trace_for(int probe_id, const Vec3& velocity) const {
    for (const auto& tr : traces)
        if (tr.probe_id == probe_id && norm(tr.velocity - velocity) < 1e-14) return tr;
    throw std::invalid_argument("SpaceTimeHistory: no trace recorded for this probe/velocity");
}

bool SpaceTimeHistory::has_trace_velocity(const Vec3& velocity) const {
    for (const auto& tr : traces)
        if (norm(tr.velocity - velocity) < 1e-14) return true;
    return false;
}

WaveState SpaceTimeHistory::interpolate_state(double t) const {
    if (snapshots.empty()) throw std::runtime_error("SpaceTimeHistory: empty");
    if (t < t_min() - 1e-12 || t > t_max() + 1e-12)
        throw std::out_of_range("SpaceTimeHistory: time outside stored range");
    const double sd = snapshot_dt();
    double pos = (t - snapshots.front().time) / sd;
    long k = std::lround(pos);
    if (k >= 0 && std::size_t(k) < snapshots.size() && std::abs(pos - double(k)) < 1e-10)
        return snapshots[std::size_t(k)];  // exact snapshot hit
    if (snapshots.size() < 2)
        throw std::out_of_range("SpaceTimeHistory: single snapshot, cannot interpolate");
    long k0 = long(std::floor(pos));
    k0 = std::max(0L, std::min(k0, long(snapshots.size()) - 2));
    const WaveState& a = snapshots[std::size_t(k0)];
    const WaveState& b = snapshots[std::size_t(k0 + 1)];
    const double th = (t - a.time) / sd;

    // Hermite basis and its derivative
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    const double d00 = 6 * th * (th - 1) / sd;
    const double d10 = (3 * th * th - 4 * th + 1);
    const double d01 = -6 * th * (th - 1) / sd;
    const double d11 = (3 * th * th - 2 * th);

    WaveState out(grid);
    out.time = t;
    auto& u = out.u.values();
    auto& ut = out.ut.values();
    const auto& ua = a.u.values();
    const auto& ub = b.u.values();
    const auto& va = a.ut.values();
    const auto& vb = b.ut.values();
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = h00 * ua[i] + h10 * sd * va[i] + h01 * ub[i] + h11 * sd * vb[i];
        ut[i] = d00 * ua[i] + d10 * va[i] + d01 * ub[i] + d11 * vb[i];
    }
    return out;
}

ScalarField SpaceTimeHistory::sheared_field(double t, const Vec3& v) const {
    WaveState s = interpolate_state(t);
    ScalarField out(grid);
    const int n = grid.n();
    if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) return s.u;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                out.at(ix, iy, iz) = s.u.interpolate(grid.point(ix, iy, iz) + t * v);
    return out;
}

ChannelDecomposition channel_decomposition(const WaveState& snapshot, double t, double delta,
                                           const Vec3& v) {
    const BoxGrid& grid = snapshot.grid();
    const double r_core = delta * t;
    if (!(r_core >= 4.0 * grid.spacing()))
        throw std::invalid_argument("channel_decomposition: need delta*t >= 4 grid spacings");
    const double speed = norm(v);
    if (speed > 0.0 && !(delta < 0.5 * speed))
        throw std::invalid_argument("channel_decomposition: overlapping balls, need delta < |v|/2");

    auto cutoff = [&](double r) {
        if (r <= r_core) return 1.0;
        if (r >= 2.0 * r_core) return 0.0;
        const double q = (r - r_core) / r_core;
        return 1.0 - q * q * q * (10.0 + q * (-15.0 + 6.0 * q));  // quintic smoothstep
    };

    ChannelDecomposition out{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    const int n = grid.n();
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Vec3 x = grid.point(ix, iy, iz);
                const double c1 = cutoff(norm(grid.wrap(x)));
                const double c2 = cutoff(norm(grid.wrap(x - t * v)));
                const double uu = snapshot.u.at(ix, iy, iz);
                out.chi1_u.at(ix, iy, iz) = c1 * uu;
                out.chi2_u.at(ix, iy, iz) = c2 * uu;
                out.chi3_u.at(ix, iy, iz) = (1.0 - c1 - c2) * uu;
            }
    out.mass1 = l2_norm_sq(out.chi1_u);
    out.mass2 = l2_norm_sq(out.chi2_u);
    out.mass3 = l2_norm_sq(out.chi3_u);
    return out;
}

EnergyDerivative energy_derivative_check(const SpaceTimeHistory& history) {
    EnergyDerivative out;
    const auto& ledger = history.ledger;
    if (ledger.times.size() < 3) return out;
    const BoxGrid& grid = history.grid;
    const int n = grid.n();

    double max_rate = 0.0;
    for (std::size_t k = 1; k + 1 < ledger.times.size(); ++k) {
        const double t = ledger.times[k];
        const double dEdt =
            (ledger.total[k + 1] - ledger.total[k - 1]) / (ledger.times[k + 1] - ledger.times[k - 1]);

        double flux = 0.0;
        for (const auto& pot : history.config.potentials) {
            if (pot.is_static() || pot.is_zero()) continue;
            // - v . integral grad V(y) |u(y + v t, t)|^2 dy
            ScalarField us = history.sheared_field(t, pot.velocity());
            double acc = 0.0;
            for (int iz = 0; iz < n; ++iz)
                for (int iy = 0; iy < n; ++iy)
                    for (int ix = 0; ix < n; ++ix) {
                        const Vec3 y = grid.point(ix, iy, iz);
                        const double w = us.at(ix, iy, iz);
                        acc += dot(pot.velocity(), pot.shape_grad(y)) * w * w;
                    }
            flux -= acc * grid.cell_volume();
        }
        out.t.push_back(t);
        out.dEdt.push_back(dEdt);
        out.flux.push_back(flux);
        max_rate = std::max(max_rate, std::abs(dEdt));
    }
    const double floor = std::max(max_rate, 1e-12);
    for (std::size_t k = 0; k < out.t.size(); ++k)
        out.max_defect = std::max(out.max_defect, std::abs(out.dEdt[k] - out.flux[k]) / floor);
    return out;
}

}  // namespace wavecharge
