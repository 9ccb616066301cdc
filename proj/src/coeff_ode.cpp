#include "wavecharge/coeff_ode.hpp"

#include <cmath>

namespace wavecharge {

bool UniformTable::covers(double a, double b) const {
    if (values.empty()) return true;  // identically zero
    return t0 <= a + 1e-9 && t_end() >= b - 1e-9;
}

double UniformTable::operator()(double t) const {
    if (values.empty()) return 0.0;
    if (values.size() == 1) return values[0];
    const double pos = (t - t0) / dt;
    if (pos <= 0.0) return values.front();
    if (pos >= double(values.size() - 1)) return values.back();
    const long i = long(std::floor(pos));
    const double th = pos - double(i);
    if (th == 0.0) return values[std::size_t(i)];
    if (i == 0 || std::size_t(i) + 2 >= values.size()) {
        // linear at the edges
        return (1.0 - th) * values[std::size_t(i)] + th * values[std::size_t(i) + 1];
    }
    const double pm = values[std::size_t(i) - 1];
    const double p0 = values[std::size_t(i)];
    const double p1 = values[std::size_t(i) + 1];
    const double p2 = values[std::size_t(i) + 2];
    const double a = -0.5 * pm + 1.5 * p0 - 1.5 * p1 + 0.5 * p2;
    const double b = pm - 2.5 * p0 + 2.0 * p1 - 0.5 * p2;
    const double c = 0.5 * (p1 - pm);
    return ((a * th + b) * th + c) * th + p0;
}

double overlap_c(const PotentialSpec& v2, const ScalarField& w, double t) {
    const BoxGrid& grid = w.grid();
    const int n = grid.n();
    double acc = 0.0;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double ww = w.at(ix, iy, iz);
                acc += v2.value(grid, grid.point(ix, iy, iz), t) * ww * ww;
            }
    return acc * grid.cell_volume();
}

UniformTable tabulate_overlap_c(const PotentialSpec& v2, const ScalarField& w, double t0, double dt,
                                int count) {
    UniformTable table;
    table.t0 = t0;
    table.dt = dt;
    table.values.reserve(count);
    for (int k = 0; k < count; ++k) table.values.push_back(overlap_c(v2, w, t0 + k * dt));
    return table;
}

double OdeSolution::max_abs_a() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

OdeSolution solve_coeff_ode(const CoeffOdeState& state, double T, double step) {
    if (!(state.lambda > 0.0)) throw std::invalid_argument("solve_coeff_ode: lambda must be positive");
    if (!(step > 0.0) || !(T > 0.0)) throw std::invalid_argument("solve_coeff_ode: bad T or step");
    if (!state.c.covers(0.0, T) || !state.h.covers(0.0, T))
        throw std::invalid_argument("solve_coeff_ode: coefficient tables do not cover [0, T]");

    const long n = std::lround(T / step);
    const double dt = T / double(n);
    const double lam2 = state.lambda * state.lambda;
    auto acc = [&](double t, double a) { return lam2 * a - state.c(t) * a - state.h(t); };

    OdeSolution sol;
    sol.t.reserve(n + 1);
    sol.a.reserve(n + 1);
    sol.adot.reserve(n + 1);
    double a = state.a0, v = state.adot0;
    sol.t.push_back(0.0);
    sol.a.push_back(a);
    sol.adot.push_back(v);
    for (long k = 0; k < n; ++k) {
        const double t = k * dt;
        const double k1a = v, k1v = acc(t, a);
        const double k2a = v + 0.5 * dt * k1v, k2v = acc(t + 0.5 * dt, a + 0.5 * dt * k1a);
        const double k3a = v + 0.5 * dt * k2v, k3v = acc(t + 0.5 * dt, a + 0.5 * dt * k2a);
        const double k4a = v + dt * k3v, k4v = acc(t + dt, a + dt * k3a);
        a += dt / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
        v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        sol.t.push_back((k + 1) * dt);
        sol.a.push_back(a);
        sol.adot.push_back(v);
    }
    return sol;
}

namespace {

// Residual of the truncated stability condition for a given slope. Any
// quadrature error in the integral seeds a growing-mode coefficient that
// e^{lambda T} amplifies, so composite Simpson matches the RK4 order.
double stability_residual(const CoeffOdeState& base, double adot0, double T, double step,
                          OdeSolution* out_sol) {
    CoeffOdeState s = base;
    s.adot0 = adot0;
    OdeSolution sol = solve_coeff_ode(s, T, step);
    auto integrand = [&](std::size_t k) {
        const double t = sol.t[k];
        return std::exp(-base.lambda * t) * (-(sol.a[k] * base.c(t) + base.h(t)));
    };
    const double h = sol.t.size() > 1 ? sol.t[1] - sol.t[0] : 0.0;
    double integral = 0.0;
    std::size_t m = sol.t.size() - 1;  // interval count
    std::size_t k = 0;
    if (m % 2 == 1) {  // odd tail handled by one trapezoid panel at the start
        integral += 0.5 * h * (integrand(0) + integrand(1));
        k = 1;
        m -= 1;
    }
    for (; k + 2 <= sol.t.size() - 1; k += 2)
        integral += h / 3.0 * (integrand(k) + 4.0 * integrand(k + 1) + integrand(k + 2));
    if (out_sol) *out_sol = std::move(sol);
    return base.a0 + adot0 / base.lambda + integral / base.lambda;
}

}  // namespace

ShootResult stability_shoot(const CoeffOdeState& state, double T, double step) {
    if (!(state.lambda * T >= 5.0))
        throw std::invalid_argument("stability_shoot: need lambda*T >= 5 for growth separation");

    double x0 = -state.lambda * state.a0;  // exact answer when c = h = 0
    double x1 = x0 + std::max(1.0, std::abs(x0)) * 0.1;
    double g0 = stability_residual(state, x0, T, step, nullptr);
    double g1 = stability_residual(state, x1, T, step, nullptr);

    const double scale = std::max({1.0, std::abs(state.a0), std::abs(x0)});
    ShootResult res;
    for (int it = 0; it < 20; ++it) {
        if (std::abs(g1) <= 1e-12 * scale || g1 == g0) break;
        const double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = stability_residual(state, x1, T, step, nullptr);
        res.iterations = it + 1;
    }
    if (std::abs(g1) > 1e-8 * scale)
        throw std::runtime_error("stability_shoot: secant did not converge, residual " +
                                 std::to_string(g1));
    res.adot0 = x1;
    res.residual = stability_residual(state, x1, T, step, &res.solution);
    const double m = res.solution.max_abs_a();
    res.tail_ratio = m > 0.0 ? std::abs(res.solution.a.back()) / m : 0.0;
    return res;
}

ScalarField moving_bound_state(const ScalarField& m, const Boost& boost, double t) {
    const BoxGrid& grid = m.grid();
    const int n = grid.n();
    ScalarField out(grid);
    for (int ix = 0; ix < n; ++ix) {
        const double x1p = boost.gamma * (grid.coord(ix) - boost.v * t);
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy) out.at(ix, iy, iz) = m.interpolate_cubic_x1(x1p, iy, iz);
    }
    return out;
}

EvolutionDecomposition decompose_evolution(SpectralTransform& tf, const SpaceTimeHistory& history,
                                           const BoundStateSet& bs1,
                                           const BoundStateSet& bs2_compressed, const Boost& boost) {
    if (bs1.size() != 1)
        throw std::invalid_argument("decompose_evolution: expects a single bound state for H1");
    if (bs2_compressed.size() > 1)
        throw std::invalid_argument("decompose_evolution: expects at most one bound state for H2");
    const ScalarField& w = bs1[0].w;
    const bool has_m = !bs2_compressed.empty();

    EvolutionDecomposition out;

    double r_m = 0.0;
    if (has_m) {
        r_m = mask_extent_x1(bs2_compressed[0].w);

        // b(t') over the reachable primed window
        const double margin = history.snapshot_dt();
        const double tp_lo = (history.t_min() + margin) / boost.gamma + std::abs(boost.v) * r_m;
        const double tp_hi = (history.t_max() - margin) / boost.gamma - std::abs(boost.v) * r_m;
        if (tp_hi <= tp_lo)
            throw std::runtime_error("decompose_evolution: boosted slice outside stored history");
        const double cadence = history.snapshot_dt();
        out.b.t0 = tp_lo;
        out.b.dt = cadence;
        for (double tp = tp_lo; tp <= tp_hi + 1e-12; tp += cadence)
            out.b.values.push_back(boosted_overlap(tf, history, boost, bs2_compressed[0].w, tp));
    }

    for (std::size_t k = 0; k < history.snapshots.size(); ++k) {
        const WaveState& s = history.snapshots[k];
        const double t = s.time;
        if (t < -1e-12) continue;

        ScalarField b_term(history.grid);
        if (has_m) {
            // every in-support cell needs b at gamma*(t - v x1); skip the
            // snapshot if that argument leaves the tabulated window
            const double arg_lo = t / boost.gamma - std::abs(boost.v) * r_m;
            const double arg_hi = t / boost.gamma + std::abs(boost.v) * r_m;
            if (!out.b.covers(arg_lo, arg_hi)) continue;
            ScalarField mv = moving_bound_state(bs2_compressed[0].w, boost, t);
            const int n = history.grid.n();
            for (int ix = 0; ix < n; ++ix) {
                const double bval = out.b(boost.gamma * (t - boost.v * history.grid.coord(ix)));
                for (int iz = 0; iz < n; ++iz)
                    for (int iy = 0; iy < n; ++iy)
                        b_term.at(ix, iy, iz) = bval * mv.at(ix, iy, iz);
            }
        }

        ScalarField residual_part = s.u;
        residual_part -= b_term;
        const double a = inner(residual_part, w);  // forces <r, w> = 0
        ScalarField r = residual_part;
        r.axpy(-a, w);

        out.t.push_back(t);
        out.a.push_back(a);
        out.covered.push_back(k);

        ScalarField reassembled = r;
        reassembled.axpy(a, w);
        reassembled += b_term;
        reassembled -= s.u;
        const double un = l2_norm(s.u);
        if (un > 0.0)
            out.max_reassembly_error = std::max(out.max_reassembly_error, l2_norm(reassembled) / un);
        out.max_w_overlap = std::max(out.max_w_overlap, std::abs(inner(r, w)));
        out.remainder.push_back(std::move(r));
    }
    if (out.covered.empty())
        throw std::runtime_error("decompose_evolution: no snapshot fits the boosted window");
    return out;
}

}  // namespace wavecharge
