#pragma once

#include "wavecharge/lorentz.hpp"

namespace wavecharge {

// Uniformly sampled time series with cubic interpolation (Catmull-Rom inside,
// linear at the edges). An empty table reads as zero.
struct UniformTable {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    bool empty() const { return values.empty(); }
    double t_end() const { return values.empty() ? t0 : t0 + dt * double(values.size() - 1); }
    bool covers(double t0_, double t1_) const;
    double operator()(double t) const;
};

// c(t) = <V2(. - v t) w, w>, the moving-well overlap against a stationary
// bound state; evaluated by direct quadrature of the analytic potential.
double overlap_c(const PotentialSpec& v2, const ScalarField& w, double t);
UniformTable tabulate_overlap_c(const PotentialSpec& v2, const ScalarField& w, double t0, double dt,
                                int count);

// State of the coefficient equation
//   a''(t) - lambda^2 a(t) + c(t) a(t) + h(t) = 0.
struct CoeffOdeState {
    double lambda = 0.0;
    double a0 = 0.0;
    double adot0 = 0.0;
    UniformTable c;  // empty = 0
    UniformTable h;  // empty = 0
};

struct OdeSolution {
    std::vector<double> t, a, adot;
    double max_abs_a() const;
};

// Classical RK4 on (a, a'); tables are read through cubic interpolation so
// halving the step keeps fourth order.
OdeSolution solve_coeff_ode(const CoeffOdeState& state, double T, double step);

// Enforces the truncated stability condition
//   a(0) + a'(0)/lambda + (1/lambda) int_0^T e^{-lambda s} N(s) ds = 0,
//   N = -[a c + h],
// by secant iteration on a'(0) (the map is affine, so it lands in a couple of
// steps). Returns the corrected slope and the final residual.
struct ShootResult {
    double adot0 = 0.0;
    double residual = 0.0;
    int iterations = 0;
    double tail_ratio = 0.0;  // |a(T)| / max_t |a|
    OdeSolution solution;
};
ShootResult stability_shoot(const CoeffOdeState& state, double T, double step);

// u(t) = a(t) w + b(gamma(t - v x1)) m_v + r, with b read off in the boosted
// frame and a corrected so that <r, w> vanishes identically. Covers the
// snapshot range whose b-arguments fit in the reachable primed window.
struct EvolutionDecomposition {
    std::vector<double> t, a;
    UniformTable b;
    std::vector<std::size_t> covered;      // indices into history.snapshots
    std::vector<ScalarField> remainder;    // r at the covered snapshots
    double max_reassembly_error = 0.0;     // ||a w + b m_v + r - u|| / ||u||
    double max_w_overlap = 0.0;            // max |<r, w>|
};

EvolutionDecomposition decompose_evolution(SpectralTransform& tf, const SpaceTimeHistory& history,
                                           const BoundStateSet& bs1,
                                           const BoundStateSet& bs2_compressed, const Boost& boost);

// m_v(x, t) = m(gamma(x1 - v t), x2, x3) sampled on the grid.
ScalarField moving_bound_state(const ScalarField& m, const Boost& boost, double t);

}  // namespace wavecharge
