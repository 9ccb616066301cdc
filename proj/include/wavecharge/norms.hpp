#pragma once

#include <map>
#include <string>

#include "wavecharge/bound_states.hpp"
#include "wavecharge/evolution.hpp"

namespace wavecharge {

enum class OuterVariable { time, space };

// Mixed space-time Lebesgue norm specification. The optional weight applies
// <x - mu t>^{-alpha} pointwise before any norm is taken; a nonzero
// trajectory velocity turns the inner time integral into one along x + v t.
struct MixedNormSpec {
    OuterVariable outer = OuterVariable::time;
    double p = 2.0;  // outer exponent (inf allowed)
    double q = 2.0;  // inner exponent (inf allowed)
    double horizon = 0.0;
    Vec3 trajectory_velocity = {0.0, 0.0, 0.0};
    bool has_weight = false;
    double weight_alpha = 0.0;
    Vec3 weight_mu = {0.0, 0.0, 0.0};
};

struct NormReport {
    std::string norm_id;
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;  // usually ||f||_L2 + ||g||_H1dot; 0 when unset
    double ratio = 0.0;
    int grid_n = 0;
    double horizon = 0.0;
    std::map<std::string, double> details;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Discrete quadrature: Riemann sum with the cell volume inside, trapezoid
// weights over snapshot times outside (or the reverse order for reversed
// norms). Snapshot cadence limits time resolution; it is recorded in details.
NormReport mixed_norm(const SpaceTimeHistory& history, const MixedNormSpec& spec);

// sup_x integral_0^T |u(x + v t, t)|^2 dt, realized two ways and reported
// both: max over the recorded probe traces (step cadence) and max over all
// grid cells of the sheared snapshot quadrature. `value` is the larger.
NormReport reversed_endpoint(const SpaceTimeHistory& history, const Vec3& velocity, double horizon);

// integral integral <x - mu t>^{-alpha} u^2 dx dt over [0, horizon], summed on
// the sheared lattice y = x - mu t so that the reduction
//   value <= (sum_y <y>^{-alpha} h^3) * max_y R(y)
// holds exactly against the snapshot-based reversed endpoint estimator R.
// details carry the envelope constant and the sup-trace bound.
NormReport weighted_local_decay(const SpaceTimeHistory& history, double alpha, const Vec3& mu,
                                double horizon);

// Lorentz quasi-norm by volume-weighted decreasing rearrangement (stable tie
// order by cell index):
//   ||f||_{p,q}^q = sum_i a_i^q (p/q) (s_{i+1}^{q/p} - s_i^{q/p}),
// the exact rearrangement integral of the step function f*.
double lorentz_quasi_norm(const std::vector<double>& values, double cell_measure, double p, double q);
double lorentz_quasi_norm(const ScalarField& f, double p, double q);

// ||u||_{L_t^2 L_r^inf L_omega^p} about `center`: snapshots resampled to
// spheres (trilinear), L^p over the 4pi-normalized angular measure, sup over
// radii up to L/4, L^2 over time.
NormReport radial_angular_norm(const SpaceTimeHistory& history, const Vec3& center, double p_angular,
                               double horizon);

// ||u||_{L_x^{p,q} L_t^inf} with an optional <x>^{-beta} weight applied before
// the rearrangement: per-cell sup over snapshots, then the Lorentz quasi-norm.
NormReport sup_time_reversed_norm(const SpaceTimeHistory& history, double p, double q,
                                  double weight_beta = 0.0);

// max of ||F||_{L_x^{3/2,1} L_t^2}, ||F||_{L_{x1}^1 L_{x1-perp}^{2,1} L_t^2}
// and ||F||_{L^2_{t,x}} (the intersection norm for strong interaction terms).
struct InteractionSpaceNorm {
    double lorentz_3_2_1 = 0.0;
    double slab_1_21 = 0.0;
    double l2_tx = 0.0;
    double value = 0.0;
};
InteractionSpaceNorm interaction_space_norm(const BoxGrid& grid, const std::vector<ScalarField>& F,
                                            double dt);

// Truncated perturbed Duhamel kernel
//   k_A(., t) = integral_0^{t-A} sin((t-s) sqrt(H))/sqrt(H) P_c F(s) ds,
// rebuilt by re-propagating with the forcing gated to s <= t - A, sampled at
// t_samples times in [A, T]. Measures ||k_A||_{L_x^inf L_t^2 [A, T]} plus the
// slanted variant and fits the power of A across the given ladder.
struct TruncatedDuhamelParams {
    std::vector<PotentialSpec> potentials;
    const BoundStateSet* pc_states = nullptr;  // P_c projector; null = identity
    AnalyticForcing forcing;
    double T = 0.0;
    Vec3 velocity = {0.0, 0.0, 0.0};
    std::vector<double> A_values;
    int t_samples = 8;
    double dt = 0.0;  // 0 = spacing/4
};

struct TruncatedDuhamelReport {
    std::vector<double> A;
    std::vector<double> value;          // fixed-frame kernel norms
    std::vector<double> value_slanted;  // along x + v t
    double fitted_power = 0.0;          // slope of log value vs log A
    double forcing_l1l2 = 0.0;          // ||F||_{L_x^1 L_t^2}
};
TruncatedDuhamelReport truncated_duhamel(SpectralTransform& tf, const TruncatedDuhamelParams& params);

}  // namespace wavecharge
