#pragma once

#include "wavecharge/bound_states.hpp"
#include "wavecharge/evolution.hpp"

namespace wavecharge {

// Boost along e1 with speed |v| < 1 (c = 1):
//   t' = gamma (t - v x1),  x1' = gamma (x1 - v t),  gamma = 1/sqrt(1-v^2).
struct Boost {
    double v = 0.0;
    double gamma = 1.0;

    explicit Boost(double speed);
    Boost inverse() const { return Boost(-v); }

    // (x, t) -> (x', t')
    std::pair<Vec3, double> to_primed(const Vec3& x, double t) const;
    // (x', t') -> (x, t)
    std::pair<Vec3, double> to_unprimed(const Vec3& xp, double tp) const;

    // relativistic velocity addition along e1
    static double compose(double v1, double v2) { return (v1 + v2) / (1.0 + v1 * v2); }
};

// u_L(x', t') = u(gamma(x1'+v t'), x2', x3', gamma(t'+v x1')), assembled from
// stored snapshots: cubic Hermite in time per x1' plane, Catmull-Rom in x1 at
// the dilated abscissa. The primed velocity uses the chain rule
//   u_{t'} = gamma (v du/dx1 + du/dt)
// with du/dx1 taken spectrally at the bracketing snapshots. Throws when an
// un-boosted event time leaves the stored range.
WaveState resample_boosted(SpectralTransform& tf, const SpaceTimeHistory& history, const Boost& b,
                           double t_prime);

// <u_L(., t'), m> restricted to cells where |m| >= mask_rel * max|m|. Only the
// events inside that tube must lie in the stored range, which is what makes
// projection tracking on bounded histories possible. The default mask keeps
// the truncation error around 1e-4 of ||u|| while the exponential tail of m
// would otherwise claim the whole box.
double boosted_overlap(SpectralTransform& tf, const SpaceTimeHistory& history, const Boost& b,
                       const ScalarField& m, double t_prime, double mask_rel = 1e-4);

// Extent of that mask along x1 (plus an interpolation margin).
double mask_extent_x1(const ScalarField& m, double mask_rel = 1e-4);

// Energies over the space-like slice t = mu x1, parameterized by x:
//   E1 = integral |grad u|^2,  E2 = integral |u_t|^2,  E3 = E1 + (1-mu^2/2) E2.
struct SlantedSliceEnergy {
    double mu = 0.0;
    double E1 = 0.0, E2 = 0.0, E3 = 0.0;
};

SlantedSliceEnergy slanted_energy(SpectralTransform& tf, const SpaceTimeHistory& history, double mu);

struct ComparabilityRow {
    double mu = 0.0;
    double E1 = 0.0, E2 = 0.0, E3 = 0.0;
    double ratio = 1.0;  // (E1(mu)+E2(mu)) / (E1(0)+E2(0))
    bool flagged = false;
    bool degenerate = false;
};

// Ratio table for a list of slopes; a row is flagged when the ratio leaves
// [1/c_star, c_star]. Zero initial energy degenerates every ratio to 1.
std::vector<ComparabilityRow> comparability_report(SpectralTransform& tf,
                                                   const SpaceTimeHistory& history,
                                                   const std::vector<double>& mus,
                                                   double c_star = 10.0);

struct ProjectionDecay {
    std::vector<double> t, p1;        // ||P_b(H1) u(t)||
    std::vector<double> t_prime, p2;  // ||P_b(H2) u_L(t')||
    bool certified = false;
};

// Scattering-state diagnostic: both projection series must fall below 10% of
// their running maximum over the last quarter of their horizon.
ProjectionDecay track_projection_decay(SpectralTransform& tf, const SpaceTimeHistory& history,
                                       const BoundStateSet& bs1, const BoundStateSet& bs2_compressed,
                                       const Boost& b);

}  // namespace wavecharge
