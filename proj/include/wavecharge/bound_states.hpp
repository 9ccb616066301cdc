#pragma once

#include <string>

#include "wavecharge/potential.hpp"

namespace wavecharge {

struct BoundState {
    double eigenvalue = 0.0;  // -lambda^2 < 0
    double lambda = 0.0;      // sqrt(-eigenvalue)
    double residual = 0.0;    // ||H w + lambda^2 w||
    ScalarField w;            // L2-normalized eigenfunction
};

// Discrete spectrum of a static Hamiltonian below -delta0. The threshold rule
// delta0 = 1e-3 * depth stands in for the zero-energy regularity hypothesis,
// which has no stable numerical test.
struct BoundStateSet {
    std::string hamiltonian_tag;  // "H1" or "H2"
    double threshold = 0.0;       // delta0
    std::vector<BoundState> states;

    bool empty() const { return states.empty(); }
    std::size_t size() const { return states.size(); }
    const BoundState& operator[](std::size_t i) const { return states[i]; }
};

// Shifted inverse power iteration with conjugate-gradient inner solves on
// (H - shift); converged states are deflated by explicit orthogonalization.
// Returns up to `count` eigenpairs with eigenvalue <= -delta0, sorted
// ascending. `shift` must sit below the expected ground state; pass NaN for
// the default -1.1*depth - 0.1.
BoundStateSet compute_bound_states(SpectralTransform& tf, const PotentialSpec& spec, int count,
                                   double shift, std::string tag = "H1");
// Same, from an already sampled static potential; `depth` feeds delta0.
BoundStateSet compute_bound_states_sampled(SpectralTransform& tf, const ScalarField& sampled_v,
                                           double depth, int count, double shift,
                                           std::string tag = "H1");

// P_c f = f - sum_i <f, w_i> w_i.
ScalarField project_continuous(const BoundStateSet& states, const ScalarField& f);
// P_b f = sum_i <f, w_i> w_i.
ScalarField project_bound(const BoundStateSet& states, const ScalarField& f);

struct AgmonStateReport {
    double lambda = 0.0;
    double fitted_rate = 0.0;       // -slope of log|w| vs r on radial shells
    double outer_mass_fraction = 0.0;
    int shells_used = 0;
};

struct AgmonReport {
    std::vector<AgmonStateReport> states;
};

// Radial-shell regression of log|w| against r over [3*sigma_max, L/4] about
// `center`; also reports the L2 mass fraction beyond max-norm radius L/4
// (throws when it exceeds 1e-4: the box is too small for the state).
AgmonReport agmon_decay_check(const BoundStateSet& states, const Vec3& center, double sigma_max);

}  // namespace wavecharge
