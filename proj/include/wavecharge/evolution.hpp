#pragma once

#include <functional>
#include <optional>

#include "wavecharge/potential.hpp"
#include "wavecharge/propagator.hpp"

namespace wavecharge {

// Space Gaussian times time Gaussian, translated at a constant velocity.
struct AnalyticForcing {
    double amplitude = 0.0;
    Vec3 width = {1.0, 1.0, 1.0};
    Vec3 center = {0.0, 0.0, 0.0};
    Vec3 velocity = {0.0, 0.0, 0.0};
    double t_center = 0.0;
    double t_sigma = 1.0;

    double value(const BoxGrid& grid, const Vec3& x, double t) const;
    void sample(const BoxGrid& grid, double t, ScalarField& out) const;
};

struct EvolutionConfig {
    std::vector<PotentialSpec> potentials;
    double dt = 0.0;      // 0 means the default spacing/4
    double t_max = 0.0;   // horizon T
    double t_min = 0.0;   // may be negative: two-sided history for slanted slices
    int snapshot_stride = 4;
    std::vector<Vec3> probes;
    std::vector<Vec3> trace_velocities;
    std::optional<AnalyticForcing> forcing;
    bool spectral_traces = false;  // trigonometric off-grid trace sampling (slow)

    double effective_dt(const BoxGrid& grid) const { return dt > 0.0 ? dt : grid.spacing() / 4.0; }
    void validate(const BoxGrid& grid) const;
};

// One trace u(x + v t, t) sampled every step.
struct TraceSeries {
    int probe_id = 0;
    Vec3 probe = {0, 0, 0};
    Vec3 velocity = {0, 0, 0};
    std::vector<double> t, u, ut;
};

struct EnergyLedger {
    std::vector<double> times;
    std::vector<double> kinetic;                      // integral ut^2
    std::vector<double> gradient;                     // integral |grad u|^2
    std::vector<std::vector<double>> potential;       // per potential, integral V_j u^2
    std::vector<double> total;
};

struct SpaceTimeHistory {
    BoxGrid grid;
    EvolutionConfig config;
    std::vector<WaveState> snapshots;  // time-ascending, uniform cadence stride*dt
    std::vector<TraceSeries> traces;
    EnergyLedger ledger;

    explicit SpaceTimeHistory(const BoxGrid& g) : grid(g) {}
    double t_min() const { return snapshots.front().time; }
    double t_max() const { return snapshots.back().time; }
    double snapshot_dt() const;
    double trace_dt() const;

    const TraceSeries& trace_for(int probe_id, const Vec3& velocity) const;
    bool has_trace_velocity(const Vec3& velocity) const;

    // Cubic Hermite in time from the stored (u, ut) pairs; ut comes from the
    // derivative of the same polynomial.
    WaveState interpolate_state(double t) const;
    // u(x + v t, t) on the grid (trilinear shear of a time-interpolated state).
    ScalarField sheared_field(double t, const Vec3& v) const;
};

// One Strang step: half kick with V(t), exact free flight, half kick with
// V(t+dt); forcing enters as a full kick at the temporal midpoint, between
// two half flights. Second order in dt. The class form caches the sampled
// potential between consecutive steps; feed it a monotone time sequence.
class StrangStepper {
public:
    // writes the forcing sample at time t into `out`
    using ForcingFn = std::function<void(double t, ScalarField& out)>;

    StrangStepper(SpectralTransform& tf, std::vector<PotentialSpec> potentials,
                  ForcingFn forcing = {});

    void prime(double t);  // sample V(t) before the first step
    void set_forcing_active(bool active) { forcing_active_ = active; }
    WaveState step(const WaveState& state, double dt);

private:
    SpectralTransform& tf_;
    std::vector<PotentialSpec> potentials_;
    ForcingFn forcing_;
    bool forcing_active_ = true;
    bool has_potential_ = false;
    double primed_at_ = 0.0;
    bool primed_ = false;
    ScalarField v_now_, v_next_, f_mid_;
};

WaveState step_strang(SpectralTransform& tf, const WaveState& state,
                      const std::vector<PotentialSpec>& potentials, double t, double dt,
                      const AnalyticForcing* forcing = nullptr);

// Integrate over [t_min, t_max] (backward branch runs the reversible stepper
// with negative dt), capturing snapshots, probe traces and the energy ledger.
// Aborts with the offending step index if the field stops being finite.
SpaceTimeHistory evolve(SpectralTransform& tf, const EvolutionConfig& cfg, const WaveState& initial);

struct ChannelDecomposition {
    ScalarField chi1_u, chi2_u, chi3_u;
    double mass1 = 0.0, mass2 = 0.0, mass3 = 0.0;  // ||chi_i u||^2
};

// Partition of unity: chi1 smooth cutoff of B_{delta t}(0) (support in
// B_{2 delta t}), chi2 the same shape carried to the moving center v t,
// chi3 = 1 - chi1 - chi2. The three pieces sum to u exactly.
ChannelDecomposition channel_decomposition(const WaveState& snapshot, double t, double delta,
                                           const Vec3& v);

struct EnergyDerivative {
    double max_defect = 0.0;
    std::vector<double> t, dEdt, flux;
};

// Checks d/dt E(t) = - sum_j v_j . integral grad V_j(y) |u(y + v_j t, t)|^2 dy
// against centered differences of the ledger. Defect is normalized by the
// largest |dE/dt| seen (with a small floor).
EnergyDerivative energy_derivative_check(const SpaceTimeHistory& history);

}  // namespace wavecharge
