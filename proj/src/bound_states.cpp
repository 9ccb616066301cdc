#include "wavecharge/bound_states.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wavecharge {

namespace {

constexpr int kMaxOuter = 500;
constexpr int kMaxCg = 500;
constexpr double kResidualTol = 1e-6;

// CG on (H - shift) y = b with the spectral preconditioner (|k|^2 - shift)^{-1}
// (exact inverse of the kinetic part; shift < 0 keeps it positive).
ScalarField cg_solve(SpectralTransform& tf, const ScalarField& sampled_v, double shift,
                     const ScalarField& b) {
    const BoxGrid& grid = b.grid();
    auto apply = [&](const ScalarField& x) {
        ScalarField y = apply_hamiltonian(tf, sampled_v, x);
        y.axpy(-shift, x);
        return y;
    };
    auto precond = [&](const ScalarField& r) {
        std::vector<Complex> spec;
        ScalarField z(grid);
        tf.forward(r, spec);
        const auto& kabs = tf.k_abs();
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] /= (kabs[i] * kabs[i] - shift);
        tf.inverse(spec, z);
        return z;
    };

    ScalarField x(grid);
    ScalarField r = b;
    ScalarField z = precond(r);
    ScalarField p = z;
    double rz = inner(r, z);
    const double b_norm = l2_norm(b);
    if (b_norm == 0.0) return x;
    for (int it = 0; it < kMaxCg; ++it) {
        ScalarField ap = apply(p);
        const double pap = inner(p, ap);
        if (!(pap > 0.0))
            throw std::runtime_error(
                "compute_bound_states: degenerate shift, (H - shift) lost positivity");
        const double alpha = rz / pap;
        x.axpy(alpha, p);
        r.axpy(-alpha, ap);
        if (l2_norm(r) <= 1e-8 * b_norm) break;
        z = precond(r);
        const double rz_new = inner(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < p.values().size(); ++i)
            p.values()[i] = z.values()[i] + beta * p.values()[i];
    }
    return x;
}

void orthogonalize(ScalarField& x, const std::vector<BoundState>& against) {
    for (const auto& s : against) x.axpy(-inner(x, s.w), s.w);
}

}  // namespace

BoundStateSet compute_bound_states(SpectralTransform& tf, const PotentialSpec& spec, int count,
                                   double shift, std::string tag) {
    if (!spec.is_static())
        throw std::invalid_argument("compute_bound_states: spec must be static (compress it first)");
    BoundStateSet set;
    set.hamiltonian_tag = tag;
    set.threshold = std::max(1e-3 * spec.depth(), 1e-12);
    if (spec.is_zero() || count <= 0) return set;
    ScalarField v(tf.grid());
    spec.sample(tf.grid(), 0.0, v);
    return compute_bound_states_sampled(tf, v, spec.depth(), count, shift, std::move(tag));
}

BoundStateSet compute_bound_states_sampled(SpectralTransform& tf, const ScalarField& v,
                                           double depth, int count, double shift, std::string tag) {
    const BoxGrid& grid = tf.grid();
    if (v.grid() != grid)
        throw std::invalid_argument("compute_bound_states: sampled potential grid mismatch");

    BoundStateSet set;
    set.hamiltonian_tag = std::move(tag);
    set.threshold = std::max(1e-3 * depth, 1e-12);
    if (count <= 0 || v.max_abs() == 0.0) return set;

    if (std::isnan(shift)) shift = -1.1 * depth - 0.1;

    // On the torus the continuum band bottom sits near mean(V), not 0; bound
    // states must undercut it by delta0.
    double v_mean = 0.0;
    for (double vv : v.values()) v_mean += vv;
    v_mean /= double(grid.size());
    const double accept_below = v_mean - set.threshold;

    std::mt19937_64 rng(20240811);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int s = 0; s < count; ++s) {
        ScalarField x(grid);
        for (double& xv : x.values()) xv = gauss(rng);
        orthogonalize(x, set.states);
        x *= 1.0 / l2_norm(x);

        double theta = 0.0, res = 0.0;
        bool converged = false;
        for (int outer = 0; outer < kMaxOuter; ++outer) {
            ScalarField y = cg_solve(tf, v, shift, x);
            orthogonalize(y, set.states);
            const double yn = l2_norm(y);
            if (yn == 0.0) break;
            y *= 1.0 / yn;
            ScalarField hy = apply_hamiltonian(tf, v, y);
            theta = inner(hy, y);
            hy.axpy(-theta, y);
            res = l2_norm(hy);
            x = std::move(y);
            if (res <= kResidualTol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw std::runtime_error("compute_bound_states: no convergence after " +
                                     std::to_string(kMaxOuter) + " iterations (residual " +
                                     std::to_string(res) + ")");
        if (theta > accept_below) break;  // bottom of the near-continuum reached
        BoundState bs{theta, std::sqrt(-theta), res, x};
        set.states.push_back(std::move(bs));
    }
    std::sort(set.states.begin(), set.states.end(),
              [](const BoundState& a, const BoundState& b) { return a.eigenvalue < b.eigenvalue; });
    return set;
}

ScalarField project_bound(const BoundStateSet& states, const ScalarField& f) {
    ScalarField out(f.grid());
    for (const auto& s : states.states) {
        require_same_grid(f, s.w, "project_bound");
        out.axpy(inner(f, s.w), s.w);
    }
    return out;
}

ScalarField project_continuous(const BoundStateSet& states, const ScalarField& f) {
    ScalarField out = f;
    for (const auto& s : states.states) {
        require_same_grid(f, s.w, "project_continuous");
        out.axpy(-inner(out, s.w), s.w);
    }
    return out;
}

AgmonReport agmon_decay_check(const BoundStateSet& states, const Vec3& center, double sigma_max) {
    if (states.empty())
        throw std::invalid_argument("agmon_decay_check: empty bound-state set");
    AgmonReport report;
    for (const auto& s : states.states) {
        const BoxGrid& grid = s.w.grid();
        const int n = grid.n();
        const double h = grid.spacing();
        const double r_lo = 3.0 * sigma_max;
        const double r_hi = 0.25 * grid.length();
        const int nbins = std::max(2, int(2.0 * (r_hi - r_lo) / h));

        std::vector<double> sum_sq(nbins, 0.0);
        std::vector<int> cnt(nbins, 0);
        double outer_mass = 0.0;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const Vec3 d = grid.wrap(grid.point(ix, iy, iz) - center);
                    const double w = s.w.at(ix, iy, iz);
                    const double dmax = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
                    if (dmax > r_hi) outer_mass += w * w;
                    const double r = norm(d);
                    if (r >= r_lo && r < r_hi) {
                        const int b = int((r - r_lo) / (r_hi - r_lo) * nbins);
                        sum_sq[b] += w * w;
                        cnt[b]++;
                    }
                }
        outer_mass *= grid.cell_volume();  // w is L2-normalized
        if (outer_mass >= 1e-4)
            throw std::runtime_error(
                "agmon_decay_check: eigenfunction mass at the box boundary, enlarge the box");

        // least squares on log(rms) vs shell midpoint; shells near the
        // eigensolver residual floor (1e-6) are dropped as contaminated
        const double floor_rms = 1e-5 * s.w.max_abs();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int b = 0; b < nbins; ++b) {
            if (cnt[b] == 0) continue;
            const double rms = std::sqrt(sum_sq[b] / cnt[b]);
            if (rms < floor_rms) continue;
            const double r = r_lo + (b + 0.5) * (r_hi - r_lo) / nbins;
            const double lw = std::log(rms);
            sx += r;
            sy += lw;
            sxx += r * r;
            sxy += r * lw;
            ++m;
        }
        if (m < 2) throw std::runtime_error("agmon_decay_check: not enough usable radial shells");
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        report.states.push_back({s.lambda, -slope, outer_mass, m});
    }
    return report;
}

}  // namespace wavecharge
