#include "wavecharge/lorentz.hpp"

#include <cmath>
#include <map>

namespace wavecharge {

Boost::Boost(double speed) : v(speed) {
    if (std::abs(speed) >= 1.0) throw std::invalid_argument("Boost: speed must stay below 1");
    gamma = 1.0 / std::sqrt(1.0 - speed * speed);
}

std::pair<Vec3, double> Boost::to_primed(const Vec3& x, double t) const {
    return {{gamma * (x[0] - v * t), x[1], x[2]}, gamma * (t - v * x[0])};
}

std::pair<Vec3, double> Boost::to_unprimed(const Vec3& xp, double tp) const {
    return {{gamma * (xp[0] + v * tp), xp[1], xp[2]}, gamma * (tp + v * xp[0])};
}

namespace {

struct HermiteWeights {
    double h00, h10, h01, h11;  // value basis (slopes scaled by the step)
    double d00, d10, d01, d11;  // derivative basis
};

HermiteWeights hermite(double th, double sd) {
    HermiteWeights w;
    w.h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    w.h10 = th * (1 - th) * (1 - th) * sd;
    w.h01 = th * th * (3 - 2 * th);
    w.h11 = th * th * (th - 1) * sd;
    w.d00 = 6 * th * (th - 1) / sd;
    w.d10 = 3 * th * th - 4 * th + 1;
    w.d01 = -6 * th * (th - 1) / sd;
    w.d11 = 3 * th * th - 2 * th;
    return w;
}

// Snapshot pair bracketing plus lazily cached d/dx1 fields. Plane sweeps hit
// brackets monotonically, so stale cache entries are evicted as we go.
class HistorySampler {
public:
    HistorySampler(SpectralTransform& tf, const SpaceTimeHistory& h) : tf_(tf), h_(h) {
        sd_ = h.snapshot_dt();
        t0_ = h.snapshots.front().time;
    }

    struct Bracket {
        std::size_t k0;
        double th;  // in [0,1); th == 0 means an exact snapshot hit
    };

    Bracket bracket(double t) const {
        if (t < h_.t_min() - 1e-9 || t > h_.t_max() + 1e-9)
            throw std::out_of_range("lorentz: event time " + std::to_string(t) +
                                    " outside stored history [" + std::to_string(h_.t_min()) + ", " +
                                    std::to_string(h_.t_max()) + "]");
        double pos = (t - t0_) / sd_;
        long k = std::lround(pos);
        if (std::abs(pos - double(k)) < 1e-10 && k >= 0 && std::size_t(k) < h_.snapshots.size())
            return {std::size_t(k), 0.0};
        long k0 = std::max(0L, std::min(long(std::floor(pos)), long(h_.snapshots.size()) - 2));
        return {std::size_t(k0), pos - double(k0)};
    }

    const WaveState& snap(std::size_t k) const { return h_.snapshots[k]; }
    double step() const { return sd_; }

    const ScalarField& du_dx1(std::size_t k) {
        auto it = du_.find(k);
        if (it == du_.end()) {
            ScalarField d(h_.grid);
            tf_.d_dx1(h_.snapshots[k].u, d);
            it = du_.emplace(k, std::move(d)).first;
            evict(du_, k);
        }
        return it->second;
    }
    const ScalarField& dut_dx1(std::size_t k) {
        auto it = dut_.find(k);
        if (it == dut_.end()) {
            ScalarField d(h_.grid);
            tf_.d_dx1(h_.snapshots[k].ut, d);
            it = dut_.emplace(k, std::move(d)).first;
            evict(dut_, k);
        }
        return it->second;
    }

private:
    static void evict(std::map<std::size_t, ScalarField>& cache, std::size_t keep_from) {
        while (!cache.empty() && cache.begin()->first + 3 < keep_from) cache.erase(cache.begin());
    }

    SpectralTransform& tf_;
    const SpaceTimeHistory& h_;
    double sd_ = 0.0, t0_ = 0.0;
    std::map<std::size_t, ScalarField> du_, dut_;
};

double catmull_rom(double pm, double p0, double p1, double p2, double t) {
    const double a = -0.5 * pm + 1.5 * p0 - 1.5 * p1 + 0.5 * p2;
    const double b = pm - 2.5 * p0 + 2.0 * p1 - 0.5 * p2;
    const double c = 0.5 * (p1 - pm);
    return ((a * t + b) * t + c) * t + p0;
}

}  // namespace

WaveState resample_boosted(SpectralTransform& tf, const SpaceTimeHistory& history, const Boost& b,
                           double t_prime) {
    const BoxGrid& grid = history.grid;
    const int n = grid.n();
    HistorySampler sampler(tf, history);
    WaveState out(grid);
    out.time = t_prime;

    for (int i1 = 0; i1 < n; ++i1) {
        const double x1p = grid.coord(i1);
        const double t_event = b.gamma * (t_prime + b.v * x1p);
        const double x1_event = b.gamma * (x1p + b.v * t_prime);
        auto br = sampler.bracket(t_event);
        const auto w = hermite(br.th, sampler.step());
        const bool exact_t = (br.th == 0.0);

        // locate the four x1 columns around the dilated abscissa
        double s = (grid.wrap(x1_event) + 0.5 * grid.length()) / grid.spacing();
        double fl = std::floor(s);
        double tx = s - fl;
        int c1 = grid.wrap_index(int(fl));
        int cm = (c1 + n - 1) % n, c2 = (c1 + 1) % n, c3 = (c1 + 2) % n;
        const bool exact_x = (tx == 0.0);

        const auto& ua = sampler.snap(br.k0).u;
        const auto& va = sampler.snap(br.k0).ut;
        const auto& dua = sampler.du_dx1(br.k0);

        const WaveState& sb = sampler.snap(std::min(br.k0 + 1, history.snapshots.size() - 1));
        const auto& ub = sb.u;
        const auto& vb = sb.ut;

        auto u_at = [&](int ix, int iy, int iz) {
            if (exact_t) return ua.at(ix, iy, iz);
            return w.h00 * ua.at(ix, iy, iz) + w.h10 * va.at(ix, iy, iz) +
                   w.h01 * ub.at(ix, iy, iz) + w.h11 * vb.at(ix, iy, iz);
        };
        auto ut_at = [&](int ix, int iy, int iz) {
            if (exact_t) return va.at(ix, iy, iz);
            return w.d00 * ua.at(ix, iy, iz) + w.d10 * va.at(ix, iy, iz) +
                   w.d01 * ub.at(ix, iy, iz) + w.d11 * vb.at(ix, iy, iz);
        };

        if (b.v == 0.0 && exact_t && exact_x) {
            // pure copy path, keeps v = 0 resampling bitwise
            for (int iz = 0; iz < n; ++iz)
                for (int iy = 0; iy < n; ++iy) {
                    out.u.at(i1, iy, iz) = ua.at(c1, iy, iz);
                    out.ut.at(i1, iy, iz) = va.at(c1, iy, iz);
                }
            continue;
        }

        const ScalarField* dub = nullptr;
        const ScalarField* dva = nullptr;
        const ScalarField* dvb = nullptr;
        if (!exact_t) {
            dva = &sampler.dut_dx1(br.k0);
            dub = &sampler.du_dx1(br.k0 + 1);
            dvb = &sampler.dut_dx1(br.k0 + 1);
        }
        auto dux_at = [&](int ix, int iy, int iz) {
            if (exact_t) return dua.at(ix, iy, iz);
            return w.h00 * dua.at(ix, iy, iz) + w.h10 * dva->at(ix, iy, iz) +
                   w.h01 * dub->at(ix, iy, iz) + w.h11 * dvb->at(ix, iy, iz);
        };

        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy) {
                double u, dudt, dudx;
                if (exact_x) {
                    u = u_at(c1, iy, iz);
                    dudt = ut_at(c1, iy, iz);
                    dudx = dux_at(c1, iy, iz);
                } else {
                    u = catmull_rom(u_at(cm, iy, iz), u_at(c1, iy, iz), u_at(c2, iy, iz),
                                    u_at(c3, iy, iz), tx);
                    dudt = catmull_rom(ut_at(cm, iy, iz), ut_at(c1, iy, iz), ut_at(c2, iy, iz),
                                       ut_at(c3, iy, iz), tx);
                    dudx = catmull_rom(dux_at(cm, iy, iz), dux_at(c1, iy, iz), dux_at(c2, iy, iz),
                                       dux_at(c3, iy, iz), tx);
                }
                out.u.at(i1, iy, iz) = u;
                out.ut.at(i1, iy, iz) = b.gamma * (b.v * dudx + dudt);
            }
    }
    return out;
}

double boosted_overlap(SpectralTransform& tf, const SpaceTimeHistory& history, const Boost& b,
                       const ScalarField& m, double t_prime, double mask_rel) {
    const BoxGrid& grid = history.grid;
    if (m.grid() != grid) throw std::invalid_argument("boosted_overlap: grid mismatch");
    const int n = grid.n();
    // at v = 0 the events do not fan out in time, so the full overlap is free
    const double thresh = b.v == 0.0 ? 0.0 : mask_rel * m.max_abs();
    HistorySampler sampler(tf, history);

    double acc = 0.0;
    for (int i1 = 0; i1 < n; ++i1) {
        // skip planes with no mass in the mask
        bool any = false;
        for (int iz = 0; iz < n && !any; ++iz)
            for (int iy = 0; iy < n; ++iy)
                if (std::abs(m.at(i1, iy, iz)) >= thresh) {
                    any = true;
                    break;
                }
        if (!any) continue;

        const double x1p = grid.coord(i1);
        const double t_event = b.gamma * (t_prime + b.v * x1p);
        const double x1_event = b.gamma * (x1p + b.v * t_prime);
        auto br = sampler.bracket(t_event);
        const auto w = hermite(br.th, sampler.step());
        const bool exact_t = (br.th == 0.0);

        double s = (grid.wrap(x1_event) + 0.5 * grid.length()) / grid.spacing();
        double fl = std::floor(s);
        double tx = s - fl;
        int c1 = grid.wrap_index(int(fl));
        int cm = (c1 + n - 1) % n, c2 = (c1 + 1) % n, c3 = (c1 + 2) % n;

        const auto& ua = sampler.snap(br.k0).u;
        const auto& va = sampler.snap(br.k0).ut;
        const WaveState& sb = sampler.snap(std::min(br.k0 + 1, history.snapshots.size() - 1));
        const auto& ub = sb.u;
        const auto& vb = sb.ut;
        auto u_at = [&](int ix, int iy, int iz) {
            if (exact_t) return ua.at(ix, iy, iz);
            return w.h00 * ua.at(ix, iy, iz) + w.h10 * va.at(ix, iy, iz) +
                   w.h01 * ub.at(ix, iy, iz) + w.h11 * vb.at(ix, iy, iz);
        };

        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy) {
                const double mm = m.at(i1, iy, iz);
                if (std::abs(mm) < thresh) continue;
                const double u = (tx == 0.0)
                                     ? u_at(c1, iy, iz)
                                     : catmull_rom(u_at(cm, iy, iz), u_at(c1, iy, iz),
                                                   u_at(c2, iy, iz), u_at(c3, iy, iz), tx);
                acc += mm * u;
            }
    }
    return acc * grid.cell_volume();
}

SlantedSliceEnergy slanted_energy(SpectralTransform& tf, const SpaceTimeHistory& history, double mu) {
    const BoxGrid& grid = history.grid;
    if (std::abs(mu) >= 1.0) throw std::invalid_argument("slanted_energy: |mu| must stay below 1");
    const int n = grid.n();
    HistorySampler sampler(tf, history);

    // per-snapshot gradient caches (u and ut), plane sweep is monotone in t
    std::map<std::size_t, std::array<ScalarField, 3>> gu, gut;
    auto grad_of = [&](std::map<std::size_t, std::array<ScalarField, 3>>& cache, std::size_t k,
                       bool of_ut) -> const std::array<ScalarField, 3>& {
        auto it = cache.find(k);
        if (it == cache.end()) {
            std::array<ScalarField, 3> g{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
            tf.gradient(of_ut ? history.snapshots[k].ut : history.snapshots[k].u, g);
            it = cache.emplace(k, std::move(g)).first;
            while (!cache.empty() && cache.begin()->first + 3 < k) cache.erase(cache.begin());
        }
        return it->second;
    };

    double e1 = 0.0, e2 = 0.0;
    for (int i1 = 0; i1 < n; ++i1) {
        const double t_event = mu * grid.coord(i1);
        auto br = sampler.bracket(t_event);
        const auto w = hermite(br.th, sampler.step());
        const bool exact_t = (br.th == 0.0);
        const auto& ga = grad_of(gu, br.k0, false);
        const auto& ua = sampler.snap(br.k0).u;
        const auto& va = sampler.snap(br.k0).ut;

        if (exact_t) {
            for (int iz = 0; iz < n; ++iz)
                for (int iy = 0; iy < n; ++iy) {
                    for (int d = 0; d < 3; ++d) {
                        const double g = ga[d].at(i1, iy, iz);
                        e1 += g * g;
                    }
                    const double vt = va.at(i1, iy, iz);
                    e2 += vt * vt;
                }
            continue;
        }
        const auto& gta = grad_of(gut, br.k0, true);
        const auto& gb = grad_of(gu, br.k0 + 1, false);
        const auto& gtb = grad_of(gut, br.k0 + 1, true);
        const auto& ub = sampler.snap(br.k0 + 1).u;
        const auto& vb = sampler.snap(br.k0 + 1).ut;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy) {
                for (int d = 0; d < 3; ++d) {
                    const double g = w.h00 * ga[d].at(i1, iy, iz) + w.h10 * gta[d].at(i1, iy, iz) +
                                     w.h01 * gb[d].at(i1, iy, iz) + w.h11 * gtb[d].at(i1, iy, iz);
                    e1 += g * g;
                }
                const double vt = w.d00 * ua.at(i1, iy, iz) + w.d10 * va.at(i1, iy, iz) +
                                  w.d01 * ub.at(i1, iy, iz) + w.d11 * vb.at(i1, iy, iz);
                e2 += vt * vt;
            }
    }
    e1 *= grid.cell_volume();
    e2 *= grid.cell_volume();
    return {mu, e1, e2, e1 + (1.0 - 0.5 * mu * mu) * e2};
}

std::vector<ComparabilityRow> comparability_report(SpectralTransform& tf,
                                                   const SpaceTimeHistory& history,
                                                   const std::vector<double>& mus, double c_star) {
    SlantedSliceEnergy flat = slanted_energy(tf, history, 0.0);
    const double base = flat.E1 + flat.E2;
    std::vector<ComparabilityRow> rows;
    for (double mu : mus) {
        ComparabilityRow row;
        row.mu = mu;
        if (base == 0.0) {
            row.degenerate = true;
            row.ratio = 1.0;
            rows.push_back(row);
            continue;
        }
        SlantedSliceEnergy e = mu == 0.0 ? flat : slanted_energy(tf, history, mu);
        row.E1 = e.E1;
        row.E2 = e.E2;
        row.E3 = e.E3;
        row.ratio = (e.E1 + e.E2) / base;
        row.flagged = row.ratio < 1.0 / c_star || row.ratio > c_star;
        rows.push_back(row);
    }
    return rows;
}

namespace {

bool series_certified(const std::vector<double>& t, const std::vector<double>& s) {
    if (t.empty()) return true;
    double m = 0.0;
    for (double v : s) m = std::max(m, v);
    if (m == 0.0) return true;
    const double cut = t.back() - 0.25 * (t.back() - t.front());
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= cut && s[i] > 0.1 * m) return false;
    return true;
}

}  // namespace

double mask_extent_x1(const ScalarField& m, double mask_rel) {
    const BoxGrid& grid = m.grid();
    const double thresh = mask_rel * m.max_abs();
    const int n = grid.n();
    double ext = 0.0;
    for (int i1 = 0; i1 < n; ++i1)
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                if (std::abs(m.at(i1, iy, iz)) >= thresh)
                    ext = std::max(ext, std::abs(grid.coord(i1)));
    return ext + 2.0 * grid.spacing();
}

ProjectionDecay track_projection_decay(SpectralTransform& tf, const SpaceTimeHistory& history,
                                       const BoundStateSet& bs1, const BoundStateSet& bs2_compressed,
                                       const Boost& b) {
    ProjectionDecay out;
    for (const auto& s : history.snapshots) {
        if (s.time < -1e-12) continue;
        double acc = 0.0;
        for (const auto& st : bs1.states) {
            const double a = inner(s.u, st.w);
            acc += a * a;
        }
        out.t.push_back(s.time);
        out.p1.push_back(std::sqrt(acc));
    }

    if (!bs2_compressed.empty()) {
        double x1_ext = 0.0;
        for (const auto& st : bs2_compressed.states)
            x1_ext = std::max(x1_ext, mask_extent_x1(st.w));
        const double tp_max = history.t_max() / b.gamma - std::abs(b.v) * x1_ext;
        const double tp_min =
            std::max(0.0, history.t_min() / b.gamma + std::abs(b.v) * x1_ext);
        if (tp_max <= tp_min)
            throw std::runtime_error(
                "track_projection_decay: boosted slice outside stored history");
        const double step = history.snapshot_dt();
        for (double tp = tp_min; tp <= tp_max + 1e-12; tp += step) {
            double acc = 0.0;
            for (const auto& st : bs2_compressed.states) {
                const double a = boosted_overlap(tf, history, b, st.w, tp);
                acc += a * a;
            }
            out.t_prime.push_back(tp);
            out.p2.push_back(std::sqrt(acc));
        }
    }

    out.certified =
        series_certified(out.t, out.p1) && series_certified(out.t_prime, out.p2);
    return out;
}

}  // namespace wavecharge
