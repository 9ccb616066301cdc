#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wavecharge/norms.hpp"

using namespace wavecharge;

namespace {

// hand-assembled history with uniformly spaced snapshots
SpaceTimeHistory manual_history(const BoxGrid& g, const std::vector<ScalarField>& fields, double dt) {
    SpaceTimeHistory h(g);
    for (std::size_t k = 0; k < fields.size(); ++k) {
        WaveState s(g);
        s.u = fields[k];
        s.time = dt * double(k);
        h.snapshots.push_back(std::move(s));
    }
    h.config.dt = dt;
    h.config.snapshot_stride = 1;
    h.config.t_max = dt * double(fields.size() - 1);
    return h;
}

}  // namespace

TEST_SUITE_BEGIN("norms");

TEST_CASE("mixed norm basics") {
    BoxGrid g(16, 8.0);
    SpectralTransform tf(g);

    SUBCASE("zero history evaluates to zero") {
        EvolutionConfig cfg;
        cfg.t_max = 1.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        SpaceTimeHistory hist = evolve(tf, cfg, WaveState(g));
        MixedNormSpec spec;
        spec.p = 8;
        spec.q = 8;
        spec.horizon = 1.0;
        CHECK(mixed_norm(hist, spec).value == 0.0);
    }

    SUBCASE("constant field on the diagonal admissible pair (T B)^{1/8}") {
        // u = 1, ut = 0 is a fixed point of the free flow (k = 0 mode)
        ScalarField one(g);
        for (double& v : one.values()) v = 1.0;
        EvolutionConfig cfg;
        cfg.t_max = 2.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        WaveState init(g);
        init.u = one;
        SpaceTimeHistory hist = evolve(tf, cfg, init);
        MixedNormSpec spec;
        spec.p = 8;
        spec.q = 8;
        spec.horizon = 2.0;
        const double B = g.length() * g.length() * g.length();
        CHECK(mixed_norm(hist, spec).value ==
              doctest::Approx(std::pow(2.0 * B, 1.0 / 8.0)).epsilon(1e-12));
    }

    SUBCASE("p = q equals the flat space-time sum, either nesting order") {
        EvolutionConfig cfg;
        cfg.t_max = 1.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        WaveState init(g);
        init.u = oracles::gaussian_field(g, 1.0, 1.0);
        init.ut = oracles::random_field(g, 8, 0.2);
        SpaceTimeHistory hist = evolve(tf, cfg, init);

        MixedNormSpec spec;
        spec.p = 4;
        spec.q = 4;
        spec.horizon = 1.0;
        const double by_time = mixed_norm(hist, spec).value;
        spec.outer = OuterVariable::space;
        const double by_space = mixed_norm(hist, spec).value;

        // flat quadrature with the same trapezoid-in-time weights
        double flat = 0.0;
        for (std::size_t k = 0; k < hist.snapshots.size(); ++k) {
            double w = hist.snapshot_dt();
            if (k == 0 || k + 1 == hist.snapshots.size()) w *= 0.5;
            for (double v : hist.snapshots[k].u.values())
                flat += w * g.cell_volume() * std::pow(std::abs(v), 4.0);
        }
        flat = std::pow(flat, 0.25);
        CHECK(by_time == doctest::Approx(flat).epsilon(1e-12));
        CHECK(by_space == doctest::Approx(flat).epsilon(1e-12));
    }

    SUBCASE("monotone in the horizon") {
        EvolutionConfig cfg;
        cfg.t_max = 2.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        WaveState init(g);
        init.ut = oracles::gaussian_field(g, 1.0, 1.0);
        SpaceTimeHistory hist = evolve(tf, cfg, init);
        MixedNormSpec spec;
        spec.p = 2;
        spec.q = 6;
        spec.horizon = 1.0;
        const double short_h = mixed_norm(hist, spec).value;
        spec.horizon = 2.0;
        CHECK(mixed_norm(hist, spec).value >= short_h);
    }
}

TEST_CASE("norm homogeneity and triangle inequality on random histories") {
    BoxGrid g(16, 8.0);
    std::vector<ScalarField> fa, fb, fsum;
    for (int k = 0; k < 5; ++k) {
        fa.push_back(oracles::random_field(g, 300 + k));
        fb.push_back(oracles::random_field(g, 400 + k));
        ScalarField s = fa.back();
        s += fb.back();
        fsum.push_back(std::move(s));
    }
    SpaceTimeHistory ha = manual_history(g, fa, 0.25);
    SpaceTimeHistory hb = manual_history(g, fb, 0.25);
    SpaceTimeHistory hs = manual_history(g, fsum, 0.25);

    MixedNormSpec spec;
    spec.p = 3;
    spec.q = 5;
    spec.horizon = 1.0;
    const double na = mixed_norm(ha, spec).value;
    const double nb = mixed_norm(hb, spec).value;
    const double ns = mixed_norm(hs, spec).value;
    CHECK(ns <= na + nb + 1e-12 * (na + nb));

    std::vector<ScalarField> fscaled;
    for (const auto& f : fa) {
        ScalarField s = f;
        s *= -2.5;
        fscaled.push_back(std::move(s));
    }
    SpaceTimeHistory hscaled = manual_history(g, fscaled, 0.25);
    CHECK(mixed_norm(hscaled, spec).value == doctest::Approx(2.5 * na).epsilon(1e-12));
}

TEST_CASE("reversed endpoint") {
    BoxGrid g(16, 8.0);
    SpectralTransform tf(g);

    SUBCASE("zero traces give zero") {
        EvolutionConfig cfg;
        cfg.t_max = 1.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        cfg.probes = {{0, 0, 0}};
        cfg.trace_velocities = {{0, 0, 0}};
        SpaceTimeHistory hist = evolve(tf, cfg, WaveState(g));
        CHECK(reversed_endpoint(hist, {0, 0, 0}, 1.0).value == 0.0);
        CHECK_THROWS_AS((void)reversed_endpoint(hist, {0.5, 0, 0}, 1.0), std::invalid_argument);
    }

    SUBCASE("synthetic exponential trace integrates to one half") {
        SpaceTimeHistory hist(g);
        hist.config.dt = 1e-3;
        hist.config.snapshot_stride = 10000;
        hist.config.t_max = 20.0;
        // two empty snapshots bracket the horizon for the cell estimator
        WaveState s0(g), s1(g);
        s1.time = 20.0;
        hist.snapshots = {s0, s1};
        TraceSeries tr;
        tr.probe_id = 0;
        tr.velocity = {0, 0, 0};
        for (long k = 0; k <= 20000; ++k) {
            tr.t.push_back(1e-3 * double(k));
            tr.u.push_back(std::exp(-1e-3 * double(k)));
            tr.ut.push_back(0.0);
        }
        hist.traces.push_back(std::move(tr));
        const double value = reversed_endpoint(hist, {0, 0, 0}, 20.0).value;
        CHECK(value == doctest::Approx(0.5).epsilon(1e-6));
    }

    SUBCASE("snapshot re-quadrature agrees with the trace value") {
        EvolutionConfig cfg;
        cfg.t_max = 2.0;
        cfg.dt = 0.0625;
        cfg.snapshot_stride = 2;
        cfg.probes = {{0, 0, 0}, {1.0, 0.5, 0}, {-0.5, 0, 1.0}};
        cfg.trace_velocities = {{0.4, 0, 0}};
        WaveState init(g);
        init.ut = oracles::gaussian_field(g, 1.0, 1.0);
        SpaceTimeHistory hist = evolve(tf, cfg, init);

        for (const auto& tr : hist.traces) {
            // trace-based integral at the step cadence
            double fine = 0.0;
            for (std::size_t k = 0; k < tr.t.size(); ++k) {
                double w = cfg.dt;
                if (k == 0 || k + 1 == tr.t.size()) w *= 0.5;
                fine += w * tr.u[k] * tr.u[k];
            }
            // independent re-integration from the stored snapshots
            double coarse = 0.0;
            const double sd = hist.snapshot_dt();
            for (std::size_t k = 0; k < hist.snapshots.size(); ++k) {
                const WaveState& s = hist.snapshots[k];
                double w = sd;
                if (k == 0 || k + 1 == hist.snapshots.size()) w *= 0.5;
                const double u = s.u.interpolate(tr.probe + s.time * tr.velocity);
                coarse += w * u * u;
            }
            CHECK(coarse == doctest::Approx(fine).epsilon(2e-2));
        }
    }
}

TEST_CASE("weighted local decay") {
    BoxGrid g(16, 8.0);
    SpectralTransform tf(g);

    SUBCASE("zero field gives zero") {
        EvolutionConfig cfg;
        cfg.t_max = 1.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        SpaceTimeHistory hist = evolve(tf, cfg, WaveState(g));
        CHECK(weighted_local_decay(hist, 4.0, {0, 0, 0}, 1.0).value == 0.0);
    }

    SUBCASE("separable constant field matches the direct sum exactly") {
        ScalarField one(g);
        for (double& v : one.values()) v = 1.0;
        EvolutionConfig cfg;
        cfg.t_max = 2.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        WaveState init(g);
        init.u = one;
        SpaceTimeHistory hist = evolve(tf, cfg, init);
        NormReport rep = weighted_local_decay(hist, 4.0, {0, 0, 0}, 2.0);
        double direct = 0.0;
        for (int iz = 0; iz < g.n(); ++iz)
            for (int iy = 0; iy < g.n(); ++iy)
                for (int ix = 0; ix < g.n(); ++ix) {
                    const Vec3 x = g.point(ix, iy, iz);
                    direct += std::pow(1.0 + dot(x, x), -2.0);
                }
        direct *= g.cell_volume() * 2.0;  // times the horizon
        CHECK(rep.value == doctest::Approx(direct).epsilon(1e-12));
    }

    SUBCASE("Hoelder chain slack is nonnegative on a charge-transfer run") {
        EvolutionConfig cfg;
        cfg.potentials = {PotentialSpec::gaussian_well(2.0, {1, 1, 1}, {-1.5, 0, 0}),
                          PotentialSpec::gaussian_well(1.5, {1, 1, 1}, {1.0, 0, 0}, {0.5, 0, 0})};
        cfg.t_max = 2.0;
        cfg.dt = 0.125;
        cfg.snapshot_stride = 2;
        WaveState init(g);
        init.ut = oracles::gaussian_field(g, 1.0, 1.0);
        SpaceTimeHistory hist = evolve(tf, cfg, init);
        for (const Vec3 mu : {Vec3{0, 0, 0}, Vec3{0.5, 0, 0}}) {
            NormReport rep = weighted_local_decay(hist, 3.5, mu, 2.0);
            CHECK(rep.details.at("slack") >= 0.0);
            CHECK(rep.value <= rep.details.at("holder_bound") * (1.0 + 1e-15));
        }
        CHECK_THROWS_AS((void)weighted_local_decay(hist, 2.0, {0, 0, 0}, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("lorentz quasi-norm") {
    BoxGrid g(16, 8.0);

    SUBCASE("indicator closed form (3/2) V^{2/3}") {
        ScalarField f(g);
        // a 5x4x3 block of ones
        for (int iz = 0; iz < 3; ++iz)
            for (int iy = 0; iy < 4; ++iy)
                for (int ix = 0; ix < 5; ++ix) f.at(ix, iy, iz) = 1.0;
        const double V = 60.0 * g.cell_volume();
        CHECK(lorentz_quasi_norm(f, 1.5, 1.0) ==
              doctest::Approx(1.5 * std::pow(V, 2.0 / 3.0)).epsilon(1e-12));
    }

    SUBCASE("p = q recovers the Lebesgue norm") {
        ScalarField f = oracles::random_field(g, 19);
        double l2 = l2_norm(f);
        CHECK(lorentz_quasi_norm(f, 2.0, 2.0) == doctest::Approx(l2).epsilon(1e-12));
        double l3 = 0.0;
        for (double v : f.values()) l3 += std::pow(std::abs(v), 3.0);
        l3 = std::pow(l3 * g.cell_volume(), 1.0 / 3.0);
        CHECK(lorentz_quasi_norm(f, 3.0, 3.0) == doctest::Approx(l3).epsilon(1e-12));
    }

    SUBCASE("pointwise domination is monotone") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int rep = 0; rep < 5; ++rep) {
            ScalarField f(g), h(g);
            for (std::size_t i = 0; i < g.size(); ++i) {
                h[i] = unit(rng);
                f[i] = h[i] * unit(rng);
            }
            CHECK(lorentz_quasi_norm(f, 1.5, 1.0) <= lorentz_quasi_norm(h, 1.5, 1.0));
            CHECK(lorentz_quasi_norm(f, 6.0, 2.0) <= lorentz_quasi_norm(h, 6.0, 2.0));
        }
    }

    SUBCASE("permutation invariance is exact") {
        ScalarField f = oracles::random_field(g, 91);
        std::vector<double> shuffled = f.values();
        std::mt19937_64 rng(17);
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(lorentz_quasi_norm(f.values(), g.cell_volume(), 1.5, 1.0) ==
              lorentz_quasi_norm(shuffled, g.cell_volume(), 1.5, 1.0));
    }

    SUBCASE("absolute homogeneity") {
        ScalarField f = oracles::random_field(g, 55);
        const double base = lorentz_quasi_norm(f, 2.5, 1.5);
        f *= -3.25;
        CHECK(lorentz_quasi_norm(f, 2.5, 1.5) == doctest::Approx(3.25 * base).epsilon(1e-12));
    }

    SUBCASE("Kato-type smoothing constant against direct summation") {
        // sup_y sum |h(x)| / |x-y| <= C ||h||_{3/2,1}; C measured once on this
        // grid family and frozen as a regression guard
        ScalarField h = oracles::random_field(g, 7);
        for (double& v : h.values()) v = std::abs(v);
        double sup = 0.0;
        for (const Vec3 y : {Vec3{0, 0, 0}, Vec3{1.3, -0.7, 0.2}, Vec3{-2.0, 2.0, -2.0}}) {
            double acc = 0.0;
            for (int iz = 0; iz < g.n(); ++iz)
                for (int iy = 0; iy < g.n(); ++iy)
                    for (int ix = 0; ix < g.n(); ++ix) {
                        const double r = norm(g.wrap(g.point(ix, iy, iz) - y));
                        if (r > 0.0) acc += h.at(ix, iy, iz) / r;
                    }
            sup = std::max(sup, acc * g.cell_volume());
        }
        const double lorentz = lorentz_quasi_norm(h, 1.5, 1.0);
        CHECK(sup <= 1.3 * lorentz);  // frozen: measured ratio 1.17 on this seed family
    }
}

TEST_CASE("radial-angular norm") {
    BoxGrid g(16, 8.0);

    SUBCASE("zero field") {
        SpaceTimeHistory hist =
            manual_history(g, {ScalarField(g), ScalarField(g), ScalarField(g)}, 0.5);
        CHECK(radial_angular_norm(hist, {0, 0, 0}, 4.0, 1.0).value == 0.0);
    }

    SUBCASE("separable exponential decay in time") {
        std::vector<ScalarField> fields;
        const double dt = 0.05, T = 3.0;
        for (long k = 0; k <= std::lround(T / dt); ++k) {
            ScalarField f(g);
            for (double& v : f.values()) v = std::exp(-dt * double(k));
            fields.push_back(std::move(f));
        }
        SpaceTimeHistory hist = manual_history(g, fields, dt);
        const double p = 4.0;
        const double time_l2 = std::sqrt(0.5 * (1.0 - std::exp(-2.0 * T)));
        const double expect = std::pow(4.0 * M_PI, 1.0 / p) * time_l2;
        CHECK(radial_angular_norm(hist, {0, 0, 0}, p, T).value ==
              doctest::Approx(expect).epsilon(1e-3));
    }

    SUBCASE("radial data: p-independence after area normalization") {
        ScalarField bump = oracles::gaussian_field(g, 1.0, 1.1);
        SpaceTimeHistory hist = manual_history(g, {bump, bump, bump}, 0.5);
        const double v2 = radial_angular_norm(hist, {0, 0, 0}, 2.0, 1.0).value /
                          std::pow(4.0 * M_PI, 0.5);
        const double v6 = radial_angular_norm(hist, {0, 0, 0}, 6.0, 1.0).value /
                          std::pow(4.0 * M_PI, 1.0 / 6.0);
        CHECK(v2 == doctest::Approx(v6).epsilon(1e-3));
    }
}

TEST_CASE("sup-in-time reversed norms") {
    BoxGrid g(16, 8.0);

    SUBCASE("zero history") {
        SpaceTimeHistory hist = manual_history(g, {ScalarField(g), ScalarField(g)}, 0.5);
        CHECK(sup_time_reversed_norm(hist, 6.0, 2.0).value == 0.0);
    }

    SUBCASE("stationary field equals its Lorentz norm") {
        ScalarField f = oracles::gaussian_field(g, 2.0, 1.3, {0.5, -0.5, 0});
        SpaceTimeHistory hist = manual_history(g, {f, f, f, f}, 0.25);
        CHECK(sup_time_reversed_norm(hist, 6.0, 2.0).value ==
              doctest::Approx(lorentz_quasi_norm(f, 6.0, 2.0)).epsilon(1e-14));
        // weighted variant applies <x>^{-3/2} before rearranging
        ScalarField weighted = f;
        for (int iz = 0; iz < g.n(); ++iz)
            for (int iy = 0; iy < g.n(); ++iy)
                for (int ix = 0; ix < g.n(); ++ix) {
                    const Vec3 x = g.point(ix, iy, iz);
                    weighted.at(ix, iy, iz) *= std::pow(1.0 + dot(x, x), -0.75);
                }
        CHECK(sup_time_reversed_norm(hist, 3.0, 2.0, 1.5).value ==
              doctest::Approx(lorentz_quasi_norm(weighted, 3.0, 2.0)).epsilon(1e-14));
    }
}

TEST_CASE("interaction space norm") {
    BoxGrid g(16, 8.0);

    SUBCASE("zero forcing") {
        std::vector<ScalarField> F(3, ScalarField(g));
        CHECK(interaction_space_norm(g, F, 0.1).value == 0.0);
    }

    SUBCASE("separable forcing factorizes the slab norm") {
        ScalarField shape = oracles::gaussian_field(g, 1.0, 1.0, {0.4, 0, -0.3});
        const double dt = 0.1;
        const int m = 11;
        std::vector<ScalarField> F;
        std::vector<double> hvals;
        for (int k = 0; k < m; ++k) {
            const double hv = std::sin(0.7 * k) + 1.2;
            hvals.push_back(hv);
            ScalarField f = shape;
            f *= hv;
            F.push_back(std::move(f));
        }
        InteractionSpaceNorm isn = interaction_space_norm(g, F, dt);

        double h_l2 = 0.0;
        for (int k = 0; k < m; ++k) {
            double w = dt;
            if (k == 0 || k + 1 == m) w *= 0.5;
            h_l2 += w * hvals[std::size_t(k)] * hvals[std::size_t(k)];
        }
        h_l2 = std::sqrt(h_l2);

        // || g ||_{L^1_{x1} L^{2,1}_{perp}} computed independently
        const double area = g.spacing() * g.spacing();
        double slab = 0.0;
        std::vector<double> plane(std::size_t(g.n()) * g.n());
        for (int ix = 0; ix < g.n(); ++ix) {
            for (int iz = 0; iz < g.n(); ++iz)
                for (int iy = 0; iy < g.n(); ++iy)
                    plane[std::size_t(iy) + std::size_t(g.n()) * iz] =
                        std::abs(shape.at(ix, iy, iz));
            slab += lorentz_quasi_norm(plane, area, 2.0, 1.0);
        }
        slab *= g.spacing();
        CHECK(isn.slab_1_21 == doctest::Approx(h_l2 * slab).epsilon(1e-12));
        CHECK(isn.value == std::max({isn.lorentz_3_2_1, isn.slab_1_21, isn.l2_tx}));
    }

    SUBCASE("Lorentz L^{3/2,1} dominates plain L^{3/2} on the box") {
        std::vector<ScalarField> F;
        for (int k = 0; k < 4; ++k) F.push_back(oracles::random_field(g, 600 + k));
        InteractionSpaceNorm isn = interaction_space_norm(g, F, 0.25);
        // rebuild the per-cell time-L2 profile
        ScalarField G(g);
        for (std::size_t k = 0; k < F.size(); ++k) {
            double w = 0.25;
            if (k == 0 || k + 1 == F.size()) w *= 0.5;
            for (std::size_t i = 0; i < g.size(); ++i) G[i] += w * F[k][i] * F[k][i];
        }
        for (double& v : G.values()) v = std::sqrt(v);
        double l32 = 0.0;
        for (double v : G.values()) l32 += std::pow(v, 1.5);
        l32 = std::pow(l32 * g.cell_volume(), 2.0 / 3.0);
        CHECK(isn.lorentz_3_2_1 >= l32 * (1.0 - 1e-12));
    }
}

TEST_CASE("truncated Duhamel windows") {
    BoxGrid g(16, 8.0);
    SpectralTransform tf(g);

    SUBCASE("zero forcing gives zero at every A") {
        TruncatedDuhamelParams params;
        params.forcing.amplitude = 0.0;
        params.T = 2.0;
        params.A_values = {0.5, 1.0};
        params.t_samples = 4;
        TruncatedDuhamelReport rep = truncated_duhamel(tf, params);
        for (double v : rep.value) CHECK(v == 0.0);
        for (double v : rep.value_slanted) CHECK(v == 0.0);
    }

    SUBCASE("window guards") {
        TruncatedDuhamelParams params;
        params.T = 2.0;
        params.A_values = {1.5};  // beyond T/2
        CHECK_THROWS_AS((void)truncated_duhamel(tf, params), std::invalid_argument);
    }

    SUBCASE("free case decays when the window widens") {
        TruncatedDuhamelParams params;
        params.forcing.amplitude = 1.0;
        params.forcing.width = {0.8, 0.8, 0.8};
        params.forcing.t_center = 0.4;
        params.forcing.t_sigma = 0.25;
        params.T = 3.0;
        params.A_values = {0.5, 1.0};
        params.velocity = {0.4, 0, 0};
        TruncatedDuhamelReport rep = truncated_duhamel(tf, params);
        REQUIRE(rep.value.size() == 2);
        CHECK(rep.value[1] < rep.value[0]);
        CHECK(rep.fitted_power < 0.0);
    }
}

TEST_SUITE_END();
