#include <catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "acfd/presets.hpp"
#include "acfd/stepper.hpp"
#include "test_helpers.hpp"

using namespace acfd;

namespace {

ScalarField<double> uniform_field(const GridSpec& s, double v) {
    return make_field(s, std::vector<double>(static_cast<std::size_t>(s.interior_cells()), v));
}

} // namespace

TEST_CASE("stencil kernel weights sum to exactly zero", "[stepper]") {
    const GridSpec s2 = GridSpec::make_2d(0, 1, 0, 1, 50, 50);
    const GridSpec s3 = GridSpec::make_3d(0, 1, 0, 1, 0, 1, 20, 20, 20);

    // the center weight is the exact negation of 2*dim neighbor weights, so
    // the weight values cancel identically (stated without a+b*c so FP
    // contraction cannot fuse the comparison)
    const auto k2 = StencilKernel<double>::make(default_params(s2, 10));
    const double n4 = 4.0 * k2.neighbor;
    CHECK(k2.center == -n4);
    CHECK(k2.neighbor == default_params(s2, 10).dt / (s2.h() * s2.h()));

    const auto k3 = StencilKernel<double>::make(default_params(s3, 12));
    const double n6 = 6.0 * k3.neighbor;
    CHECK(k3.center == -n6);

    const auto k2f = StencilKernel<float>::make(default_params(s2, 10));
    const float n4f = 4.0f * k2f.neighbor;
    CHECK(k2f.center == -n4f);
    const auto k3f = StencilKernel<float>::make(default_params(s3, 12));
    const float n6f = 6.0f * k3f.neighbor;
    CHECK(k3f.center == -n6f);
}

TEST_CASE("reference Laplacian: constants, linear ramps, quadratics", "[stepper]") {
    SECTION("constant field gives zero") {
        // 2D: 4c is exact, so the difference cancels identically
        const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 8, 8);
        const ScalarField<double> f = uniform_field(s, 0.785398);
        for (double v : laplacian_ref(f)) CHECK(v == 0.0);
        // 3D: 6c rounds once, leaving at most an ulp-sized residual over h^2
        const GridSpec s3 = GridSpec::make_3d(0, 1, 0, 1, 0, 1, 6, 6, 6);
        ScalarField<double> f3(s3);
        f3.for_each_interior([&](index_t ix, index_t iy, index_t iz) { f3(ix, iy, iz) = -0.31; });
        fill_ghosts(f3);
        for (double v : laplacian_ref(f3)) CHECK(std::abs(v) <= 1e-13);
    }

    SECTION("linear ramp bends only at the replicated boundary") {
        const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 10, 10);
        ScalarField<double> f(s);
        f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
            f(ix, iy, iz) = s.ext_center(0, ix);
        });
        fill_ghosts(f);
        const std::vector<double> lap = laplacian_ref(f);
        const double inv_h = 1.0 / s.h();
        for (index_t ix = 0; ix < 10; ++ix)
            for (index_t iy = 0; iy < 10; ++iy) {
                const double v = lap[static_cast<std::size_t>(ix * 10 + iy)];
                // replication flattens the ramp outside: the low column sees
                // +(x1-x0)/h^2 = 1/h, the high column -(x9-x8)/h^2 = -1/h
                if (ix == 0) CHECK(v == Catch::Approx(inv_h).margin(1e-8));
                else if (ix == 9) CHECK(v == Catch::Approx(-inv_h).margin(1e-8));
                else CHECK(v == Catch::Approx(0.0).margin(1e-8));
            }
    }

    SECTION("quadratic is differenced exactly") {
        const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 64, 64);
        ScalarField<double> f(s);
        f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
            const double x = s.ext_center(0, ix), y = s.ext_center(1, iy);
            f(ix, iy, iz) = x * x + y * y;
        });
        fill_ghosts(f);
        const std::vector<double> lap = laplacian_ref(f);
        for (index_t ix = 1; ix < 63; ++ix)
            for (index_t iy = 1; iy < 63; ++iy)
                CHECK(lap[static_cast<std::size_t>(ix * 64 + iy)] ==
                      Catch::Approx(4.0).margin(1e-9));
    }
}

TEST_CASE("uniform equilibria are exact fixed points of both backends", "[stepper]") {
    const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 16, 16);
    const SchemeParams p = default_params(s, 10);
    const auto k = StencilKernel<double>::make(p);

    for (double v : {1.0, 0.0, -1.0}) {
        ScalarField<double> f = uniform_field(s, v);
        const ScalarField<double> r = step_reference(f, p);
        const ScalarField<double> st = step_stencil(f, p, k);
        r.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
            CHECK(r(ix, iy, iz) == v);
            CHECK(st(ix, iy, iz) == v);
        });
    }

    const GridSpec s3 = GridSpec::make_3d(0, 1, 0, 1, 0, 1, 8, 8, 8);
    const SchemeParams p3 = default_params(s3, 12);
    const auto k3 = StencilKernel<double>::make(p3);
    for (double v : {1.0, 0.0, -1.0}) {
        ScalarField<double> f3 =
            make_field(s3, std::vector<double>(static_cast<std::size_t>(s3.interior_cells()), v));
        const ScalarField<double> r3 = step_reference(f3, p3);
        const ScalarField<double> st3 = step_stencil(f3, p3, k3);
        r3.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
            CHECK(r3(ix, iy, iz) == v);
            CHECK(st3(ix, iy, iz) == v);
        });
    }
}

TEST_CASE("uniform 0.5 maps to 0.5 + 0.375 alpha", "[stepper]") {
    const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 8, 8);
    const SchemeParams p = default_params(s, 10);
    ScalarField<double> f = uniform_field(s, 0.5);
    const ScalarField<double> r = step_reference(f, p);
    const double want = 0.5 + 0.375 * p.alpha;
    r.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        CHECK(r(ix, iy, iz) == Catch::Approx(want).margin(1e-15));
    });
}

TEST_CASE("backend equivalence across shapes, grids and 100 steps", "[stepper]") {
    struct Case {
        GridSpec spec;
        int m;
        InitialCondition ic;
    };
    const std::vector<Case> cases = {
        {GridSpec::make_2d(0, 1, 0, 1, 32, 32), 10, CircleIc{0.25}},
        {GridSpec::make_2d(0, 1, 0, 1, 64, 64), 10, CircleIc{0.25}},
        {GridSpec::make_2d(0, 2, 0, 1, 64, 32), 10, DumbbellIc{0.2}},
        {GridSpec::make_2d(0, 1, 0, 1, 64, 64), 10, StarIc{}},
        {GridSpec::make_2d(0, 1, 0, 1, 64, 64), 10, TorusIc{0.4, 0.3}},
        {GridSpec::make_2d(0, 1, 0, 1, 32, 32), 5, MazeIc{}},
        {GridSpec::make_2d(0, 1, 0, 1, 64, 64), 10, RandomIc{0.1, 3}},
        {GridSpec::make_3d(0, 1, 0, 1, 0, 1, 16, 16, 16), 12, SphereIc{0.25}},
        {GridSpec::make_3d(0, 1, 0, 1, 0, 1, 32, 32, 32), 12, SphereIc{0.25}},
        {GridSpec::make_3d(0, 2, 0, 1, 0, 1, 32, 16, 16), 12, DumbbellIc{0.25}},
        {GridSpec::make_3d(-1, 1, -1, 1, -1, 1, 16, 16, 16), 12, StarIc{}},
        {GridSpec::make_3d(-1, 1, -1, 1, -1, 1, 16, 16, 16), 12, TorusIc{0.3, 0.3}},
        {GridSpec::make_3d(-1, 1, -1, 1, -1, 1, 32, 32, 32), 5, MazeIc{}},
        {GridSpec::make_3d(0, 1, 0, 1, 0, 1, 16, 16, 16), 12, RandomIc{0.1, 3}},
    };

    for (const auto& c : cases) {
        INFO("shape " << ic_name(c.ic) << " grid " << c.spec.n(0) << "^" << c.spec.dim());
        const SchemeParams p = default_params(c.spec, c.m);
        const auto k = StencilKernel<double>::make(p);
        StepBuffers<double> ref(apply_initial<double>(c.spec, p.eps, c.ic));
        StepBuffers<double> sten(ref.cur);
        StepBuffers<double> pad(ref.cur);
        double worst = 0.0;
        for (int step = 0; step < 100; ++step) {
            detail::step_reference_into(ref.cur, ref.next, p);
            detail::step_stencil_into(sten.cur, sten.next, p, k, 0);
            detail::step_padcopy_into(pad.cur, pad.next, p, k, 0);
            ref.swap();
            sten.swap();
            pad.swap();
            worst = std::max(worst, test::max_abs_interior_diff(ref.cur, sten.cur));
            // pad-then-convolve is the same arithmetic; it must agree bitwise
            REQUIRE(test::interior_bitwise_equal(sten.cur, pad.cur));
        }
        INFO("max per-step backend difference " << worst);
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("one stencil step matches the reference oracle on a tanh ridge", "[stepper]") {
    // 1D profile embedded in 2D: phi(x) = tanh((x-0.5)/(sqrt2 eps))
    const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 128, 128);
    const SchemeParams p = default_params(s, 10);
    ScalarField<double> f(s);
    f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        f(ix, iy, iz) = std::tanh((s.ext_center(0, ix) - 0.5) / (std::sqrt(2.0) * p.eps));
    });
    fill_ghosts(f);

    const ScalarField<double> ref = step_reference(f, p);
    ScalarField<double> in = f;
    const ScalarField<double> sten = step_stencil(in, p, StencilKernel<double>::make(p));

    CHECK(test::max_abs_interior_diff(ref, sten) <= 1e-13);

    // the profile is near-stationary: one step moves it by O(dt/eps^2 * h^2)
    double ref_change = 0.0;
    ref.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        ref_change = std::max(ref_change, std::abs(ref(ix, iy, iz) - f(ix, iy, iz)));
    });
    CHECK(ref_change <= 10.0 * p.alpha * p.h * p.h / (p.eps * p.eps));
    double sten_change = 0.0;
    sten.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        sten_change = std::max(sten_change, std::abs(sten(ix, iy, iz) - f(ix, iy, iz)));
    });
    CHECK(std::abs(sten_change - ref_change) <= 1e-13);
}

TEST_CASE("stencil output is bitwise identical for 1, 2 and many threads", "[stepper]") {
    const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 48, 48);
    const SchemeParams p = default_params(s, 10);
    const auto k = StencilKernel<double>::make(p);

    auto run_steps = [&](int threads) {
        StepBuffers<double> b(test::random_field(s, 11, 0.3));
        for (int i = 0; i < 10; ++i) {
            detail::step_stencil_into(b.cur, b.next, p, k, threads);
            b.swap();
        }
        return std::move(b.cur);
    };
    const ScalarField<double> one = run_steps(1);
    const ScalarField<double> two = run_steps(2);
    const ScalarField<double> many = run_steps(8);
    CHECK(test::interior_bitwise_equal(one, two));
    CHECK(test::interior_bitwise_equal(one, many));

    const GridSpec s3 = GridSpec::make_3d(0, 1, 0, 1, 0, 1, 20, 20, 20);
    const SchemeParams p3 = default_params(s3, 12);
    const auto k3 = StencilKernel<double>::make(p3);
    auto run3 = [&](int threads) {
        StepBuffers<double> b(test::random_field(s3, 12, 0.3));
        for (int i = 0; i < 5; ++i) {
            detail::step_stencil_into(b.cur, b.next, p3, k3, threads);
            b.swap();
        }
        return std::move(b.cur);
    };
    CHECK(test::interior_bitwise_equal(run3(1), run3(3)));
}

TEST_CASE("run drives diagnostics, timing and determinism", "[stepper]") {
    RunConfig cfg(GridSpec::make_2d(0, 1, 0, 1, 32, 32), 10, CircleIc{0.25}, 100);
    cfg.diag_stride = 10;
    cfg.radius_center = {{0.5, 0.5, 0.0}};
    cfg.radius_r0 = 0.25;

    const SimResult<double> res = run<double>(cfg);
    CHECK(res.report.n_steps == 100);
    CHECK(res.report.diagnostics.size() == 11); // steps 0,10,...,100
    CHECK(res.report.diagnostics.front().step == 0);
    CHECK(res.report.diagnostics.back().step == 100);
    CHECK(res.report.step_seconds > 0.0);
    CHECK(std::isfinite(res.report.diagnostics.back().radius));

    SECTION("a final partial stride still lands a diagnostics row") {
        RunConfig c2 = cfg;
        c2.n_steps = 105;
        CHECK(run<double>(c2).report.diagnostics.size() == 12);
    }

    SECTION("identical configs give bitwise-identical fields") {
        const SimResult<double> again = run<double>(cfg);
        CHECK(test::interior_bitwise_equal(res.field, again.field));
    }

    SECTION("zero steps are rejected") {
        RunConfig bad = cfg;
        bad.n_steps = 0;
        CHECK_THROWS_AS(run<double>(bad), config_error);
    }

    SECTION("strides and thread counts are validated") {
        RunConfig bad = cfg;
        bad.diag_stride = 0;
        CHECK_THROWS_AS(bad.validate(), config_error);
        bad = cfg;
        bad.err_stride = -1;
        CHECK_THROWS_AS(bad.validate(), config_error);
        bad = cfg;
        bad.snapshot_stride = -2;
        CHECK_THROWS_AS(bad.validate(), config_error);
        bad = cfg;
        bad.threads = -1;
        CHECK_THROWS_AS(bad.validate(), config_error);
        bad = cfg;
        bad.init = SphereIc{}; // 3D shape on a 2D grid
        CHECK_THROWS_AS(bad.validate(), config_error);
    }

    SECTION("set_seed keeps the random variant in sync") {
        RunConfig r(GridSpec::make_2d(0, 1, 0, 1, 16, 16), 10, RandomIc{0.1, 1}, 5);
        r.set_seed(123);
        CHECK(r.seed == 123);
        CHECK(std::get<RandomIc>(r.init).seed == 123);
    }
}

TEST_CASE("maximum principle holds along preset-style runs", "[stepper]") {
    for (auto&& [spec, m, ic] :
         {std::tuple{GridSpec::make_2d(0, 1, 0, 1, 64, 64), 10,
                     InitialCondition(CircleIc{0.25})},
          std::tuple{GridSpec::make_2d(0, 1, 0, 1, 32, 32), 5, InitialCondition(MazeIc{})},
          std::tuple{GridSpec::make_2d(0, 1, 0, 1, 64, 64), 10,
                     InitialCondition(RandomIc{0.1, 9})}}) {
        RunConfig cfg(spec, m, ic, 300);
        cfg.diag_stride = 25;
        const SimResult<double> res = run<double>(cfg);
        for (const Diagnostics& d : res.report.diagnostics) {
            CHECK(d.max <= 1.0 + 1e-12);
            CHECK(d.min >= -1.0 - 1e-12);
        }
    }
}

TEST_CASE("divergence is detected and names the first offending step", "[stepper]") {
    // m=1 makes alpha ~ 4.3: the cubic reaction map explodes from a large seed
    const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 16, 16);
    RunConfig cfg(s, 1, RandomIc{1.0, 4}, 400);
    cfg.params = params_with_dt(s, 1, s.h() * s.h() / 4.0);
    cfg.diag_stride = 10;
    try {
        run<double>(cfg);
        FAIL("expected divergence");
    } catch (const divergence_error& e) {
        CHECK(e.step() > 0);
        CHECK(e.flat_index() >= 0);
    }
}

TEST_CASE("dual runs accumulate the cross-backend error", "[stepper]") {
    RunConfig cfg(GridSpec::make_2d(0, 1, 0, 1, 32, 32), 10, RandomIc{0.1, 21}, 1);
    cfg.diag_stride = 1;

    SECTION("one step equals a direct comparison") {
        const DualResult<double, double> d = run_dual<double, double>(cfg);
        const ScalarField<double> f0 = apply_initial<double>(cfg.grid, cfg.params.eps, cfg.init);
        ScalarField<double> in = f0;
        const ScalarField<double> a = step_reference(f0, cfg.params);
        const ScalarField<double> b =
            step_stencil(in, cfg.params, StencilKernel<double>::make(cfg.params));
        CHECK(d.err == Catch::Approx(rms_diff(a, b)).margin(1e-18));
    }

    SECTION("identical backends give exactly zero error") {
        cfg.n_steps = 25;
        const DualResult<double, double> d =
            run_dual<double, double>(cfg, Backend::stencil, Backend::stencil);
        CHECK(d.err == 0.0);
    }

    SECTION("64-bit dual error stays tiny over a few hundred steps") {
        cfg.n_steps = 300;
        const DualResult<double, double> d = run_dual<double, double>(cfg);
        CHECK(d.err <= 1e-13);
        CHECK(d.a.report.step_seconds > 0.0);
        CHECK(d.b.report.step_seconds > 0.0);
    }

    SECTION("a 64-bit reference against a 32-bit stencil hits the f32 error floor") {
        RunConfig sep = scaled_config(preset("separation2d"), 2);
        sep.diag_stride = sep.n_steps;
        const DualResult<double, float> d = run_dual<double, float>(sep);
        // order-of-magnitude window around the known cross-runtime figure
        CHECK(d.err > 1.75e-8);
        CHECK(d.err < 1.75e-4);
    }
}

TEST_CASE("energy is non-increasing along both backends", "[stepper]") {
    for (Backend b : {Backend::reference, Backend::stencil}) {
        RunConfig cfg(GridSpec::make_2d(0, 1, 0, 1, 32, 32), 10, RandomIc{0.1, 17}, 250);
        cfg.backend = b;
        cfg.diag_stride = 1;
        const SimResult<double> res = run<double>(cfg);
        const auto& rows = res.report.diagnostics;
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(rows[i].energy <= rows[i - 1].energy * (1.0 + 1e-10) + 1e-300);
    }
}
