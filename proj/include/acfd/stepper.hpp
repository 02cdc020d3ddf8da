#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "acfd/analysis.hpp"
#include "acfd/errors.hpp"
#include "acfd/grid.hpp"
#include "acfd/run_config.hpp"

namespace acfd {

/// Cross-shaped filter with the time step folded in: each axis neighbor
/// carries dt/h^2 and the center -2*dim*(dt/h^2), so applying it yields
/// dt * lap_h(phi) and the weights sum to exactly zero.
template <typename Real>
struct StencilKernel {
    int dim = 2;
    Real neighbor = Real(0);
    Real center = Real(0);

    static StencilKernel make(const SchemeParams& p) {
        StencilKernel k;
        k.dim = p.dim;
        k.neighbor = static_cast<Real>(p.dt / (p.h * p.h));
        k.center = -static_cast<Real>(2 * p.dim) * k.neighbor;
        return k;
    }
};

/// Ping-pong pair: `cur` is read, `next` is written, then the two swap.
/// Never aliased; both share one GridSpec.
template <typename Real>
struct StepBuffers {
    explicit StepBuffers(ScalarField<Real> initial)
        : cur(std::move(initial)), next(cur.spec()) {}

    ScalarField<Real> cur;
    ScalarField<Real> next;

    void swap() { std::swap(cur, next); }
};

namespace detail {

// The pointwise update is written phi + (alpha*(phi - phi^3) + diffusion)
// so that uniform 0 and +-1 are fixed points exactly, in floating point,
// not just in exact arithmetic.

template <typename Real>
void stencil_sweep_2d(const Real* __restrict in, Real* __restrict out, index_t nx,
                      index_t ny, Real alpha, Real wn, Real wc, int threads) {
    const index_t ey = ny + 2;
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (index_t ix = 1; ix <= nx; ++ix) {
        const Real* __restrict row = in + ix * ey;
        const Real* __restrict rxm = row - ey;
        const Real* __restrict rxp = row + ey;
        Real* __restrict orow = out + ix * ey;
#ifdef _OPENMP
#pragma omp simd
#endif
        for (index_t iy = 1; iy <= ny; ++iy) {
            const Real c = row[iy];
            const Real conv = wn * ((rxm[iy] + rxp[iy]) + (row[iy - 1] + row[iy + 1])) + wc * c;
            orow[iy] = c + (alpha * (c - c * c * c) + conv);
        }
    }
}

template <typename Real>
void stencil_sweep_3d(const Real* __restrict in, Real* __restrict out, index_t nx,
                      index_t ny, index_t nz, Real alpha, Real wn, Real wc, int threads) {
    const index_t ez = nz + 2;
    const index_t sx = (ny + 2) * ez;
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (index_t ix = 1; ix <= nx; ++ix) {
        for (index_t iy = 1; iy <= ny; ++iy) {
            const Real* __restrict row = in + ix * sx + iy * ez;
            const Real* __restrict rxm = row - sx;
            const Real* __restrict rxp = row + sx;
            const Real* __restrict rym = row - ez;
            const Real* __restrict ryp = row + ez;
            Real* __restrict orow = out + ix * sx + iy * ez;
#ifdef _OPENMP
#pragma omp simd
#endif
            for (index_t iz = 1; iz <= nz; ++iz) {
                const Real c = row[iz];
                const Real conv =
                    wn * (((rxm[iz] + rxp[iz]) + (rym[iz] + ryp[iz])) + (row[iz - 1] + row[iz + 1])) +
                    wc * c;
                orow[iz] = c + (alpha * (c - c * c * c) + conv);
            }
        }
    }
}

template <typename Real>
void step_stencil_into(ScalarField<Real>& cur, ScalarField<Real>& next,
                       const SchemeParams& p, const StencilKernel<Real>& k, int threads) {
    fill_ghosts(cur); // replication pad, realized on the persistent ghost layer
    const GridSpec& s = cur.spec();
    const Real alpha = static_cast<Real>(p.alpha);
    if (s.dim() == 2)
        stencil_sweep_2d(cur.data(), next.data(), s.n(0), s.n(1), alpha, k.neighbor,
                         k.center, threads);
    else
        stencil_sweep_3d(cur.data(), next.data(), s.n(0), s.n(1), s.n(2), alpha,
                         k.neighbor, k.center, threads);
    fill_ghosts(next);
}

/// The literal pad-then-valid-convolve formulation: materializes a fresh
/// padded copy of the interior every step (per-step allocation included --
/// that cost is what this backend exists to measure).
template <typename Real>
void step_padcopy_into(const ScalarField<Real>& cur, ScalarField<Real>& next,
                       const SchemeParams& p, const StencilKernel<Real>& k, int threads) {
    ScalarField<Real> padded(cur.spec());
    std::copy(cur.values().begin(), cur.values().end(), padded.values().begin());
    fill_ghosts(padded);
    const GridSpec& s = cur.spec();
    const Real alpha = static_cast<Real>(p.alpha);
    if (s.dim() == 2)
        stencil_sweep_2d(padded.data(), next.data(), s.n(0), s.n(1), alpha, k.neighbor,
                         k.center, threads);
    else
        stencil_sweep_3d(padded.data(), next.data(), s.n(0), s.n(1), s.n(2), alpha,
                         k.neighbor, k.center, threads);
    fill_ghosts(next);
}

template <typename Real>
void step_reference_into(const ScalarField<Real>& cur, ScalarField<Real>& next,
                         const SchemeParams& p) {
    const GridSpec& s = cur.spec();
    const Real alpha = static_cast<Real>(p.alpha);
    const Real dt = static_cast<Real>(p.dt);
    const Real h2 = static_cast<Real>(p.h * p.h);
    if (s.dim() == 2) {
        for (index_t ix = 1; ix <= s.n(0); ++ix)
            for (index_t iy = 1; iy <= s.n(1); ++iy) {
                const Real c = cur.at(ix, iy);
                const Real lap = ((cur.at(ix - 1, iy) + cur.at(ix + 1, iy)) +
                                  (cur.at(ix, iy - 1) + cur.at(ix, iy + 1)) - Real(4) * c) /
                                 h2;
                next.at(ix, iy) = c + (alpha * (c - c * c * c) + dt * lap);
            }
    } else {
        for (index_t ix = 1; ix <= s.n(0); ++ix)
            for (index_t iy = 1; iy <= s.n(1); ++iy)
                for (index_t iz = 1; iz <= s.n(2); ++iz) {
                    const Real c = cur.at(ix, iy, iz);
                    const Real lap =
                        (((cur.at(ix - 1, iy, iz) + cur.at(ix + 1, iy, iz)) +
                          (cur.at(ix, iy - 1, iz) + cur.at(ix, iy + 1, iz))) +
                         (cur.at(ix, iy, iz - 1) + cur.at(ix, iy, iz + 1)) - Real(6) * c) /
                        h2;
                    next.at(ix, iy, iz) = c + (alpha * (c - c * c * c) + dt * lap);
                }
    }
    fill_ghosts(next);
}

template <typename Real>
void step_into(Backend backend, ScalarField<Real>& cur, ScalarField<Real>& next,
               const SchemeParams& p, const StencilKernel<Real>& k, int threads) {
    switch (backend) {
        case Backend::reference: step_reference_into(cur, next, p); break;
        case Backend::stencil: step_stencil_into(cur, next, p, k, threads); break;
        case Backend::stencil_padcopy: step_padcopy_into(cur, next, p, k, threads); break;
    }
}

/// Flat extended index of the first non-finite value, or -1.
template <typename Real>
index_t first_nonfinite(const ScalarField<Real>& f) {
    const auto vals = f.values();
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (!std::isfinite(static_cast<double>(vals[i]))) return static_cast<index_t>(i);
    return -1;
}

} // namespace detail

/// 5-point (7-point) Laplacian on interior cells; ghosts must be current.
template <typename Real>
std::vector<Real> laplacian_ref(const ScalarField<Real>& f) {
    const GridSpec& s = f.spec();
    const Real h2 = static_cast<Real>(s.h() * s.h());
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(s.interior_cells()));
    if (s.dim() == 2) {
        for (index_t ix = 1; ix <= s.n(0); ++ix)
            for (index_t iy = 1; iy <= s.n(1); ++iy)
                out.push_back(((f(ix - 1, iy) + f(ix + 1, iy)) +
                               (f(ix, iy - 1) + f(ix, iy + 1)) - Real(4) * f(ix, iy)) /
                              h2);
    } else {
        for (index_t ix = 1; ix <= s.n(0); ++ix)
            for (index_t iy = 1; iy <= s.n(1); ++iy)
                for (index_t iz = 1; iz <= s.n(2); ++iz)
                    out.push_back((((f(ix - 1, iy, iz) + f(ix + 1, iy, iz)) +
                                    (f(ix, iy - 1, iz) + f(ix, iy + 1, iz))) +
                                   (f(ix, iy, iz - 1) + f(ix, iy, iz + 1)) -
                                   Real(6) * f(ix, iy, iz)) /
                                  h2);
    }
    return out;
}

/// One step of the deliberately naive baseline: explicit per-cell loops with
/// checked element access, no bulk operations. Input ghosts must be current.
template <typename Real>
ScalarField<Real> step_reference(const ScalarField<Real>& cur, const SchemeParams& p) {
    ScalarField<Real> next(cur.spec());
    detail::step_reference_into(cur, next, p);
    return next;
}

/// One step of the optimized backend: refresh the replication ghosts, then
/// one bulk data-parallel stencil+reaction sweep. Mathematically identical
/// to step_reference.
template <typename Real>
ScalarField<Real> step_stencil(ScalarField<Real>& cur, const SchemeParams& p,
                               const StencilKernel<Real>& k, int threads = 0) {
    ScalarField<Real> next(cur.spec());
    detail::step_stencil_into(cur, next, p, k, threads);
    return next;
}

template <typename Real>
ScalarField<Real> step_stencil_padcopy(const ScalarField<Real>& cur, const SchemeParams& p,
                                       const StencilKernel<Real>& k, int threads = 0) {
    ScalarField<Real> next(cur.spec());
    detail::step_padcopy_into(cur, next, p, k, threads);
    return next;
}

/// Timing + diagnostics series of one simulation.
struct RunReport {
    Backend backend = Backend::stencil;
    long n_steps = 0;
    double step_seconds = 0.0; // pure stepping wall time, no I/O or diagnostics
    double steps_per_second = 0.0;
    std::vector<Diagnostics> diagnostics;
};

template <typename Real>
struct SimResult {
    ScalarField<Real> field;
    RunReport report;
};

/// Observers invoked at the diagnostics / snapshot strides. Both excluded
/// from the timed region.
template <typename Real>
struct RunHooks {
    std::function<void(const Diagnostics&, const ScalarField<Real>&)> on_diagnostics;
    std::function<void(long step, double t, const ScalarField<Real>&)> on_snapshot;
};

namespace detail {

template <typename Real>
void check_finite(const ScalarField<Real>& f, long step) {
    const index_t bad = first_nonfinite(f);
    if (bad >= 0)
        throw divergence_error(step, bad,
                               "non-finite value at step " + std::to_string(step) +
                                   ", flat extended index " + std::to_string(bad));
}

} // namespace detail

/// Drive n_steps of the configured backend with double buffering. Diagnostics
/// (and the non-finite divergence scan) run every diag_stride steps and at
/// the first/last step; wall time covers only the stepping calls.
template <typename Real = double>
SimResult<Real> run(const RunConfig& cfg, const RunHooks<Real>& hooks = {}) {
    cfg.validate();
    StepBuffers<Real> bufs(apply_initial<Real>(cfg.grid, cfg.params.eps, cfg.init));
    const StencilKernel<Real> kernel = StencilKernel<Real>::make(cfg.params);

    RunReport report;
    report.backend = cfg.backend;
    report.n_steps = cfg.n_steps;

    auto observe = [&](long step) {
        const double t = static_cast<double>(step) * cfg.params.dt;
        detail::check_finite(bufs.cur, step);
        const Diagnostics d =
            diagnose(bufs.cur, cfg.params, step, t, cfg.radius_center, cfg.radius_r0);
        report.diagnostics.push_back(d);
        if (hooks.on_diagnostics) hooks.on_diagnostics(d, bufs.cur);
    };
    auto snapshot = [&](long step) {
        if (!hooks.on_snapshot || cfg.snapshot_stride <= 0) return;
        if (step % cfg.snapshot_stride == 0 || step == cfg.n_steps)
            hooks.on_snapshot(step, static_cast<double>(step) * cfg.params.dt, bufs.cur);
    };

    observe(0);
    snapshot(0);

    using clock = std::chrono::steady_clock;
    double seconds = 0.0;
    for (long step = 1; step <= cfg.n_steps; ++step) {
        const auto t0 = clock::now();
        detail::step_into(cfg.backend, bufs.cur, bufs.next, cfg.params, kernel, cfg.threads);
        seconds += std::chrono::duration<double>(clock::now() - t0).count();
        bufs.swap();
        if (step % cfg.diag_stride == 0 || step == cfg.n_steps) observe(step);
        snapshot(step);
    }

    report.step_seconds = seconds;
    report.steps_per_second = seconds > 0.0 ? static_cast<double>(cfg.n_steps) / seconds : 0.0;
    return SimResult<Real>{std::move(bufs.cur), std::move(report)};
}

template <typename RealA, typename RealB>
struct DualResult {
    SimResult<RealA> a;
    SimResult<RealB> b;
    double err = 0.0; // Err metric accumulated across the run
};

/// Run two backends in lockstep from the same initial condition, accumulating
/// the per-step interior RMS difference into the Err metric (sampled every
/// err_stride steps; 1 = every step).
template <typename RealA = double, typename RealB = RealA>
DualResult<RealA, RealB> run_dual(const RunConfig& cfg,
                                  Backend backend_a = Backend::reference,
                                  Backend backend_b = Backend::stencil) {
    cfg.validate();
    StepBuffers<RealA> a(apply_initial<RealA>(cfg.grid, cfg.params.eps, cfg.init));
    StepBuffers<RealB> b(apply_initial<RealB>(cfg.grid, cfg.params.eps, cfg.init));
    const StencilKernel<RealA> ka = StencilKernel<RealA>::make(cfg.params);
    const StencilKernel<RealB> kb = StencilKernel<RealB>::make(cfg.params);

    RunReport ra, rb;
    ra.backend = backend_a;
    rb.backend = backend_b;
    ra.n_steps = rb.n_steps = cfg.n_steps;

    auto observe = [&](long step) {
        const double t = static_cast<double>(step) * cfg.params.dt;
        detail::check_finite(a.cur, step);
        detail::check_finite(b.cur, step);
        ra.diagnostics.push_back(diagnose(a.cur, cfg.params, step, t, cfg.radius_center, cfg.radius_r0));
        rb.diagnostics.push_back(diagnose(b.cur, cfg.params, step, t, cfg.radius_center, cfg.radius_r0));
    };
    observe(0);

    using clock = std::chrono::steady_clock;
    double sa = 0.0, sb = 0.0, err_sum = 0.0;
    long err_terms = 0;
    for (long step = 1; step <= cfg.n_steps; ++step) {
        auto t0 = clock::now();
        detail::step_into(backend_a, a.cur, a.next, cfg.params, ka, cfg.threads);
        auto t1 = clock::now();
        detail::step_into(backend_b, b.cur, b.next, cfg.params, kb, cfg.threads);
        auto t2 = clock::now();
        sa += std::chrono::duration<double>(t1 - t0).count();
        sb += std::chrono::duration<double>(t2 - t1).count();
        a.swap();
        b.swap();
        if (step % cfg.err_stride == 0 || step == cfg.n_steps) {
            err_sum += rms_diff(a.cur, b.cur);
            ++err_terms;
        }
        if (step % cfg.diag_stride == 0 || step == cfg.n_steps) observe(step);
    }

    ra.step_seconds = sa;
    rb.step_seconds = sb;
    ra.steps_per_second = sa > 0.0 ? static_cast<double>(cfg.n_steps) / sa : 0.0;
    rb.steps_per_second = sb > 0.0 ? static_cast<double>(cfg.n_steps) / sb : 0.0;

    DualResult<RealA, RealB> out{SimResult<RealA>{std::move(a.cur), std::move(ra)},
                                 SimResult<RealB>{std::move(b.cur), std::move(rb)},
                                 err_sum / static_cast<double>(err_terms)};
    return out;
}

} // namespace acfd
