#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "acfd/errors.hpp"
#include "acfd/grid.hpp"
#include "acfd/params.hpp"

namespace acfd {

/// One diagnostics row. radius/exact_radius are NaN when not applicable
/// (no tracked center, no crossing, or the exact circle already vanished).
struct Diagnostics {
    long step = 0;
    double t = 0.0;
    double radius = std::numeric_limits<double>::quiet_NaN();
    double exact_radius = std::numeric_limits<double>::quiet_NaN();
    double energy = 0.0;
    double min = 0.0;
    double max = 0.0;
    double separated_fraction = 0.0;
};

/// Radius under motion by mean curvature: sqrt(r0^2 + 2(1-dim) t).
inline double exact_radius(double r0, int dim, double t) {
    if (!(r0 > 0.0)) throw param_error("exact_radius: r0 must be positive");
    if (dim != 2 && dim != 3) throw dimension_error("exact_radius: dim must be 2 or 3");
    const double arg = r0 * r0 + 2.0 * (1.0 - static_cast<double>(dim)) * t;
    if (!(arg > 0.0))
        throw circle_vanished_error("exact_radius: circle has vanished at this time");
    return std::sqrt(arg);
}

/// Walk interior cells along the +x ray through the row of cell centers
/// nearest to `center`, find the first sign change of phi, and return the
/// distance from `center` to the linearly interpolated zero crossing.
template <typename Real>
double measure_radius(const ScalarField<Real>& f, std::array<double, 3> center) {
    const GridSpec& s = f.spec();
    const index_t iy = s.nearest_index(1, center[1]) + 1; // extended index
    const index_t iz = s.dim() == 3 ? s.nearest_index(2, center[2]) + 1 : 0;
    const index_t i0 = s.nearest_index(0, center[0]) + 1;

    const double yoff = s.ext_center(1, iy) - center[1];
    const double zoff = s.dim() == 3 ? s.ext_center(2, iz) - center[2] : 0.0;

    for (index_t ix = i0; ix < s.n(0); ++ix) {
        const double a = static_cast<double>(f(ix, iy, iz));
        const double b = static_cast<double>(f(ix + 1, iy, iz));
        if (a * b < 0.0 || (a == 0.0 && b != 0.0)) {
            const double xc = s.ext_center(0, ix) + s.h() * (a / (a - b));
            return std::sqrt((xc - center[0]) * (xc - center[0]) + yoff * yoff +
                             zoff * zoff);
        }
    }
    throw no_interface_error("measure_radius: no sign change along the +x ray");
}

/// RMS difference over interior cells, accumulated in double regardless of
/// the field precision. Deterministic sequential reduction.
template <typename RealA, typename RealB>
double rms_diff(const ScalarField<RealA>& a, const ScalarField<RealB>& b) {
    if (!a.spec().same_shape(b.spec()))
        throw dimension_error("rms_diff: field shapes differ");
    double sum = 0.0;
    a.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        const double d = static_cast<double>(a(ix, iy, iz)) - static_cast<double>(b(ix, iy, iz));
        sum += d * d;
    });
    return std::sqrt(sum / static_cast<double>(a.spec().interior_cells()));
}

/// Err = (1/n) * sum_t sqrt(avg((a_t - b_t)^2)) over interior cells.
template <typename RealA, typename RealB>
double err_metric(std::span<const ScalarField<RealA>> series_a,
                  std::span<const ScalarField<RealB>> series_b) {
    if (series_a.size() != series_b.size() || series_a.empty())
        throw dimension_error("err_metric: sequences must have equal nonzero length");
    double sum = 0.0;
    for (std::size_t i = 0; i < series_a.size(); ++i)
        sum += rms_diff(series_a[i], series_b[i]);
    return sum / static_cast<double>(series_a.size());
}

template <typename Real>
double err_metric(const std::vector<ScalarField<Real>>& a,
                  const std::vector<ScalarField<Real>>& b) {
    return err_metric(std::span<const ScalarField<Real>>(a),
                      std::span<const ScalarField<Real>>(b));
}

/// Discrete energy sum over interior cells of
/// [0.25(phi^2-1)^2/eps^2 + 0.5 |grad_h phi|^2] h^dim with forward
/// differences; the high-side neighbor at a boundary is the ghost copy, so
/// boundary faces contribute zero. Diagnostic only, never used in the update.
template <typename Real>
double energy(const ScalarField<Real>& f, const SchemeParams& p) {
    const GridSpec& s = f.spec();
    const double inv_h = 1.0 / s.h();
    const double inv_eps2 = 1.0 / (p.eps * p.eps);
    double cell_vol = s.h() * s.h();
    if (s.dim() == 3) cell_vol *= s.h();
    double sum = 0.0;
    f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        const double c = static_cast<double>(f(ix, iy, iz));
        const double w = c * c - 1.0;
        double g = 0.0;
        const double dx = (static_cast<double>(f(ix + 1, iy, iz)) - c) * inv_h;
        const double dy = (static_cast<double>(f(ix, iy + 1, iz)) - c) * inv_h;
        g = dx * dx + dy * dy;
        if (s.dim() == 3) {
            const double dz = (static_cast<double>(f(ix, iy, iz + 1)) - c) * inv_h;
            g += dz * dz;
        }
        sum += 0.25 * w * w * inv_eps2 + 0.5 * g;
    });
    return sum * cell_vol;
}

struct PhaseStats {
    double min = 0.0;
    double max = 0.0;
    double separated_fraction = 0.0; // share of interior cells with |phi| > 0.9
};

template <typename Real>
PhaseStats phase_stats(const ScalarField<Real>& f) {
    PhaseStats st;
    st.min = std::numeric_limits<double>::infinity();
    st.max = -std::numeric_limits<double>::infinity();
    index_t separated = 0;
    f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        const double c = static_cast<double>(f(ix, iy, iz));
        st.min = std::min(st.min, c);
        st.max = std::max(st.max, c);
        if (std::abs(c) > 0.9) ++separated;
    });
    st.separated_fraction =
        static_cast<double>(separated) / static_cast<double>(f.spec().interior_cells());
    return st;
}

/// Assemble a diagnostics row; radius columns filled only when a tracked
/// center is given and a crossing/valid exact value exists.
template <typename Real>
Diagnostics diagnose(const ScalarField<Real>& f, const SchemeParams& p, long step, double t,
                     const std::optional<std::array<double, 3>>& radius_center = {},
                     const std::optional<double>& radius_r0 = {}) {
    Diagnostics d;
    d.step = step;
    d.t = t;
    const PhaseStats st = phase_stats(f);
    d.min = st.min;
    d.max = st.max;
    d.separated_fraction = st.separated_fraction;
    d.energy = energy(f, p);
    if (radius_center) {
        try {
            d.radius = measure_radius(f, *radius_center);
        } catch (const no_interface_error&) {
        }
        if (radius_r0) {
            try {
                d.exact_radius = exact_radius(*radius_r0, f.spec().dim(), t);
            } catch (const circle_vanished_error&) {
            }
        }
    }
    return d;
}

} // namespace acfd
