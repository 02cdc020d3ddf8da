#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "acfd/errors.hpp"
#include "acfd/grid.hpp"
#include "acfd/params.hpp"
#include "acfd/rng.hpp"

namespace acfd {

// ---------------------------------------------------------------------------
// Shape descriptions
// ---------------------------------------------------------------------------

struct CircleIc {
    double r0 = 0.25;
};
struct SphereIc {
    double r0 = 0.25;
};
struct DumbbellIc {
    double r0 = 0.2;
};
struct StarIc {
    // The 3D theta branch tests x > 0.5 even though the 3D domain is centered
    // at the origin (immaterial: cos(6*theta) cannot see a pi shift); set
    // branch_at_origin to test x > 0 instead.
    bool branch_at_origin = false;
};
struct TorusIc {
    double r1 = 0.4;
    double r2 = 0.3;
};
struct MazeIc {};
struct RandomIc {
    double amplitude = 0.1;
    std::uint64_t seed = 1;
};

/// Tagged description of one of the seven initial shapes.
using InitialCondition =
    std::variant<CircleIc, SphereIc, DumbbellIc, StarIc, TorusIc, MazeIc, RandomIc>;

inline bool supports_dim(const InitialCondition& ic, int dim) {
    if (std::holds_alternative<CircleIc>(ic)) return dim == 2;
    if (std::holds_alternative<SphereIc>(ic)) return dim == 3;
    return dim == 2 || dim == 3;
}

inline std::string ic_name(const InitialCondition& ic) {
    struct V {
        std::string operator()(const CircleIc&) const { return "circle"; }
        std::string operator()(const SphereIc&) const { return "sphere"; }
        std::string operator()(const DumbbellIc&) const { return "dumbbell"; }
        std::string operator()(const StarIc&) const { return "star"; }
        std::string operator()(const TorusIc&) const { return "torus"; }
        std::string operator()(const MazeIc&) const { return "maze"; }
        std::string operator()(const RandomIc&) const { return "random"; }
    };
    return std::visit(V{}, ic);
}

// ---------------------------------------------------------------------------
// Generators. All are pure functions of (spec, eps, shape parameters, seed):
// repeated calls produce bitwise-identical fields.
// ---------------------------------------------------------------------------

namespace detail {

inline double tanh_profile(double signed_dist, double eps) {
    return std::tanh(signed_dist / (std::sqrt(2.0) * eps));
}

inline void require_dim(const GridSpec& spec, int dim, const char* what) {
    if (spec.dim() != dim)
        throw dimension_error(std::string(what) + ": wrong grid dimensionality");
}

inline void require_eps(double eps) {
    if (!(eps > 0.0)) throw param_error("eps must be positive");
}

template <typename Real, typename Fn> // Fn(x, y, z) -> double
ScalarField<Real> from_function(const GridSpec& spec, Fn&& fn) {
    ScalarField<Real> f(spec);
    const bool is3d = spec.dim() == 3;
    f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        const double x = spec.ext_center(0, ix);
        const double y = spec.ext_center(1, iy);
        const double z = is3d ? spec.ext_center(2, iz) : 0.0;
        f(ix, iy, iz) = static_cast<Real>(fn(x, y, z));
    });
    fill_ghosts(f);
    return f;
}

} // namespace detail

/// phi = tanh((R0 - |x - c|)/(sqrt(2) eps)), centered at (0.5, 0.5).
template <typename Real = double>
ScalarField<Real> init_circle(const GridSpec& spec, double eps, double r0) {
    detail::require_dim(spec, 2, "init_circle");
    detail::require_eps(eps);
    if (!(r0 > 0.0)) throw param_error("circle radius must be positive");
    return detail::from_function<Real>(spec, [&](double x, double y, double) {
        const double r = std::hypot(x - 0.5, y - 0.5);
        return detail::tanh_profile(r0 - r, eps);
    });
}

/// 3D analogue of init_circle, centered at (0.5, 0.5, 0.5).
template <typename Real = double>
ScalarField<Real> init_sphere(const GridSpec& spec, double eps, double r0) {
    detail::require_dim(spec, 3, "init_sphere");
    detail::require_eps(eps);
    if (!(r0 > 0.0)) throw param_error("sphere radius must be positive");
    return detail::from_function<Real>(spec, [&](double x, double y, double z) {
        const double r = std::hypot(x - 0.5, y - 0.5, z - 0.5);
        return detail::tanh_profile(r0 - r, eps);
    });
}

/// Bar region (0.4<x<1.6, 0.4<y[,z]<0.6) at phi=1; elsewhere the sum of two
/// lobe profiles around (0.3, 0.5[, 0.5]) and (1.7, 0.5[, 0.5]).
template <typename Real = double>
ScalarField<Real> init_dumbbell(const GridSpec& spec, double eps, double r0) {
    detail::require_eps(eps);
    if (!(r0 > 0.0)) throw param_error("dumbbell radius must be positive");
    if (spec.dim() != 2 && spec.dim() != 3)
        throw dimension_error("init_dumbbell: unsupported dimensionality");
    const bool is3d = spec.dim() == 3;
    return detail::from_function<Real>(spec, [&](double x, double y, double z) {
        const bool in_bar = (0.4 < x && x < 1.6) && (0.4 < y && y < 0.6) &&
                            (!is3d || (0.4 < z && z < 0.6));
        if (in_bar) return 1.0;
        double cross = (y - 0.5) * (y - 0.5);
        if (is3d) cross += (z - 0.5) * (z - 0.5);
        const double d1 = std::sqrt((x - 0.3) * (x - 0.3) + cross);
        const double d2 = std::sqrt((x - 1.7) * (x - 1.7) + cross);
        return 1.0 + detail::tanh_profile(r0 - d1, eps) + detail::tanh_profile(r0 - d2, eps);
    });
}

/// Six-pointed star: 2D radius 0.25 + 0.1 cos(6 theta) about (0.5, 0.5);
/// 3D radius 0.7 + 0.2 cos(6 theta) about the origin with theta taken from
/// (x, z).
template <typename Real = double>
ScalarField<Real> init_star(const GridSpec& spec, double eps,
                            bool branch_at_origin = false) {
    detail::require_eps(eps);
    if (spec.dim() == 2) {
        return detail::from_function<Real>(spec, [&](double x, double y, double) {
            const double dx = x - 0.5, dy = y - 0.5;
            const double r = std::hypot(dx, dy);
            double theta = 0.0;
            if (r > 0.0) {
                theta = std::atan(dy / dx);
                if (!(x > 0.5)) theta += std::numbers::pi_v<double>;
            }
            return detail::tanh_profile(0.25 + 0.1 * std::cos(6.0 * theta) - r, eps);
        });
    }
    if (spec.dim() != 3) throw dimension_error("init_star: unsupported dimensionality");
    const double branch_x = branch_at_origin ? 0.0 : 0.5;
    return detail::from_function<Real>(spec, [&](double x, double y, double z) {
        const double r = std::hypot(x, y, z);
        double theta = 0.0;
        if (x != 0.0 || z != 0.0) {
            theta = std::atan(z / x);
            if (!(x > branch_x)) theta += std::numbers::pi_v<double>;
        }
        return detail::tanh_profile(0.7 + 0.2 * std::cos(6.0 * theta) - r, eps);
    });
}

/// 2D annulus between R2 and R1 about (0.5, 0.5); 3D tube of minor radius R2
/// around the circle of radius R1 in the z=0 plane. The 3D expression is a
/// signed distance s, wrapped as phi = -tanh(s/(sqrt(2) eps)) so the tube
/// interior is the +1 phase like every other shape.
template <typename Real = double>
ScalarField<Real> init_torus(const GridSpec& spec, double eps, double r1, double r2) {
    detail::require_eps(eps);
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw param_error("torus radii must be positive");
    if (spec.dim() == 2) {
        if (r2 >= r1) throw param_error("2D torus needs R2 < R1");
        return detail::from_function<Real>(spec, [&](double x, double y, double) {
            const double rho = std::hypot(x - 0.5, y - 0.5);
            return -1.0 + detail::tanh_profile(r1 - rho, eps) -
                   detail::tanh_profile(r2 - rho, eps);
        });
    }
    if (spec.dim() != 3) throw dimension_error("init_torus: unsupported dimensionality");
    return detail::from_function<Real>(spec, [&](double x, double y, double z) {
        const double ring = std::hypot(x, y) - r1;
        const double s = std::hypot(z, ring) - r2;
        return -detail::tanh_profile(s, eps);
    });
}

namespace detail {

/// 1D squared-distance transform (Felzenszvalb–Huttenlocher lower envelope
/// of parabolas). "Absent" cells carry a large finite sentinel rather than
/// infinity so every intersection stays finite.
inline void edt_1d(std::vector<double>& f, std::vector<double>& d,
                   std::vector<int>& v, std::vector<double>& zbound, int n) {
    constexpr double inf = 1e300;
    int k = 0;
    v[0] = 0;
    zbound[0] = -inf;
    zbound[1] = inf;
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            const int p = v[static_cast<std::size_t>(k)];
            s = ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
                 (f[static_cast<std::size_t>(p)] + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s <= zbound[static_cast<std::size_t>(k)] && k > 0) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        zbound[static_cast<std::size_t>(k)] = s;
        zbound[static_cast<std::size_t>(k) + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (zbound[static_cast<std::size_t>(k) + 1] < static_cast<double>(q)) ++k;
        const int p = v[static_cast<std::size_t>(k)];
        const double dq = static_cast<double>(q - p);
        d[static_cast<std::size_t>(q)] = dq * dq + f[static_cast<std::size_t>(p)];
    }
}

/// Squared Euclidean cell distance from every cell to the `inside` set,
/// over an interior grid of extents nx*ny*nz (nz=1 in 2D), row-major z-fastest.
inline std::vector<double> edt_sq(const std::vector<char>& inside, int nx, int ny, int nz) {
    // sentinel big enough to dominate any reachable squared distance
    const double far = 4.0 * static_cast<double>(nx + ny + nz) * static_cast<double>(nx + ny + nz);
    std::vector<double> dist(inside.size());
    for (std::size_t i = 0; i < inside.size(); ++i) dist[i] = inside[i] ? 0.0 : far;

    const int nmax = std::max({nx, ny, nz});
    std::vector<double> f(static_cast<std::size_t>(nmax)), d(static_cast<std::size_t>(nmax));
    std::vector<int> v(static_cast<std::size_t>(nmax));
    std::vector<double> zb(static_cast<std::size_t>(nmax) + 1);

    auto at = [&](int x, int y, int z) -> double& {
        return dist[(static_cast<std::size_t>(x) * static_cast<std::size_t>(ny) +
                     static_cast<std::size_t>(y)) * static_cast<std::size_t>(nz) +
                    static_cast<std::size_t>(z)];
    };
    // x sweep
    for (int y = 0; y < ny; ++y)
        for (int z = 0; z < nz; ++z) {
            for (int x = 0; x < nx; ++x) f[static_cast<std::size_t>(x)] = at(x, y, z);
            edt_1d(f, d, v, zb, nx);
            for (int x = 0; x < nx; ++x) at(x, y, z) = d[static_cast<std::size_t>(x)];
        }
    // y sweep
    for (int x = 0; x < nx; ++x)
        for (int z = 0; z < nz; ++z) {
            for (int y = 0; y < ny; ++y) f[static_cast<std::size_t>(y)] = at(x, y, z);
            edt_1d(f, d, v, zb, ny);
            for (int y = 0; y < ny; ++y) at(x, y, z) = d[static_cast<std::size_t>(y)];
        }
    if (nz > 1) {
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                for (int z = 0; z < nz; ++z) f[static_cast<std::size_t>(z)] = at(x, y, z);
                edt_1d(f, d, v, zb, nz);
                for (int z = 0; z < nz; ++z) at(x, y, z) = d[static_cast<std::size_t>(z)];
            }
    }
    return dist;
}

struct SpiralPattern {
    std::vector<char> stripe; // interior cells, row-major (last axis fastest)
    int corners = 0;
};

/// Inward rectilinear spiral over an nx*ny interior grid. Stripe width is
/// 3m/5 cells, turn-to-turn pitch 8m/5 cells, so the channel between stripe
/// turns is exactly one interface width (m cells).
inline SpiralPattern spiral_2d(int nx, int ny, int m) {
    SpiralPattern p;
    p.stripe.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
    const int w = std::max<int>(1, static_cast<int>(std::lround(3.0 * m / 5.0)));
    const int pitch = std::max<int>(w + 2, static_cast<int>(std::lround(8.0 * m / 5.0)));
    const int gap = pitch - w;

    auto rect = [&](int x0, int x1, int y0, int y1) -> bool {
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, nx - 1);
        y1 = std::min(y1, ny - 1);
        if (x0 > x1 || y0 > y1) return false;
        for (int x = x0; x <= x1; ++x)
            for (int y = y0; y <= y1; ++y)
                p.stripe[static_cast<std::size_t>(x) * static_cast<std::size_t>(ny) +
                         static_cast<std::size_t>(y)] = 1;
        return true;
    };

    int xl = gap, xh = nx - 1 - gap, yl = gap, yh = ny - 1 - gap;
    int x_entry = xl;
    int segments = 0;
    while (xh - xl + 1 >= 2 * w + 2 && yh - yl + 1 >= 2 * w + 2) {
        if (rect(x_entry, xh, yh - w + 1, yh)) ++segments;       // east along the top
        if (rect(xh - w + 1, xh, yl, yh - w)) ++segments;        // south down the right
        if (rect(xl, xh - w, yl, yl + w - 1)) ++segments;        // west along the bottom
        if (rect(xl, xl + w - 1, yl + w, yh - pitch)) ++segments; // north, stopping one
                                                                  // pitch short: the doorway
        x_entry = xl;
        xl += pitch;
        xh -= pitch;
        yl += pitch;
        yh -= pitch;
    }
    p.corners = segments > 0 ? segments - 1 : 0;
    return p;
}

} // namespace detail

/// Deterministic maze: an inward square spiral stripe at phi=+1 on a -1
/// background, smoothed through tanh(2*sd/(sqrt(2) eps)) where sd is the
/// signed distance (in cell units times h) to the stripe boundary. In 3D the
/// 2D spiral is extruded over the middle half of the z-axis.
template <typename Real = double>
ScalarField<Real> init_maze(const GridSpec& spec, double eps) {
    detail::require_eps(eps);
    if (spec.dim() != 2 && spec.dim() != 3)
        throw dimension_error("init_maze: unsupported dimensionality");
    const double h = spec.h();
    const int m = std::max<int>(1, static_cast<int>(std::lround(
                                       2.0 * std::sqrt(2.0) * kAtanh09 * eps / h)));
    const int nx = static_cast<int>(spec.n(0));
    const int ny = static_cast<int>(spec.n(1));
    const int nz = spec.dim() == 3 ? static_cast<int>(spec.n(2)) : 1;

    detail::SpiralPattern pat = detail::spiral_2d(nx, ny, m);
    if (pat.corners < 2)
        throw param_error("init_maze: grid too small for a spiral at this eps");

    // extrude (3D keeps the stripe only where the cell center z lies in the
    // middle half of the z extent)
    std::vector<char> inside(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
                             static_cast<std::size_t>(nz));
    const double zq0 = spec.dim() == 3
                           ? spec.lo(2) + 0.25 * (spec.hi(2) - spec.lo(2))
                           : 0.0;
    const double zq1 = spec.dim() == 3
                           ? spec.lo(2) + 0.75 * (spec.hi(2) - spec.lo(2))
                           : 0.0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            const char s = pat.stripe[static_cast<std::size_t>(x) * static_cast<std::size_t>(ny) +
                                      static_cast<std::size_t>(y)];
            for (int z = 0; z < nz; ++z) {
                bool keep = s != 0;
                if (spec.dim() == 3) {
                    const double zc = spec.center(2, z);
                    keep = keep && zc >= zq0 && zc <= zq1;
                }
                inside[(static_cast<std::size_t>(x) * static_cast<std::size_t>(ny) +
                        static_cast<std::size_t>(y)) * static_cast<std::size_t>(nz) +
                       static_cast<std::size_t>(z)] = keep ? 1 : 0;
            }
        }

    std::vector<char> outside(inside.size());
    for (std::size_t i = 0; i < inside.size(); ++i) outside[i] = inside[i] ? 0 : 1;
    const std::vector<double> d_to_stripe = detail::edt_sq(inside, nx, ny, nz);
    const std::vector<double> d_to_back = detail::edt_sq(outside, nx, ny, nz);

    ScalarField<Real> f(spec);
    std::size_t k = 0;
    f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        // signed cell-distance to the stripe boundary; the zero level sits on
        // the cell face between stripe and background
        const double sd_cells = inside[k] ? std::sqrt(d_to_back[k]) - 0.5
                                          : 0.5 - std::sqrt(d_to_stripe[k]);
        f(ix, iy, iz) = static_cast<Real>(
            std::tanh(2.0 * sd_cells * h / (std::sqrt(2.0) * eps)));
        ++k;
    });
    fill_ghosts(f);
    return f;
}

/// phi = amplitude * u with u iid uniform on [-1, 1) from the counter-based
/// generator, cell counter = row-major interior index.
template <typename Real = double>
ScalarField<Real> init_random(const GridSpec& spec, double amplitude, std::uint64_t seed) {
    if (!(amplitude > 0.0) || amplitude > 1.0)
        throw param_error("random amplitude must lie in (0, 1]");
    if (spec.dim() != 2 && spec.dim() != 3)
        throw dimension_error("init_random: unsupported dimensionality");
    const CounterRng rng{seed};
    ScalarField<Real> f(spec);
    std::uint64_t counter = 0;
    f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        f(ix, iy, iz) = static_cast<Real>(amplitude * rng.uniform_pm1(counter++));
    });
    fill_ghosts(f);
    return f;
}

/// Dispatch a tagged InitialCondition to its generator.
template <typename Real = double>
ScalarField<Real> apply_initial(const GridSpec& spec, double eps, const InitialCondition& ic) {
    if (!supports_dim(ic, spec.dim()))
        throw dimension_error("initial condition '" + ic_name(ic) + "' does not support " +
                              std::to_string(spec.dim()) + "D");
    struct V {
        const GridSpec& spec;
        double eps;
        ScalarField<Real> operator()(const CircleIc& c) { return init_circle<Real>(spec, eps, c.r0); }
        ScalarField<Real> operator()(const SphereIc& c) { return init_sphere<Real>(spec, eps, c.r0); }
        ScalarField<Real> operator()(const DumbbellIc& c) { return init_dumbbell<Real>(spec, eps, c.r0); }
        ScalarField<Real> operator()(const StarIc& c) { return init_star<Real>(spec, eps, c.branch_at_origin); }
        ScalarField<Real> operator()(const TorusIc& c) { return init_torus<Real>(spec, eps, c.r1, c.r2); }
        ScalarField<Real> operator()(const MazeIc&) { return init_maze<Real>(spec, eps); }
        ScalarField<Real> operator()(const RandomIc& c) { return init_random<Real>(spec, c.amplitude, c.seed); }
    };
    return std::visit(V{spec, eps}, ic);
}

} // namespace acfd
