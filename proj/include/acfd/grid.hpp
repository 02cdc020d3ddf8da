#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acfd/errors.hpp"

namespace acfd {

using index_t = std::int64_t;

/// Uniform cell-centered grid geometry in 2D or 3D.
///
/// Interior cells are indexed 0..n-1 per axis with centers at a + (i+0.5)h;
/// the extended grid adds one ghost cell per side, so extended index j runs
/// 0..n+1 with centers at a + (j-0.5)h. Spacing is isotropic by construction.
class GridSpec {
public:
    static GridSpec make_2d(double ax, double bx, double ay, double by,
                            index_t nx, index_t ny) {
        return GridSpec(2, {ax, ay, 0.0}, {bx, by, 0.0}, {nx, ny, 1});
    }

    static GridSpec make_3d(double ax, double bx, double ay, double by,
                            double az, double bz,
                            index_t nx, index_t ny, index_t nz) {
        return GridSpec(3, {ax, ay, az}, {bx, by, bz}, {nx, ny, nz});
    }

    int dim() const noexcept { return dim_; }
    double h() const noexcept { return h_; }
    double lo(int axis) const noexcept { return lo_[static_cast<std::size_t>(axis)]; }
    double hi(int axis) const noexcept { return hi_[static_cast<std::size_t>(axis)]; }
    index_t n(int axis) const noexcept { return n_[static_cast<std::size_t>(axis)]; }

    /// Extended extent (interior + one ghost per side) along an axis.
    index_t ext(int axis) const noexcept { return n(axis) + 2; }

    index_t interior_cells() const noexcept {
        index_t c = 1;
        for (int a = 0; a < dim_; ++a) c *= n(a);
        return c;
    }
    index_t extended_cells() const noexcept {
        index_t c = 1;
        for (int a = 0; a < dim_; ++a) c *= ext(a);
        return c;
    }

    /// Center coordinate of interior cell i (0-based) on an axis.
    double center(int axis, index_t i) const noexcept {
        return lo(axis) + (static_cast<double>(i) + 0.5) * h_;
    }

    /// Center coordinate of extended cell j (0-based; j=0 is the low ghost).
    double ext_center(int axis, index_t j) const noexcept {
        return lo(axis) + (static_cast<double>(j) - 0.5) * h_;
    }

    /// Interior index of the cell whose center is nearest to x on an axis.
    index_t nearest_index(int axis, double x) const noexcept {
        auto i = static_cast<index_t>(std::llround((x - lo(axis)) / h_ - 0.5));
        if (i < 0) i = 0;
        if (i >= n(axis)) i = n(axis) - 1;
        return i;
    }

    bool same_shape(const GridSpec& o) const noexcept {
        return dim_ == o.dim_ && n_ == o.n_;
    }

private:
    GridSpec(int dim, std::array<double, 3> lo_in, std::array<double, 3> hi_in,
             std::array<index_t, 3> n_in)
        : dim_(dim), lo_(lo_in), hi_(hi_in), n_(n_in) {
        h_ = (hi_[0] - lo_[0]) / static_cast<double>(n_[0]);
        if (!(h_ > 0.0)) throw param_error("grid spacing must be positive");
        for (int a = 0; a < dim_; ++a) {
            if (n(a) < 3) throw param_error("grids need at least 3 cells per axis");
            const double ha = (hi_[static_cast<std::size_t>(a)] - lo_[static_cast<std::size_t>(a)]) /
                              static_cast<double>(n(a));
            if (std::abs(ha - h_) > 1e-12 * std::abs(h_))
                throw param_error("grid spacing must be isotropic across axes");
        }
    }

    int dim_;
    std::array<double, 3> lo_;
    std::array<double, 3> hi_;
    std::array<index_t, 3> n_;
    double h_;
};

/// Interior cell-center coordinates, one vector per axis.
inline std::vector<std::vector<double>> cell_centers(const GridSpec& spec) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(spec.dim()));
    for (int a = 0; a < spec.dim(); ++a) {
        auto& axis = out[static_cast<std::size_t>(a)];
        axis.resize(static_cast<std::size_t>(spec.n(a)));
        for (index_t i = 0; i < spec.n(a); ++i)
            axis[static_cast<std::size_t>(i)] = spec.center(a, i);
    }
    return out;
}

/// The order parameter on the extended grid (interior + one ghost cell per
/// side), stored in one contiguous row-major buffer, last axis fastest.
///
/// An inert value type: copyable, movable, no interior locking. Concurrent
/// reads are fine; mutation requires exclusive access.
template <typename Real = double>
class ScalarField {
public:
    explicit ScalarField(const GridSpec& spec)
        : spec_(spec), data_(static_cast<std::size_t>(spec.extended_cells()), Real(0)) {}

    const GridSpec& spec() const noexcept { return spec_; }

    /// Flat offset of extended cell (ix,iy[,iz]); z ignored in 2D.
    index_t offset(index_t ix, index_t iy, index_t iz = 0) const noexcept {
        if (spec_.dim() == 2) return ix * spec_.ext(1) + iy;
        return (ix * spec_.ext(1) + iy) * spec_.ext(2) + iz;
    }

    Real& operator()(index_t ix, index_t iy, index_t iz = 0) noexcept {
        return data_[static_cast<std::size_t>(offset(ix, iy, iz))];
    }
    Real operator()(index_t ix, index_t iy, index_t iz = 0) const noexcept {
        return data_[static_cast<std::size_t>(offset(ix, iy, iz))];
    }

    /// Bounds-checked access on the extended grid.
    Real& at(index_t ix, index_t iy, index_t iz = 0) {
        check(ix, iy, iz);
        return (*this)(ix, iy, iz);
    }
    Real at(index_t ix, index_t iy, index_t iz = 0) const {
        check(ix, iy, iz);
        return (*this)(ix, iy, iz);
    }

    std::span<Real> values() noexcept { return data_; }
    std::span<const Real> values() const noexcept { return data_; }
    Real* data() noexcept { return data_.data(); }
    const Real* data() const noexcept { return data_.data(); }

    /// Interior values copied out in row-major interior order.
    std::vector<Real> interior() const {
        std::vector<Real> out;
        out.reserve(static_cast<std::size_t>(spec_.interior_cells()));
        for_each_interior([&](index_t ix, index_t iy, index_t iz) {
            out.push_back((*this)(ix, iy, iz));
        });
        return out;
    }

    template <typename Fn> // Fn(ix, iy, iz) over extended indices 1..n
    void for_each_interior(Fn&& fn) const {
        const index_t zs = spec_.dim() == 3 ? 1 : 0;
        const index_t ze = spec_.dim() == 3 ? spec_.n(2) : 0;
        for (index_t ix = 1; ix <= spec_.n(0); ++ix)
            for (index_t iy = 1; iy <= spec_.n(1); ++iy)
                for (index_t iz = zs; iz <= ze; ++iz) fn(ix, iy, iz);
    }

private:
    void check(index_t ix, index_t iy, index_t iz) const {
        if (ix < 0 || ix >= spec_.ext(0) || iy < 0 || iy >= spec_.ext(1) ||
            (spec_.dim() == 3 ? (iz < 0 || iz >= spec_.ext(2)) : iz != 0))
            throw dimension_error("field index out of range");
    }

    GridSpec spec_;
    std::vector<Real> data_;
};

/// Zero-Neumann ghost fill: every ghost cell copies its adjacent interior
/// cell. Axis rules are applied in the fixed order x, y, z over the full
/// extended range of the other axes, so edge/corner ghosts end up holding
/// the nearest interior corner value. Idempotent; interior untouched.
template <typename Real>
void fill_ghosts(ScalarField<Real>& f) {
    const GridSpec& s = f.spec();
    const index_t nx = s.n(0), ny = s.n(1);
    if (s.dim() == 2) {
        for (index_t iy = 0; iy < s.ext(1); ++iy) {
            f(0, iy) = f(1, iy);
            f(nx + 1, iy) = f(nx, iy);
        }
        for (index_t ix = 0; ix < s.ext(0); ++ix) {
            f(ix, 0) = f(ix, 1);
            f(ix, ny + 1) = f(ix, ny);
        }
        return;
    }
    const index_t nz = s.n(2);
    for (index_t iy = 0; iy < s.ext(1); ++iy)
        for (index_t iz = 0; iz < s.ext(2); ++iz) {
            f(0, iy, iz) = f(1, iy, iz);
            f(nx + 1, iy, iz) = f(nx, iy, iz);
        }
    for (index_t ix = 0; ix < s.ext(0); ++ix)
        for (index_t iz = 0; iz < s.ext(2); ++iz) {
            f(ix, 0, iz) = f(ix, 1, iz);
            f(ix, ny + 1, iz) = f(ix, ny, iz);
        }
    for (index_t ix = 0; ix < s.ext(0); ++ix)
        for (index_t iy = 0; iy < s.ext(1); ++iy) {
            f(ix, iy, 0) = f(ix, iy, 1);
            f(ix, iy, nz + 1) = f(ix, iy, nz);
        }
}

/// Build a field from interior values (row-major interior order) and fill
/// the ghost layer.
template <typename Real>
ScalarField<Real> make_field(const GridSpec& spec, std::span<const Real> interior) {
    if (static_cast<index_t>(interior.size()) != spec.interior_cells())
        throw dimension_error("interior array does not match grid shape");
    ScalarField<Real> f(spec);
    std::size_t k = 0;
    f.for_each_interior([&](index_t ix, index_t iy, index_t iz) {
        f(ix, iy, iz) = interior[k++];
    });
    fill_ghosts(f);
    return f;
}

template <typename Real>
ScalarField<Real> make_field(const GridSpec& spec, const std::vector<Real>& interior) {
    return make_field<Real>(spec, std::span<const Real>(interior));
}

} // namespace acfd
