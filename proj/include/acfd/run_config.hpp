#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "acfd/errors.hpp"
#include "acfd/grid.hpp"
#include "acfd/initial.hpp"
#include "acfd/params.hpp"

namespace acfd {

enum class Backend { reference, stencil, stencil_padcopy };
enum class Precision { f64, f32 };

inline std::string backend_name(Backend b) {
    switch (b) {
        case Backend::reference: return "reference";
        case Backend::stencil: return "stencil";
        case Backend::stencil_padcopy: return "stencil-padcopy";
    }
    return "?";
}

inline Backend parse_backend(const std::string& s) {
    if (s == "reference") return Backend::reference;
    if (s == "stencil") return Backend::stencil;
    if (s == "stencil-padcopy" || s == "stencil_padcopy") return Backend::stencil_padcopy;
    throw config_error("unknown backend '" + s + "' (reference|stencil|stencil-padcopy)");
}

inline std::string precision_name(Precision p) {
    return p == Precision::f64 ? "f64" : "f32";
}

inline Precision parse_precision(const std::string& s) {
    if (s == "f64" || s == "double") return Precision::f64;
    if (s == "f32" || s == "float" || s == "single") return Precision::f32;
    throw config_error("unknown precision '" + s + "' (f32|f64)");
}

/// Everything one simulation needs. Strides are in steps; a snapshot stride
/// of 0 disables snapshots.
struct RunConfig {
    RunConfig(GridSpec grid_, int m, InitialCondition init_, long n_steps_)
        : grid(grid_), params(default_params(grid_, m)), init(std::move(init_)),
          n_steps(n_steps_) {
        if (auto* r = std::get_if<RandomIc>(&init)) seed = r->seed;
    }

    GridSpec grid;
    SchemeParams params;
    InitialCondition init;
    long n_steps = 1;
    long diag_stride = 10;
    long err_stride = 1;     // dual-run error accumulation stride
    long snapshot_stride = 0;
    Backend backend = Backend::stencil;
    int threads = 0; // 0 = library default
    std::uint64_t seed = 1;
    Precision precision = Precision::f64;
    std::optional<std::array<double, 3>> radius_center; // +x ray origin for diagnostics
    std::optional<double> radius_r0;                    // for the exact_radius column
    std::string name = "custom";

    void set_seed(std::uint64_t s) {
        seed = s;
        if (auto* r = std::get_if<RandomIc>(&init)) r->seed = s;
    }

    void set_dt(double dt) { params = params_with_dt(grid, params.m, dt); }

    /// Swap in a different grid and/or m, recomputing the scheme parameters.
    void reshape(const GridSpec& g, int m) {
        grid = g;
        params = default_params(g, m);
    }

    void validate() const {
        if (n_steps < 1) throw config_error("n_steps must be >= 1");
        if (diag_stride < 1) throw config_error("diagnostics stride must be >= 1");
        if (err_stride < 1) throw config_error("error stride must be >= 1");
        if (snapshot_stride < 0) throw config_error("snapshot stride must be >= 0");
        if (threads < 0) throw config_error("thread count must be >= 0");
        if (!supports_dim(init, grid.dim()))
            throw config_error("initial condition '" + ic_name(init) + "' does not support " +
                               std::to_string(grid.dim()) + "D");
        check_stability(params.dt, params.h, params.dim);
    }
};

/// Desk-scale variant: divides every axis count by s, recomputes dt = 0.1 h^2
/// and eps_m from the coarser h (same m), and divides the step count by s^2,
/// so the final time and the interface width in cells are preserved.
inline RunConfig scaled_config(const RunConfig& cfg, int s) {
    if (s < 1) throw config_error("scale must be >= 1");
    if (s == 1) return cfg;
    for (int a = 0; a < cfg.grid.dim(); ++a)
        if (cfg.grid.n(a) % s != 0)
            throw config_error("scale " + std::to_string(s) + " does not divide the " +
                               std::to_string(cfg.grid.n(a)) + "-cell axis");
    GridSpec g = cfg.grid.dim() == 2
                     ? GridSpec::make_2d(cfg.grid.lo(0), cfg.grid.hi(0), cfg.grid.lo(1),
                                         cfg.grid.hi(1), cfg.grid.n(0) / s, cfg.grid.n(1) / s)
                     : GridSpec::make_3d(cfg.grid.lo(0), cfg.grid.hi(0), cfg.grid.lo(1),
                                         cfg.grid.hi(1), cfg.grid.lo(2), cfg.grid.hi(2),
                                         cfg.grid.n(0) / s, cfg.grid.n(1) / s,
                                         cfg.grid.n(2) / s);
    RunConfig out = cfg;
    out.grid = g;
    out.params = default_params(g, cfg.params.m);
    const long s2 = static_cast<long>(s) * static_cast<long>(s);
    out.n_steps = (cfg.n_steps + s2 - 1) / s2;
    return out;
}

} // namespace acfd
