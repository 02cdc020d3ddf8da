#pragma once

#include <cmath>

#include "acfd/errors.hpp"
#include "acfd/grid.hpp"

namespace acfd {

/// atanh(0.9) = 0.5*ln(19), to full double precision.
inline constexpr double kAtanh09 = 1.4722194895832204;

/// Transition-layer thickness spanning m grid cells between phi = -0.9 and
/// +0.9: eps_m = h*m / (2*sqrt(2)*atanh(0.9)).
inline double epsilon_m(double h, int m) {
    if (!(h > 0.0)) throw param_error("epsilon_m: h must be positive");
    if (m < 1) throw param_error("epsilon_m: m must be >= 1");
    return h * static_cast<double>(m) / (2.0 * std::sqrt(2.0) * kAtanh09);
}

/// Everything the per-step update needs: eps, dt, alpha = dt/eps^2, plus the
/// grid spacing and dimension they were derived for. Immutable value type.
struct SchemeParams {
    double eps = 0.0;
    int m = 0; // cells across the interface (0 when eps was user-supplied)
    double dt = 0.0;
    double alpha = 0.0;
    double h = 0.0;
    int dim = 2;
};

/// Explicit-diffusion stability bound dt <= h^2/(2*dim).
inline void check_stability(double dt, double h, int dim) {
    if (!(dt > 0.0)) throw config_error("time step must be positive");
    if (dt > h * h / (2.0 * static_cast<double>(dim)))
        throw config_error("explicit scheme unstable: dt exceeds h^2/(2*dim)");
}

/// dt = 0.1 h^2, eps = eps_m(h, m), alpha = dt/eps^2. alpha depends on m
/// only (0.8*atanh(0.9)^2/m^2), so it is invariant under grid refinement.
inline SchemeParams default_params(const GridSpec& spec, int m) {
    SchemeParams p;
    p.h = spec.h();
    p.dim = spec.dim();
    p.m = m;
    p.eps = epsilon_m(p.h, m);
    p.dt = 0.1 * p.h * p.h;
    p.alpha = p.dt / (p.eps * p.eps);
    check_stability(p.dt, p.h, p.dim);
    return p;
}

/// Same, but with a user-supplied dt (stability guard is a hard error).
inline SchemeParams params_with_dt(const GridSpec& spec, int m, double dt) {
    SchemeParams p;
    p.h = spec.h();
    p.dim = spec.dim();
    p.m = m;
    p.eps = epsilon_m(p.h, m);
    p.dt = dt;
    p.alpha = p.dt / (p.eps * p.eps);
    check_stability(p.dt, p.h, p.dim);
    return p;
}

} // namespace acfd
