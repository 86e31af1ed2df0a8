#pragma once

#include "hawkes/grid_function.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

// theta_c = ||h|| - 1 - log ||h||, the abscissa of convergence of E[e^{theta S_inf}].
double theta_critical(double l1);

// Smaller root of x = exp(theta + ||h||(x - 1)) in (0, 1/||h||]; this is the moment
// generating function of the total progeny of one immigrant. Residual < 1e-12.
// Throws NoRealRootError for theta > theta_c.
double solve_x(double theta, double l1);

// Grid solution of F(t) = exp(theta + int_0^t (F(t-s) - 1) h(s) ds) by trapezoidal
// convolution with per-step fixed-point iteration (the s = 0 endpoint makes each
// step implicit). Requires theta < theta_c strictly.
GridFunction solve_F(double theta, const Kernel& kernel, double step, double horizon);

// int_0^inf (g - limit) dt: trapezoid over the grid plus a fitted tail beyond the
// horizon. The tail model is chosen between geometric C*rho^s and power C*(1+s)^q
// by least-squares residual on the last resolvable decade of |g - limit|.
double integrate_to_limit(const GridFunction& g, double limit);

// phi(theta) = int_0^inf [F(s;theta) - x(theta)] ds on a single grid.
double compute_phi(double theta, const Kernel& kernel, double step, double horizon);

// psi(theta) = exp(nu * phi(theta)); psi(0) = 1.
double compute_psi(double theta, const Kernel& kernel, double nu, double step, double horizon);

// eta(theta) = nu (x(theta) - 1); eta(0) = 0.
double compute_eta(double theta, double nu, double l1);

// Grid specification for the CGF/expansion machinery. refine = true solves on
// step and step/2 and Richardson-combines the grids, removing the O(step^2)
// solution bias (the discrete F plateaus at a slightly shifted limit otherwise).
struct GridSpec {
    double step = 0.01;
    double horizon = 0.0;  // 0: kernel-dependent default
    bool refine = true;

    double horizon_for(const Kernel& k) const { return horizon > 0.0 ? horizon : k.default_horizon(); }
};

// Mod-phi ingredients at one theta.
struct CgfContext {
    double theta = 0.0;
    double theta_c = 0.0;
    double x_theta = 1.0;
    double phi = 0.0;
    double psi = 1.0;
    double eta = 0.0;
    GridFunction F;  // Richardson-combined when spec.refine

    static CgfContext build(const HawkesModel& model, double theta, const GridSpec& spec = {});
};

}  // namespace hawkes
