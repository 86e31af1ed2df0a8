#pragma once

#include <span>
#include <vector>

#include "hawkes/cgf.hpp"
#include "hawkes/grid_function.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

// x^(1..order)(theta*) from the implicit equation x = exp(theta + ||h||(x-1)),
// by the partition recursion; x_at_star = x(theta*). Requires x_at_star*l1 < 1
// strictly (SingularSaddleError otherwise).
std::vector<double> x_derivatives(double x_at_star, double l1, int order);

// Closed forms for x^(k)(theta), k = 1..4, from x(theta) alone:
//   x' = x/(1-Lx), x'' = x/(1-Lx)^3, x''' = x(1+2Lx)/(1-Lx)^5,
//   x'''' = x(1+8Lx+6L^2x^2)/(1-Lx)^7.
double x_derivative_closed(double x_theta, double l1, int k);

// F^(1..order)(.;theta) on the grid of F: each order solves a linear Volterra
// equation whose forcing is assembled from the lower orders.
std::vector<GridFunction> F_derivatives(const GridFunction& F, const Kernel& kernel, int order);

// psi^(0..order)(theta*) from the tail integrals Phi_j = int_0^inf (F^(j) - x^(j)),
// j = 0..order (Phi_0 = phi(theta*)).
std::vector<double> psi_derivatives(double nu, std::span<const double> phi_ladder, int order);

// Coefficients of the 1/t expansions. eta_derivs[j] = eta^(j)(theta*) for j = 0..2k+2;
// psi_derivs[j] = psi^(j)(theta*) for j = 0..2k.
double coeff_a(std::span<const double> psi_derivs, std::span<const double> eta_derivs, int k);

// b_k additionally carries the lattice factor at e^{-theta*}; normalized so that the
// tail expansion reads psi(theta*) + b_1/t + ... inside the 1/(1-e^{-theta*}) prefactor.
// theta_star = 0 is a LatticeError (the tail expansion degenerates at the mean).
double coeff_b(std::span<const double> psi_derivs, std::span<const double> eta_derivs,
               double theta_star, int k);

// Saddle-point context for level x: theta*, the x/eta/psi derivative ladders up to
// the requested order, the tail integrals, and the expansion coefficients.
struct ExpansionContext {
    double nu = 0.0;
    double l1 = 0.0;
    double level = 0.0;       // target x in P(N_t >= xt)
    double theta_star = 0.0;
    double x_star = 1.0;      // x(theta*)
    int order = 0;            // highest psi/F derivative computed

    std::vector<double> x_derivs;    // x^(1..order+2)(theta*)
    std::vector<double> eta_derivs;  // eta^(0..order+2)(theta*)
    std::vector<double> phi_ladder;  // Phi_0..order
    std::vector<double> psi_derivs;  // psi^(0..order)(theta*)
    std::vector<double> f_limits;    // F^(j)(T_max) for j = 0..order (diagnostics)
    std::vector<double> a;           // a_1..a_{order/2}
    std::vector<double> b;           // b_1..b_{order/2}; empty when theta* <= 0

    double psi() const { return psi_derivs[0]; }
    double c0() const;                 // psi(theta*) / (1 - e^{-theta*})
    double c1() const;                 // b_1 / (1 - e^{-theta*})
    GridSpec grid;

    // order = 2 supports the order-2 tail approximation (b_1); order = 2m supports b_m.
    static ExpansionContext build(const HawkesModel& model, double x, int order = 2,
                                  const GridSpec& spec = {});
};

}  // namespace hawkes
