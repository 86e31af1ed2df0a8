#pragma once

#include "hawkes/expansion.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

// theta* = I'(x) = log(x/(nu+||h||x)) - ||h||x/(nu+||h||x) + ||h||.
double theta_star(double x, double nu, double l1);

// Rate function I(x) = x log(x/(nu+||h||x)) - x + ||h||x + nu; I(mean) = 0.
double rate(double x, double nu, double l1);

// I''(x) = nu^2 / (x (nu + ||h||x)^2).
double rate_d2(double x, double nu, double l1);

// I^(i)(x) = (i-2)! (-1)^{i-2} x^{1-i} ((i-1)y^i - i y^{i-1} + 1), y = ||h||x/(nu+||h||x).
double rate_dk(double x, double nu, double l1, int i);

// LLN mean nu/(1-||h||) and CLT variance coefficient nu/(1-||h||)^3.
double mean_rate(const HawkesModel& model);
double asymptotic_var(const HawkesModel& model);

// eta'(0), eta''(0), eta'''(0) = nu/(1-L), nu/(1-L)^3, nu(1+2L)/(1-L)^5.
struct EtaMoments {
    double d1, d2, d3;
};
EtaMoments eta_moments(const HawkesModel& model);

struct SaddleData {
    double x = 0.0;
    double theta_star = 0.0;
    double rate = 0.0;
    double rate_d2 = 0.0;
    double mean = 0.0;
};
SaddleData saddle(const HawkesModel& model, double x);

// P(N_t >= xt) ~ e^{-tI} sqrt(I''/(2 pi t)) (1-e^{-theta*})^{-1} (psi + b_1/t + ...).
// order_v = 1 keeps psi alone; order_v = 2 adds b_1/t. Requires x > mean.
double ldp_tail(const ExpansionContext& ctx, double t, int order_v = 2);
double ldp_tail(const HawkesModel& model, double t, double x, int order_v = 2,
                const GridSpec& spec = {});

// P(N_t = xt) ~ e^{-tI} sqrt(I''/(2 pi t)) (psi + a_1/t + ...); t*x must be an
// integer within 1e-9 (LatticeError otherwise).
double ldp_point(const ExpansionContext& ctx, double t, int order_v = 2);
double ldp_point(const HawkesModel& model, double t, double x, int order_v = 2,
                 const GridSpec& spec = {});

// P(N_t >= mean*t + sqrt(t)*sigma*y) ~ Phibar(y); returns the Gaussian upper tail.
double clt_tail(const HawkesModel& model, double t, double y);

// Threshold mean*t + sqrt(t * asymptotic_var) * y used by the CLT/MDP regimes.
double clt_threshold(const HawkesModel& model, double t, double y);

// Moderate-deviation tail approximations. m = 0 selects the cubic-correction form
// (1/(y sqrt(2 pi))) e^{-y^2/2} exp(eta'''(0) y^3 / (6 eta''(0)^{3/2} sqrt(t)));
// m >= 3 selects the rate-expansion form with terms i = 2..m-1.
double mdp_tail(const HawkesModel& model, double t, double y, int m = 0);

}  // namespace hawkes
