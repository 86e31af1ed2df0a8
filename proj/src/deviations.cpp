#include "hawkes/deviations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hawkes/errors.hpp"
#include "hawkes/partitions.hpp"

namespace hawkes {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_level(double x) {
    if (!(x > 0.0)) throw std::domain_error("level x must be positive");
}

void check_l1_range(double l1) {
    if (!(l1 >= 0.0 && l1 < 1.0)) throw std::domain_error("||h|| must lie in [0,1)");
}

}  // namespace

double theta_star(double x, double nu, double l1) {
    check_level(x);
    check_l1_range(l1);
    const double ratio = x / (nu + l1 * x);
    return std::log(ratio) - l1 * ratio + l1;
}

double rate(double x, double nu, double l1) {
    check_level(x);
    check_l1_range(l1);
    return x * std::log(x / (nu + l1 * x)) - x + l1 * x + nu;
}

double rate_d2(double x, double nu, double l1) {
    check_level(x);
    check_l1_range(l1);
    const double a = nu + l1 * x;
    return nu * nu / (x * a * a);
}

double rate_dk(double x, double nu, double l1, int i) {
    check_level(x);
    check_l1_range(l1);
    if (i < 2) throw std::invalid_argument("rate_dk supports derivative order i >= 2");
    const double y = l1 * x / (nu + l1 * x);
    double s = (i - 1) * std::pow(y, i) - i * std::pow(y, i - 1) + 1.0;
    double sign = ((i - 2) % 2) ? -1.0 : 1.0;
    return factorial(i - 2) * sign * std::pow(x, 1 - i) * s;
}

double mean_rate(const HawkesModel& model) { return model.nu / (1.0 - model.kernel.l1_norm()); }

double asymptotic_var(const HawkesModel& model) {
    return model.nu / std::pow(1.0 - model.kernel.l1_norm(), 3);
}

EtaMoments eta_moments(const HawkesModel& model) {
    const double l1 = model.kernel.l1_norm();
    const double d = 1.0 - l1;
    return {model.nu / d, model.nu / (d * d * d), model.nu * (1.0 + 2.0 * l1) / std::pow(d, 5)};
}

SaddleData saddle(const HawkesModel& model, double x) {
    const double l1 = model.kernel.l1_norm();
    return {x, theta_star(x, model.nu, l1), rate(x, model.nu, l1), rate_d2(x, model.nu, l1),
            mean_rate(model)};
}

namespace {

double ldp_prefactor(const ExpansionContext& ctx, double t) {
    const double I = rate(ctx.level, ctx.nu, ctx.l1);
    const double I2 = rate_d2(ctx.level, ctx.nu, ctx.l1);
    return std::exp(-t * I) * std::sqrt(I2 / (kTwoPi * t));
}

}  // namespace

double ldp_tail(const ExpansionContext& ctx, double t, int order_v) {
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (order_v < 1) throw std::invalid_argument("order_v must be >= 1");
    if (!(ctx.theta_star > 0.0))
        throw std::domain_error("ldp_tail requires x above the LLN mean (theta* > 0)");
    if (static_cast<int>(ctx.b.size()) < order_v - 1)
        throw std::invalid_argument("context does not carry b_1..b_" + std::to_string(order_v - 1) +
                                    "; build with order >= " + std::to_string(2 * (order_v - 1)));
    double series = ctx.psi();
    double tp = t;
    for (int k = 1; k < order_v; ++k, tp *= t) series += ctx.b[k - 1] / tp;
    return ldp_prefactor(ctx, t) / (1.0 - std::exp(-ctx.theta_star)) * series;
}

double ldp_tail(const HawkesModel& model, double t, double x, int order_v, const GridSpec& spec) {
    return ldp_tail(ExpansionContext::build(model, x, 2 * std::max(order_v - 1, 0), spec), t,
                    order_v);
}

double ldp_point(const ExpansionContext& ctx, double t, int order_v) {
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (order_v < 1) throw std::invalid_argument("order_v must be >= 1");
    const double tx = t * ctx.level;
    if (std::abs(tx - std::round(tx)) > 1e-9)
        throw LatticeError("ldp_point needs t*x integer; got " + std::to_string(tx));
    if (static_cast<int>(ctx.a.size()) < order_v - 1)
        throw std::invalid_argument("context does not carry a_1..a_" + std::to_string(order_v - 1));
    double series = ctx.psi();
    double tp = t;
    for (int k = 1; k < order_v; ++k, tp *= t) series += ctx.a[k - 1] / tp;
    return ldp_prefactor(ctx, t) * series;
}

double ldp_point(const HawkesModel& model, double t, double x, int order_v, const GridSpec& spec) {
    return ldp_point(ExpansionContext::build(model, x, 2 * std::max(order_v - 1, 0), spec), t,
                     order_v);
}

double clt_tail(const HawkesModel& model, double t, double y) {
    (void)model;
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    return 0.5 * std::erfc(y / std::sqrt(2.0));
}

double clt_threshold(const HawkesModel& model, double t, double y) {
    return mean_rate(model) * t + std::sqrt(t * asymptotic_var(model)) * y;
}

double mdp_tail(const HawkesModel& model, double t, double y, int m) {
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (!(y > 0.0)) throw std::domain_error("mdp_tail requires y > 0");
    const double gauss = std::exp(-0.5 * y * y) / (y * std::sqrt(kTwoPi));
    const EtaMoments em = eta_moments(model);
    if (m == 0) {
        // cubic correction to the Gaussian tail
        return gauss * std::exp(em.d3 * y * y * y / (6.0 * std::pow(em.d2, 1.5) * std::sqrt(t)));
    }
    if (m < 3) throw std::invalid_argument("mdp_tail: m must be 0 (cubic form) or >= 3");
    const double l1 = model.kernel.l1_norm();
    double expo = 0.0;
    for (int i = 2; i < m; ++i) {
        expo += rate_dk(em.d1, model.nu, l1, i) / factorial(i) * std::pow(em.d2, 0.5 * i) *
                std::pow(y, i) / std::pow(t, 0.5 * (i - 2));
    }
    return std::exp(-expo) / (y * std::sqrt(kTwoPi));
}

}  // namespace hawkes
