#include "hawkes/expansion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hawkes/deviations.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/partitions.hpp"

namespace hawkes {

std::vector<double> x_derivatives(double x_at_star, double l1, int order) {
    if (order < 0) throw std::invalid_argument("x_derivatives: order must be nonnegative");
    const double denom = 1.0 - l1 * x_at_star;
    if (denom <= 1e-12)
        throw SingularSaddleError("x(theta*)*||h|| at the critical boundary; ladder diverges");
    const double ratio = x_at_star / denom;

    std::vector<double> xd(order + 1);
    xd[0] = x_at_star;
    for (int k = 1; k <= order; ++k) {
        double total = 0.0;
        for (const auto& m : partitions(k).tuples) {
            if (m[k - 1] != 0) continue;  // the self-referential tuple, moved to the LHS
            double term = factorial(k) / partition_denominator(m);
            term *= std::pow(l1, tuple_sum(m));
            for (int j = 1; j <= k; ++j)
                for (int r = 0; r < m[j - 1]; ++r) term *= xd[j];
            total += term;
        }
        for (int l = 0; l < k; ++l) {
            double binom = factorial(k) / (factorial(l) * factorial(k - l));
            for (const auto& m : partitions(l).tuples) {
                double term = binom * factorial(l) / partition_denominator(m);
                term *= std::pow(l1, tuple_sum(m));
                for (int j = 1; j <= l; ++j)
                    for (int r = 0; r < m[j - 1]; ++r) term *= xd[j];
                total += term;
            }
        }
        xd[k] = ratio * total;
    }
    xd.erase(xd.begin());
    return xd;
}

double x_derivative_closed(double x_theta, double l1, int k) {
    const double d = 1.0 - l1 * x_theta;
    const double lx = l1 * x_theta;
    switch (k) {
        case 1: return x_theta / d;
        case 2: return x_theta / (d * d * d);
        case 3: return x_theta * (1.0 + 2.0 * lx) / std::pow(d, 5);
        case 4: return x_theta * (1.0 + 8.0 * lx + 6.0 * lx * lx) / std::pow(d, 7);
        default: throw std::invalid_argument("x_derivative_closed supports k = 1..4");
    }
}

namespace {

// trapezoidal convolution of a ladder grid with the kernel grid at index i
inline double conv_at(const double* f, const double* h, std::size_t i, double step) {
    if (i == 0) return 0.0;
    double s = 0.5 * (h[0] * f[i] + h[i] * f[0]);
    for (std::size_t j = 1; j < i; ++j) s += h[j] * f[i - j];
    return step * s;
}

}  // namespace

std::vector<GridFunction> F_derivatives(const GridFunction& F, const Kernel& kernel, int order) {
    if (order < 1) return {};
    const std::size_t n = F.size();
    const double step = F.step;
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = kernel.eval(F.time(i));

    std::vector<GridFunction> ladders;
    // convs[j][i] = int_0^{t_i} F^(j+1)(t_i - s) h(s) ds, filled as each order completes
    std::vector<std::vector<double>> convs;
    const double* f0 = F.values.data();

    for (int k = 1; k <= order; ++k) {
        GridFunction Fk;
        Fk.step = step;
        Fk.horizon = F.horizon;
        Fk.values.resize(static_cast<Eigen::Index>(n));
        double* fk = Fk.values.data();
        fk[0] = f0[0];
        for (std::size_t i = 1; i < n; ++i) {
            // known part of the k-th order convolution (j = 0 endpoint excluded)
            double partial = 0.5 * h[i] * fk[0];
            for (std::size_t j = 1; j < i; ++j) partial += h[j] * fk[i - j];
            partial *= step;

            // forcing assembled from the lower-order ladders
            double g = 0.0;
            for (const auto& m : partitions(k).tuples) {
                if (m[k - 1] != 0) continue;
                double term = factorial(k) / partition_denominator(m);
                for (int j = 1; j < k; ++j)
                    for (int r = 0; r < m[j - 1]; ++r) term *= convs[j - 1][i];
                g += term;
            }
            for (int l = 0; l < k; ++l) {
                double binom = factorial(k) / (factorial(l) * factorial(k - l));
                for (const auto& m : partitions(l).tuples) {
                    double term = binom * factorial(l) / partition_denominator(m);
                    for (int j = 1; j <= l; ++j)
                        for (int r = 0; r < m[j - 1]; ++r) term *= convs[j - 1][i];
                    g += term;
                }
            }
            const double denom = 1.0 - f0[i] * 0.5 * step * h[0];
            if (denom <= 0.0) throw DivergedError("F_derivatives: grid too coarse");
            fk[i] = f0[i] * (partial + g) / denom;
        }
        convs.emplace_back(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) convs.back()[i] = conv_at(fk, h.data(), i, step);
        ladders.push_back(std::move(Fk));
    }
    return ladders;
}

std::vector<double> psi_derivatives(double nu, std::span<const double> phi_ladder, int order) {
    if (static_cast<int>(phi_ladder.size()) < order + 1)
        throw std::invalid_argument("psi_derivatives: phi ladder shorter than requested order");
    std::vector<double> psi(order + 1);
    psi[0] = std::exp(nu * phi_ladder[0]);
    for (int k = 1; k <= order; ++k) {
        double s = 0.0;
        for (const auto& m : partitions(k).tuples) {
            double term = factorial(k) / partition_denominator(m);
            term *= std::pow(nu, tuple_sum(m));
            for (int j = 1; j <= k; ++j)
                for (int r = 0; r < m[j - 1]; ++r) term *= phi_ladder[j];
            s += term;
        }
        psi[k] = psi[0] * s;
    }
    return psi;
}

namespace {

// sum_{l=0}^{q} psi^(q-l)/(q-l)! sum_{S_l} (-1)^{|m|}/den(m)
//   prod_j (eta^{(j+2)} / (eta'' (j+2)(j+1)))^{m_j} * (-1)^k (2(k+|m|)-1)!! / eta''^k
double inner_sum(std::span<const double> psi, std::span<const double> eta, int q, int k) {
    const double e2 = eta[2];
    double total = 0.0;
    for (int l = 0; l <= q; ++l) {
        double block = 0.0;
        for (const auto& m : partitions(l).tuples) {
            int sm = tuple_sum(m);
            double term = ((sm % 2) ? -1.0 : 1.0) / partition_denominator(m);
            for (int j = 1; j <= l; ++j)
                for (int r = 0; r < m[j - 1]; ++r)
                    term *= eta[j + 2] / (e2 * (j + 2) * (j + 1));
            term *= ((k % 2) ? -1.0 : 1.0) * double_factorial(2 * (k + sm) - 1) / std::pow(e2, k);
            block += term;
        }
        total += psi[q - l] / factorial(q - l) * block;
    }
    return total;
}

void check_ladders(std::span<const double> psi, std::span<const double> eta, int k) {
    if (k < 1) throw std::invalid_argument("coefficient order k must be >= 1");
    if (static_cast<int>(psi.size()) < 2 * k + 1)
        throw std::invalid_argument("psi ladder needs orders 0..2k");
    if (static_cast<int>(eta.size()) < 2 * k + 3)
        throw std::invalid_argument("eta ladder needs orders 0..2k+2");
}

}  // namespace

double coeff_a(std::span<const double> psi_derivs, std::span<const double> eta_derivs, int k) {
    check_ladders(psi_derivs, eta_derivs, k);
    return inner_sum(psi_derivs, eta_derivs, 2 * k, k);
}

double coeff_b(std::span<const double> psi_derivs, std::span<const double> eta_derivs,
               double theta_star, int k) {
    check_ladders(psi_derivs, eta_derivs, k);
    if (!(theta_star > 0.0))
        throw LatticeError("b_k requires theta* > 0: tail expansion undefined at the mean");
    const double u = std::exp(-theta_star);
    double total = 0.0;
    for (int n = 0; n <= 2 * k; ++n) {
        double lattice = 0.0;
        for (const auto& m : partitions(n).tuples) {
            int sm = tuple_sum(m);
            double term = std::pow(u, sm) * factorial(sm) * std::pow(1.0 - u, -sm - 1) /
                          partition_denominator(m);
            term *= ((n % 2) ? -1.0 : 1.0);  // prod_j (-1)^{j m_j} = (-1)^n
            lattice += term;
        }
        total += lattice * inner_sum(psi_derivs, eta_derivs, 2 * k - n, k);
    }
    // normalized so the tail series starts at psi(theta*) inside the 1/(1-u) prefactor
    return (1.0 - u) * total;
}

double ExpansionContext::c0() const {
    return psi_derivs[0] / (1.0 - std::exp(-theta_star));
}

double ExpansionContext::c1() const {
    if (b.empty()) throw std::logic_error("context built without b_1");
    return b[0] / (1.0 - std::exp(-theta_star));
}

ExpansionContext ExpansionContext::build(const HawkesModel& model, double x, int order,
                                         const GridSpec& spec) {
    if (order < 0 || order % 2 != 0)
        throw std::invalid_argument("expansion order must be a nonnegative even number");
    if (!(x > 0.0)) throw std::domain_error("level x must be positive");

    ExpansionContext ctx;
    ctx.nu = model.nu;
    ctx.l1 = model.kernel.l1_norm();
    ctx.level = x;
    ctx.order = order;
    ctx.grid = spec;
    ctx.theta_star = hawkes::theta_star(x, model.nu, ctx.l1);
    ctx.x_star = x / (model.nu + ctx.l1 * x);

    ctx.x_derivs = x_derivatives(ctx.x_star, ctx.l1, order + 2);
    ctx.eta_derivs.resize(order + 3);
    ctx.eta_derivs[0] = model.nu * (ctx.x_star - 1.0);
    for (int j = 1; j <= order + 2; ++j) ctx.eta_derivs[j] = model.nu * ctx.x_derivs[j - 1];

    const double horizon = spec.horizon_for(model.kernel);
    GridFunction F = solve_F(ctx.theta_star, model.kernel, spec.step, horizon);
    std::vector<GridFunction> lads = F_derivatives(F, model.kernel, order);
    if (spec.refine) {
        GridFunction Ff = solve_F(ctx.theta_star, model.kernel, 0.5 * spec.step, horizon);
        std::vector<GridFunction> ladsf = F_derivatives(Ff, model.kernel, order);
        auto combine = [](GridFunction& c, const GridFunction& f) {
            for (Eigen::Index i = 0; i < c.values.size(); ++i)
                c.values[i] = (4.0 * f.values[2 * i] - c.values[i]) / 3.0;
        };
        combine(F, Ff);
        for (int j = 0; j < order; ++j) combine(lads[j], ladsf[j]);
    }

    ctx.phi_ladder.resize(order + 1);
    ctx.f_limits.resize(order + 1);
    ctx.phi_ladder[0] = integrate_to_limit(F, ctx.x_star);
    ctx.f_limits[0] = F.back();
    for (int j = 1; j <= order; ++j) {
        ctx.phi_ladder[j] = integrate_to_limit(lads[j - 1], ctx.x_derivs[j - 1]);
        ctx.f_limits[j] = lads[j - 1].back();
    }
    ctx.psi_derivs = psi_derivatives(model.nu, ctx.phi_ladder, order);

    for (int k = 1; 2 * k <= order; ++k) {
        ctx.a.push_back(coeff_a(ctx.psi_derivs, ctx.eta_derivs, k));
        if (ctx.theta_star > 0.0)
            ctx.b.push_back(coeff_b(ctx.psi_derivs, ctx.eta_derivs, ctx.theta_star, k));
    }
    return ctx;
}

}  // namespace hawkes
