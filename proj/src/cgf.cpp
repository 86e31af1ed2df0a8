#include "hawkes/cgf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

void check_l1(double l1) {
    if (!(l1 > 0.0 && l1 < 1.0)) throw std::domain_error("||h|| must lie in (0,1)");
}

}  // namespace

double theta_critical(double l1) {
    check_l1(l1);
    return l1 - 1.0 - std::log(l1);
}

double solve_x(double theta, double l1) {
    check_l1(l1);
    const double hi0 = 1.0 / l1;
    auto g = [&](double v) { return v - std::exp(theta + l1 * (v - 1.0)); };
    if (g(hi0) < 0.0)
        throw NoRealRootError("no real solution: theta = " + std::to_string(theta) +
                              " exceeds theta_c = " + std::to_string(theta_critical(l1)));
    double lo = theta >= 0.0 ? 1.0 : 0.0;
    double hi = hi0;
    if (g(lo) > 0.0) lo = 0.0;  // guards theta == 0 edge where g(1) == 0
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi0; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    // Newton polish; abandoned near the tangency at theta_c where g' ~ 0
    for (int it = 0; it < 8; ++it) {
        double e = std::exp(theta + l1 * (x - 1.0));
        double gp = 1.0 - l1 * e;
        if (std::abs(gp) < 1e-6) break;
        double step = (x - e) / gp;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, x)) break;
    }
    x = std::clamp(x, 0.0, hi0);
    if (std::abs(x - std::exp(theta + l1 * (x - 1.0))) > 1e-12 * std::max(1.0, x))
        throw DivergedError("solve_x: residual above tolerance");
    return x;
}

namespace {

std::vector<double> kernel_grid(const Kernel& k, double step, std::size_t n) {
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = k.eval(static_cast<double>(i) * step);
    return h;
}

GridFunction solve_F_impl(double theta, const Kernel& kernel, double step, double horizon) {
    if (!(step > 0.0) || !(horizon > step)) throw std::invalid_argument("bad grid for solve_F");
    if (!(theta < theta_critical(kernel.l1_norm())))
        throw NoRealRootError("solve_F requires theta < theta_c");
    const std::size_t n = GridFunction::points_for(step, horizon);
    const std::vector<double> h = kernel_grid(kernel, step, n);
    const double bound = 1.0 / kernel.l1_norm() * (1.0 + 1e-9);
    const double c = 0.5 * step * h[0];

    GridFunction F;
    F.step = step;
    F.horizon = static_cast<double>(n - 1) * step;
    F.values.resize(static_cast<Eigen::Index>(n));
    double* f = F.values.data();
    f[0] = std::exp(theta);
    for (std::size_t i = 1; i < n; ++i) {
        double s = 0.5 * h[i] * (f[0] - 1.0);
        for (std::size_t j = 1; j < i; ++j) s += h[j] * (f[i - j] - 1.0);
        const double known = theta + step * s;
        double u = f[i - 1];
        bool ok = false;
        for (int it = 0; it < 200; ++it) {
            double v = std::exp(known + c * (u - 1.0));
            if (std::abs(v - u) < 1e-14 * std::max(1.0, std::abs(v))) {
                u = v;
                ok = true;
                break;
            }
            u = v;
        }
        if (!ok || !std::isfinite(u))
            throw DivergedError("solve_F: fixed-point iteration failed at t = " +
                                std::to_string(static_cast<double>(i) * step));
        if (!(u > 0.0) || u > bound)
            throw DivergedError("solve_F: solution left (0, 1/||h||] at t = " +
                                std::to_string(static_cast<double>(i) * step));
        f[i] = u;
    }
    return F;
}

struct TailFit {
    double correction = 0.0;
    bool usable = true;
};

// Fit the decaying remainder q on its last resolvable decade and integrate the
// fitted model beyond the horizon. Geometric and power models are both tried.
TailFit fit_tail(const Eigen::ArrayXd& q, double step, double horizon) {
    const Eigen::Index n = q.size();
    const double scale = std::max(1.0, q.abs().maxCoeff());
    const double floor = 1e-12 * scale;

    Eigen::Index imax = -1;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (std::abs(q[i]) > floor) {
            imax = i;
            break;
        }
    }
    if (imax < 30) return {0.0, true};  // tail already at/below noise
    Eigen::Index ilo = std::max<Eigen::Index>(imax / 10, 1);
    const double sgn = q[imax] > 0.0 ? 1.0 : -1.0;
    for (Eigen::Index i = imax; i >= ilo; --i) {
        if (q[i] * sgn <= 0.0) {
            ilo = i + 1;
            break;
        }
    }
    if (imax - ilo < 30) return {0.0, std::abs(q[imax]) < 1e-4 * scale};

    double sw = 0, sx1 = 0, sx2 = 0, sy = 0, sx1y = 0, sx2y = 0, sx1x1 = 0, sx2x2 = 0;
    for (Eigen::Index i = ilo; i <= imax; ++i) {
        double s = static_cast<double>(i) * step;
        double y = std::log(std::abs(q[i]));
        double x2 = std::log1p(s);
        sw += 1;
        sx1 += s;
        sx2 += x2;
        sy += y;
        sx1y += s * y;
        sx2y += x2 * y;
        sx1x1 += s * s;
        sx2x2 += x2 * x2;
    }
    // least squares y = a + b*x for each model
    auto fit = [&](double sx, double sxx, double sxy) {
        double denom = sw * sxx - sx * sx;
        double b = (sw * sxy - sx * sy) / denom;
        double a = (sy - b * sx) / sw;
        return std::pair<double, double>(a, b);
    };
    auto [ag, bg] = fit(sx1, sx1x1, sx1y);
    auto [ap, bp] = fit(sx2, sx2x2, sx2y);
    double rms_g = 0, rms_p = 0;
    for (Eigen::Index i = ilo; i <= imax; ++i) {
        double s = static_cast<double>(i) * step;
        double y = std::log(std::abs(q[i]));
        rms_g += (ag + bg * s - y) * (ag + bg * s - y);
        rms_p += (ap + bp * std::log1p(s) - y) * (ap + bp * std::log1p(s) - y);
    }
    rms_g = std::sqrt(rms_g / sw);
    rms_p = std::sqrt(rms_p / sw);

    const bool geom_ok = bg < 0.0;
    const bool pow_ok = bp < -1.0;
    if (!geom_ok && !pow_ok) {
        // A flat remainder is the discretization floor (the discrete solution levels
        // off slightly away from the continuum limit), not an unresolved tail. Only a
        // sizable remainder that still decays -- too slowly to integrate -- means the
        // horizon is genuinely too short.
        const bool slow_decay = rms_p < rms_g && bp < -0.05 && bp >= -1.0;
        return {0.0, !(slow_decay && std::abs(q[imax]) > 1e-6 * scale)};
    }
    double corr;
    if (pow_ok && (!geom_ok || rms_p < rms_g))
        corr = sgn * std::exp(ap) * std::pow(1.0 + horizon, bp + 1.0) / (-bp - 1.0);
    else
        corr = sgn * std::exp(ag + bg * horizon) / (-bg);
    return {corr, true};
}

}  // namespace

GridFunction solve_F(double theta, const Kernel& kernel, double step, double horizon) {
    return solve_F_impl(theta, kernel, step, horizon);
}

double integrate_to_limit(const GridFunction& g, double limit) {
    Eigen::ArrayXd q = g.values - limit;
    double base = g.step * (q.sum() - 0.5 * (q[0] + q[q.size() - 1]));
    TailFit tf = fit_tail(q, g.step, g.horizon);
    if (!tf.usable)
        throw HorizonError("tail of the integrand not resolvable within the horizon; "
                           "increase T_max");
    return base + tf.correction;
}

double compute_phi(double theta, const Kernel& kernel, double step, double horizon) {
    if (horizon <= 0.0) horizon = kernel.default_horizon();
    if (theta == 0.0) return 0.0;
    GridFunction F = solve_F_impl(theta, kernel, step, horizon);
    return integrate_to_limit(F, solve_x(theta, kernel.l1_norm()));
}

double compute_psi(double theta, const Kernel& kernel, double nu, double step, double horizon) {
    return std::exp(nu * compute_phi(theta, kernel, step, horizon));
}

double compute_eta(double theta, double nu, double l1) {
    return nu * (solve_x(theta, l1) - 1.0);
}

CgfContext CgfContext::build(const HawkesModel& model, double theta, const GridSpec& spec) {
    const double l1 = model.kernel.l1_norm();
    CgfContext ctx;
    ctx.theta = theta;
    ctx.theta_c = theta_critical(l1);
    if (!(theta < ctx.theta_c))
        throw NoRealRootError("CgfContext requires theta < theta_c strictly");
    ctx.x_theta = solve_x(theta, l1);
    if (theta >= 0.0 && ctx.x_theta < 1.0 - 1e-12)
        throw DivergedError("x(theta) < 1 for nonnegative theta");

    const double horizon = spec.horizon_for(model.kernel);
    GridFunction coarse = solve_F_impl(theta, model.kernel, spec.step, horizon);
    if (spec.refine) {
        GridFunction fine = solve_F_impl(theta, model.kernel, 0.5 * spec.step, horizon);
        for (Eigen::Index i = 0; i < coarse.values.size(); ++i)
            coarse.values[i] = (4.0 * fine.values[2 * i] - coarse.values[i]) / 3.0;
    }
    ctx.F = std::move(coarse);
    ctx.phi = theta == 0.0 ? 0.0 : integrate_to_limit(ctx.F, ctx.x_theta);
    ctx.psi = std::exp(model.nu * ctx.phi);
    ctx.eta = model.nu * (ctx.x_theta - 1.0);
    return ctx;
}

}  // namespace hawkes
