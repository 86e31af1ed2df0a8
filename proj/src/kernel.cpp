#include "hawkes/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

void check_time(double t) {
    if (!(t >= 0.0)) throw std::domain_error("kernel evaluated at negative time");
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double t) {
    if (t >= xs.back()) return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), t);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (i == 0) return ys.front();
    double w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

Kernel Kernel::exponential(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("exponential kernel needs alpha > 0, beta > 0");
    double l1 = alpha / beta;
    if (l1 >= 1.0)
        throw InstabilityError("exponential kernel unstable: ||h|| = " + std::to_string(l1));
    return Kernel(ExponentialKernel{alpha, beta}, l1);
}

Kernel Kernel::power_law(double c, double p) {
    if (!(c > 0.0)) throw std::invalid_argument("power-law kernel needs c > 0");
    if (!(p > 2.0)) throw std::invalid_argument("power-law kernel needs p > 2 (finite first moment)");
    double l1 = c / (p - 1.0);
    if (l1 >= 1.0)
        throw InstabilityError("power-law kernel unstable: ||h|| = " + std::to_string(l1));
    return Kernel(PowerLawKernel{c, p}, l1);
}

Kernel Kernel::tabulated(std::vector<double> t, std::vector<double> h, double l1_norm,
                         std::vector<double> tail) {
    if (t.size() < 2 || t.size() != h.size())
        throw std::invalid_argument("tabulated kernel needs matching t/h grids with >= 2 nodes");
    if (t.front() != 0.0) throw std::invalid_argument("tabulated kernel grid must start at t = 0");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0 && !(t[i] > t[i - 1]))
            throw std::invalid_argument("tabulated kernel grid must be strictly increasing");
        if (!(h[i] >= 0.0)) throw std::invalid_argument("tabulated kernel values must be nonnegative");
    }
    if (!(l1_norm > 0.0)) throw std::invalid_argument("tabulated kernel needs l1_norm > 0");
    if (l1_norm >= 1.0)
        throw InstabilityError("tabulated kernel unstable: ||h|| = " + std::to_string(l1_norm));

    if (tail.empty()) {
        // Derive the tail assuming the grid carries all of the mass.
        double total = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i)
            total += 0.5 * (h[i] + h[i - 1]) * (t[i] - t[i - 1]);
        if (std::abs(total - l1_norm) > 1e-6 * l1_norm)
            throw std::invalid_argument(
                "tabulated kernel: grid integral disagrees with l1_norm; supply tail values");
        tail.resize(t.size());
        double acc = l1_norm;
        tail[0] = l1_norm;
        for (std::size_t i = 1; i < t.size(); ++i) {
            acc -= 0.5 * (h[i] + h[i - 1]) * (t[i] - t[i - 1]);
            tail[i] = std::max(acc, 0.0);
        }
    } else {
        if (tail.size() != t.size())
            throw std::invalid_argument("tabulated kernel tail grid must match t grid");
        if (std::abs(tail.front() - l1_norm) > 1e-8 * l1_norm)
            throw std::invalid_argument("tabulated kernel tail(0) must equal l1_norm");
        for (std::size_t i = 1; i < tail.size(); ++i)
            if (tail[i] > tail[i - 1] + 1e-12)
                throw std::invalid_argument("tabulated kernel tail must be nonincreasing");
    }

    Kernel k(TabulatedKernel{std::move(t), std::move(h), l1_norm, std::move(tail)}, l1_norm);
    const auto& tk = std::get<TabulatedKernel>(k.impl_);
    k.envelope_.resize(tk.h.size());
    double m = 0.0;
    for (std::size_t i = tk.h.size(); i-- > 0;) {
        m = std::max(m, tk.h[i]);
        k.envelope_[i] = m;
    }
    return k;
}

double Kernel::eval(double t) const {
    check_time(t);
    if (const auto* e = std::get_if<ExponentialKernel>(&impl_)) return e->alpha * std::exp(-e->beta * t);
    if (const auto* p = std::get_if<PowerLawKernel>(&impl_)) return p->c * std::pow(1.0 + t, -p->p);
    const auto& tk = std::get<TabulatedKernel>(impl_);
    return interp(tk.t, tk.h, t);
}

double Kernel::tail(double t) const {
    check_time(t);
    if (const auto* e = std::get_if<ExponentialKernel>(&impl_)) return l1_ * std::exp(-e->beta * t);
    if (const auto* p = std::get_if<PowerLawKernel>(&impl_)) return l1_ * std::pow(1.0 + t, 1.0 - p->p);
    const auto& tk = std::get<TabulatedKernel>(impl_);
    return interp(tk.t, tk.tail, t);
}

double Kernel::envelope(double t) const {
    check_time(t);
    if (!std::holds_alternative<TabulatedKernel>(impl_)) return eval(t);
    const auto& tk = std::get<TabulatedKernel>(impl_);
    if (t >= tk.t.back()) return 0.0;
    auto it = std::upper_bound(tk.t.begin(), tk.t.end(), t);
    std::size_t i = static_cast<std::size_t>(it - tk.t.begin());
    return envelope_[i == 0 ? 0 : i - 1];
}

double Kernel::sample_offset(double u) const {
    if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("sample_offset needs u in [0,1)");
    if (const auto* e = std::get_if<ExponentialKernel>(&impl_)) return -std::log1p(-u) / e->beta;
    if (const auto* p = std::get_if<PowerLawKernel>(&impl_))
        return std::pow(1.0 - u, -1.0 / (p->p - 1.0)) - 1.0;
    // tabulated: invert the survival function tail(t)/l1 by bisection on the grid
    const auto& tk = std::get<TabulatedKernel>(impl_);
    double target = (1.0 - u) * l1_;
    if (target <= tk.tail.back()) return tk.t.back();
    std::size_t lo = 0, hi = tk.t.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        (tk.tail[mid] >= target ? lo : hi) = mid;
    }
    double span = tk.tail[lo] - tk.tail[hi];
    double w = span > 0.0 ? (tk.tail[lo] - target) / span : 0.0;
    return tk.t[lo] + w * (tk.t[hi] - tk.t[lo]);
}

Kernel Kernel::scaled(double gamma) const {
    if (!(gamma > 0.0)) throw std::invalid_argument("kernel scale factor must be positive");
    if (gamma * l1_ >= 1.0)
        throw InstabilityError("tilted kernel unstable: gamma*||h|| = " + std::to_string(gamma * l1_));
    if (const auto* e = std::get_if<ExponentialKernel>(&impl_))
        return exponential(gamma * e->alpha, e->beta);
    if (const auto* p = std::get_if<PowerLawKernel>(&impl_)) return power_law(gamma * p->c, p->p);
    const auto& tk = std::get<TabulatedKernel>(impl_);
    std::vector<double> h = tk.h, tail = tk.tail;
    for (auto& v : h) v *= gamma;
    for (auto& v : tail) v *= gamma;
    return tabulated(tk.t, std::move(h), gamma * l1_, std::move(tail));
}

double Kernel::default_horizon() const {
    if (std::holds_alternative<ExponentialKernel>(impl_)) return 60.0;
    if (std::holds_alternative<PowerLawKernel>(impl_)) return 240.0;
    return std::max(60.0, 4.0 * std::get<TabulatedKernel>(impl_).t.back());
}

}  // namespace hawkes
