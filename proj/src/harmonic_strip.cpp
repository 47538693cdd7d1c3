#include "fbr/harmonic_strip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fbr/errors.hpp"

namespace fbr {

HarmonicStripFunction::HarmonicStripFunction(double period, double y0, std::vector<StripMode> modes)
    : period_(period), y0_(y0), modes_(std::move(modes)) {
    if (!(period > 0.0) || !std::isfinite(period)) throw InputError("period must be positive and finite");
    if (!std::isfinite(y0)) throw InputError("axis location must be finite");
    for (const auto& m : modes_)
        if (m.n < 1) throw InputError("strip mode index must be >= 1");
    std::sort(modes_.begin(), modes_.end(), [](const StripMode& l, const StripMode& r) { return l.n < r.n; });
}

double HarmonicStripFunction::omega(int n) const { return 2.0 * std::numbers::pi * n / period_; }

double HarmonicStripFunction::max_omega() const {
    double w = 0.0;
    for (const auto& m : modes_)
        if (m.cos_cosh != 0.0 || m.sin_cosh != 0.0 || m.cos_sinh != 0.0 || m.sin_sinh != 0.0)
            w = std::max(w, omega(m.n));
    return w;
}

void HarmonicStripFunction::check_range(double eta) const {
    const double w = max_omega();
    if (w * std::abs(eta) > guard)
        throw EvaluationRangeError("mode sum evaluated at |w*eta| = " + std::to_string(w * std::abs(eta)) +
                                   " beyond the guard " + std::to_string(guard));
}

ScalarJet HarmonicStripFunction::jet(double x, double y) const {
    const double eta = y - y0_;
    check_range(eta);
    ScalarJet j;
    // Polynomial part.
    j.value = constant + slope_x * x + slope_y * eta + drift * x * eta + quad * (x * x - eta * eta);
    j.dx = slope_x + drift * eta + 2.0 * quad * x;
    j.dy = slope_y + drift * x - 2.0 * quad * eta;
    j.dxx = 2.0 * quad;
    j.dxy = drift;
    j.dyy = -2.0 * quad;
    for (const auto& m : modes_) {
        const double w = omega(m.n);
        const double c = std::cos(w * x), s = std::sin(w * x);
        const double ch = std::cosh(w * eta), sh = std::sinh(w * eta);
        // U = cos-part combination, V = its x-derivative / w.
        const double pc = m.cos_cosh * c + m.sin_cosh * s;   // multiplies cosh
        const double ps = m.cos_sinh * c + m.sin_sinh * s;   // multiplies sinh / w
        const double pc_x = w * (-m.cos_cosh * s + m.sin_cosh * c);
        const double ps_x = w * (-m.cos_sinh * s + m.sin_sinh * c);
        j.value += ch * pc + sh / w * ps;
        j.dx += ch * pc_x + sh / w * ps_x;
        j.dy += w * sh * pc + ch * ps;
        j.dxx += -w * w * (ch * pc + sh / w * ps);
        j.dxy += w * sh * pc_x + ch * ps_x;
        j.dyy += w * w * (ch * pc + sh / w * ps);
    }
    return j;
}

double HarmonicStripFunction::evaluate(double x, double y) const { return jet(x, y).value; }

std::array<double, 2> HarmonicStripFunction::gradient(double x, double y) const {
    const auto j = jet(x, y);
    return {j.dx, j.dy};
}

HarmonicStripFunction& HarmonicStripFunction::operator+=(const HarmonicStripFunction& o) {
    if (std::abs(period_ - o.period_) > 1e-12 * std::max(period_, o.period_))
        throw InputError("period mismatch in harmonic function sum");
    if (std::abs(y0_ - o.y0_) > 1e-14 * std::max(1.0, std::abs(y0_)))
        throw InputError("axis mismatch in harmonic function sum");
    for (const auto& m : o.modes_) {
        auto it = std::find_if(modes_.begin(), modes_.end(), [&](const StripMode& e) { return e.n == m.n; });
        if (it == modes_.end()) {
            modes_.push_back(m);
        } else {
            it->cos_cosh += m.cos_cosh;
            it->sin_cosh += m.sin_cosh;
            it->cos_sinh += m.cos_sinh;
            it->sin_sinh += m.sin_sinh;
        }
    }
    std::sort(modes_.begin(), modes_.end(), [](const StripMode& l, const StripMode& r) { return l.n < r.n; });
    constant += o.constant;
    slope_x += o.slope_x;
    slope_y += o.slope_y;
    drift += o.drift;
    quad += o.quad;
    guard = std::min(guard, o.guard);
    return *this;
}

HarmonicStripFunction& HarmonicStripFunction::operator*=(double s) {
    for (auto& m : modes_) {
        m.cos_cosh *= s;
        m.sin_cosh *= s;
        m.cos_sinh *= s;
        m.sin_sinh *= s;
    }
    constant *= s;
    slope_x *= s;
    slope_y *= s;
    drift *= s;
    quad *= s;
    return *this;
}

HarmonicStripFunction operator+(HarmonicStripFunction lhs, const HarmonicStripFunction& rhs) { return lhs += rhs; }
HarmonicStripFunction operator*(double s, HarmonicStripFunction h) { return h *= s; }

HarmonicStripFunction solve_cauchy_neumann(const TrigPolynomial& f, double y0) {
    f.validate();
    std::vector<StripMode> modes;
    for (int n = 1; n <= f.degree(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        if (f.a[i] == 0.0 && f.b[i] == 0.0) continue;
        modes.push_back({n, 0.0, 0.0, f.a[i], f.b[i]});
    }
    HarmonicStripFunction h(f.period, y0, std::move(modes));
    h.slope_y = 0.5 * f.a[0];
    h.drift = f.drift;
    return h;
}

HarmonicStripFunction solve_cauchy_dirichlet(const TrigPolynomial& g, double y0) {
    g.validate();
    std::vector<StripMode> modes;
    for (int n = 1; n <= g.degree(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        if (g.a[i] == 0.0 && g.b[i] == 0.0) continue;
        modes.push_back({n, g.a[i], g.b[i], 0.0, 0.0});
    }
    HarmonicStripFunction h(g.period, y0, std::move(modes));
    h.constant = 0.5 * g.a[0];
    h.slope_x = g.drift;
    return h;
}

HarmonicStripFunction solve_cauchy(const CauchyData& data) {
    if (std::abs(data.g.period - data.f.period) > 1e-12 * std::max(data.g.period, data.f.period))
        throw InputError("Cauchy data g and f have different periods");
    return solve_cauchy_dirichlet(data.g, data.y0) + solve_cauchy_neumann(data.f, data.y0);
}

HarmonicStripFunction conjugate_harmonic(const HarmonicStripFunction& h) {
    std::vector<StripMode> modes;
    modes.reserve(h.modes().size());
    for (const auto& m : h.modes()) {
        const double w = h.omega(m.n);
        StripMode c;
        c.n = m.n;
        c.cos_cosh = -m.sin_sinh / w;
        c.sin_cosh = m.cos_sinh / w;
        c.cos_sinh = -m.sin_cosh * w;
        c.sin_sinh = m.cos_cosh * w;
        modes.push_back(c);
    }
    HarmonicStripFunction out(h.period(), h.axis(), std::move(modes));
    out.guard = h.guard;
    // x -> -eta, eta -> x, x*eta -> (x^2 - eta^2)/2, (x^2 - eta^2) -> -2 x*eta.
    out.slope_x = h.slope_y;
    out.slope_y = -h.slope_x;
    out.quad = 0.5 * h.drift;
    out.drift = -2.0 * h.quad;
    out.constant = 0.0;
    out.constant = -out.evaluate(0.0, h.axis());
    return out;
}

double taylor_cauchy_evaluate(const CauchyData& data, double x, double y, double tol, int max_terms) {
    const double eta = y - data.y0;
    double sum = 0.0;
    double pow_even = 1.0;  // eta^(2k) / (2k)!
    int quiet = 0;
    for (int k = 0; k < max_terms; ++k) {
        const double pow_odd = pow_even * eta / (2.0 * k + 1.0);  // eta^(2k+1) / (2k+1)!
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double term = sign * (data.g.derivative(x, 2 * k) * pow_even + data.f.derivative(x, 2 * k) * pow_odd);
        sum += term;
        quiet = std::abs(term) < tol * std::max(1.0, std::abs(sum)) ? quiet + 1 : 0;
        if (quiet >= 2) return sum;
        pow_even = pow_odd * eta / (2.0 * k + 2.0);
    }
    throw ConvergenceError("Taylor series of the Cauchy solution did not converge");
}

}  // namespace fbr
