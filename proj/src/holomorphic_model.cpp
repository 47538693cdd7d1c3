#include "fbr/holomorphic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbr/errors.hpp"

namespace fbr {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx ipow(cplx z, int n) {
    cplx r{1.0, 0.0};
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

double falling(int j, int n) {  // j (j-1) ... (j-n+1)
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= static_cast<double>(j - k);
    return r;
}

}  // namespace

double HolomorphicModel::max_omega() const {
    double w = 0.0;
    for (const auto& m : modes)
        if (m.coeff != cplx{}) w = std::max(w, std::abs(m.omega));
    if (resonant_coeff != cplx{}) w = std::max(w, std::abs(resonant_omega));
    return w;
}

void HolomorphicModel::check_range(cplx z) const {
    const double w = max_omega();
    if (w * std::abs(z.imag()) > guard)
        throw EvaluationRangeError("holomorphic model evaluated at |w*Y| = " + std::to_string(w * std::abs(z.imag())) +
                                   " beyond the guard " + std::to_string(guard));
}

ComplexJet HolomorphicModel::jet(cplx z) const {
    check_range(z);
    ComplexJet j{};
    for (const auto& m : modes) {
        const cplx e = m.coeff * std::exp(kI * m.omega * z);
        const cplx iw = kI * m.omega;
        j.value += e;
        j.d1 += iw * e;
        j.d2 += iw * iw * e;
    }
    // Horner for the polynomial and its first two derivatives.
    cplx p{}, dp{}, ddp{};
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + *it;
    }
    j.value += p;
    j.d1 += dp;
    j.d2 += ddp;
    if (resonant_coeff != cplx{}) {
        const cplx is = kI * resonant_omega;
        const cplx e = resonant_coeff * std::exp(is * z);
        j.value += z * e;
        j.d1 += e * (1.0 + is * z);
        j.d2 += e * (2.0 * is + is * is * z);
    }
    return j;
}

cplx HolomorphicModel::derivative_n(cplx z, int n) const {
    if (n < 0) throw InputError("derivative order must be >= 0");
    check_range(z);
    cplx s{};
    for (const auto& m : modes) s += m.coeff * ipow(kI * m.omega, n) * std::exp(kI * m.omega * z);
    for (std::size_t j = static_cast<std::size_t>(n); j < poly.size(); ++j)
        s += poly[j] * falling(static_cast<int>(j), n) * ipow(z, static_cast<int>(j) - n);
    if (resonant_coeff != cplx{}) {
        // d^n/dz^n (z e^{isz}) = e^{isz} ((is)^n z + n (is)^(n-1)).
        const cplx is = kI * resonant_omega;
        const cplx lower = n > 0 ? static_cast<double>(n) * ipow(is, n - 1) : cplx{};
        s += resonant_coeff * std::exp(is * z) * (ipow(is, n) * z + lower);
    }
    return s;
}

void HolomorphicModel::canonicalize(double omega_tol) {
    std::sort(modes.begin(), modes.end(), [](const ComplexMode& l, const ComplexMode& r) { return l.omega < r.omega; });
    std::vector<ComplexMode> merged;
    for (const auto& m : modes) {
        if (!merged.empty() && std::abs(merged.back().omega - m.omega) <= omega_tol * std::max(1.0, std::abs(m.omega)))
            merged.back().coeff += m.coeff;
        else
            merged.push_back(m);
    }
    std::erase_if(merged, [](const ComplexMode& m) { return m.coeff == cplx{}; });
    modes = std::move(merged);
    while (!poly.empty() && poly.back() == cplx{}) poly.pop_back();
}

HolomorphicModel& HolomorphicModel::operator+=(const HolomorphicModel& o) {
    modes.insert(modes.end(), o.modes.begin(), o.modes.end());
    if (poly.size() < o.poly.size()) poly.resize(o.poly.size());
    for (std::size_t j = 0; j < o.poly.size(); ++j) poly[j] += o.poly[j];
    if (o.resonant_coeff != cplx{}) {
        if (resonant_coeff != cplx{} && std::abs(resonant_omega - o.resonant_omega) > 1e-12)
            throw InputError("cannot add resonant terms of different frequency");
        resonant_omega = o.resonant_omega;
        resonant_coeff += o.resonant_coeff;
    }
    guard = std::min(guard, o.guard);
    if (period == 0.0) period = o.period;
    canonicalize();
    return *this;
}

HolomorphicModel& HolomorphicModel::operator*=(cplx s) {
    for (auto& m : modes) m.coeff *= s;
    for (auto& p : poly) p *= s;
    resonant_coeff *= s;
    return *this;
}

HolomorphicModel& HolomorphicModel::add_constant(cplx c) {
    if (poly.empty()) poly.push_back(cplx{});
    poly[0] += c;
    return *this;
}

HolomorphicModel operator+(HolomorphicModel lhs, const HolomorphicModel& rhs) { return lhs += rhs; }
HolomorphicModel operator*(cplx s, HolomorphicModel m) { return m *= s; }

HolomorphicModel holomorphic_completion(const HarmonicStripFunction& h) {
    return holomorphic_completion(h, h.axis());
}

HolomorphicModel holomorphic_completion(const HarmonicStripFunction& h, double anchor_y) {
    HolomorphicModel f;
    f.period = h.period();
    f.guard = h.guard;
    const double y0 = h.axis();
    // zeta = Z - i y0; exp(+-i w zeta) = exp(+-i w Z) exp(+-w y0).
    for (const auto& m : h.modes()) {
        const double w = h.omega(m.n);
        const cplx up = 0.5 * m.cos_cosh + m.sin_cosh / (2.0 * kI) - m.cos_sinh / (2.0 * w) + kI * m.sin_sinh / (2.0 * w);
        const cplx dn = 0.5 * m.cos_cosh - m.sin_cosh / (2.0 * kI) + m.cos_sinh / (2.0 * w) + kI * m.sin_sinh / (2.0 * w);
        f.modes.push_back({w, up * std::exp(w * y0)});
        f.modes.push_back({-w, dn * std::exp(-w * y0)});
    }
    // Polynomial part in zeta: Re(p0 + p1 zeta + p2 zeta^2).
    const cplx p0{h.constant, 0.0};
    const cplx p1 = cplx{h.slope_x, 0.0} - kI * h.slope_y;
    const cplx p2 = cplx{h.quad, 0.0} - 0.5 * kI * h.drift;
    // Expand in Z with zeta = Z - i y0.
    const cplx s = -kI * y0;
    f.poly = {p0 + p1 * s + p2 * s * s, p1 + 2.0 * p2 * s, p2};
    f.canonicalize();
    const double im = f.value(cplx{0.0, anchor_y}).imag();
    f.add_constant(cplx{0.0, -im});
    f.canonicalize();
    return f;
}

}  // namespace fbr
