#include "fbr/trig_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fbr/errors.hpp"
#include "fbr/format.hpp"

namespace fbr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InputError(std::string("non-finite ") + what);
}

}  // namespace

TrigPolynomial::TrigPolynomial(double period_, std::vector<double> cos_coeffs,
                               std::vector<double> sin_coeffs, double drift_)
    : period(period_), a(std::move(cos_coeffs)), b(std::move(sin_coeffs)), drift(drift_) {
    if (a.empty()) a.push_back(0.0);
    const auto n = std::max(a.size(), b.size());
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    b[0] = 0.0;
    validate();
}

TrigPolynomial TrigPolynomial::constant(double period, double value) {
    return TrigPolynomial(period, {2.0 * value}, {0.0});
}

TrigPolynomial TrigPolynomial::cosine(double period, int n, double amplitude) {
    std::vector<double> ac(static_cast<std::size_t>(n) + 1, 0.0);
    ac[static_cast<std::size_t>(n)] = n == 0 ? 2.0 * amplitude : amplitude;
    return TrigPolynomial(period, std::move(ac), {});
}

TrigPolynomial TrigPolynomial::sine(double period, int n, double amplitude) {
    if (n < 1) throw InputError("sine mode index must be >= 1");
    std::vector<double> bc(static_cast<std::size_t>(n) + 1, 0.0);
    bc[static_cast<std::size_t>(n)] = amplitude;
    return TrigPolynomial(period, {0.0}, std::move(bc));
}

double TrigPolynomial::omega(int n) const { return kTwoPi * n / period; }

void TrigPolynomial::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) throw InputError("period must be positive and finite");
    if (a.size() != b.size() || a.empty()) throw InputError("coefficient arrays must have equal, nonzero length");
    for (double v : a) require_finite(v, "cosine coefficient");
    for (double v : b) require_finite(v, "sine coefficient");
    require_finite(drift, "drift slope");
}

double TrigPolynomial::eval(double x) const {
    double s = 0.5 * a[0] + drift * x;
    for (std::size_t n = 1; n < a.size(); ++n) {
        if (a[n] == 0.0 && b[n] == 0.0) continue;
        const double w = omega(static_cast<int>(n));
        s += a[n] * std::cos(w * x) + b[n] * std::sin(w * x);
    }
    return s;
}

double TrigPolynomial::derivative(double x, int k) const {
    if (k < 0) throw InputError("derivative order must be >= 0");
    if (k == 0) return eval(x);
    double s = k == 1 ? drift : 0.0;
    for (std::size_t n = 1; n < a.size(); ++n) {
        if (a[n] == 0.0 && b[n] == 0.0) continue;
        const double w = omega(static_cast<int>(n));
        // d^k/dx^k cos(wx) = w^k cos(wx + k pi/2), likewise for sin.
        const double phase = w * x + k * std::numbers::pi / 2.0;
        s += std::pow(w, k) * (a[n] * std::cos(phase) + b[n] * std::sin(phase));
    }
    return s;
}

double TrigPolynomial::prune(int max_degree, double rel_tol) {
    double scale = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) scale = std::max({scale, std::abs(a[n]), std::abs(b[n])});
    const double cutoff = rel_tol * scale;
    double tail = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const bool beyond = static_cast<int>(n) > max_degree;
        for (double* c : {&a[n], &b[n]}) {
            if (beyond || std::abs(*c) <= cutoff) {
                tail += std::abs(*c);
                *c = 0.0;
            }
        }
    }
    std::size_t last = 0;
    for (std::size_t n = 0; n < a.size(); ++n)
        if (a[n] != 0.0 || b[n] != 0.0) last = n;
    a.resize(last + 1);
    b.resize(last + 1);
    return tail;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
    if (std::abs(period - other.period) > 1e-12 * std::max(period, other.period))
        throw InputError("period mismatch in TrigPolynomial sum");
    const auto n = std::max(a.size(), other.a.size());
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    for (std::size_t i = 0; i < other.a.size(); ++i) {
        a[i] += other.a[i];
        b[i] += other.b[i];
    }
    drift += other.drift;
    return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(double s) {
    for (auto& v : a) v *= s;
    for (auto& v : b) v *= s;
    drift *= s;
    return *this;
}

TrigPolynomial operator+(TrigPolynomial lhs, const TrigPolynomial& rhs) { return lhs += rhs; }
TrigPolynomial operator*(double s, TrigPolynomial p) { return p *= s; }

TrigPolynomial fourier_analyze(std::span<const double> samples, double period) {
    if (!(period > 0.0) || !std::isfinite(period)) throw InputError("period must be positive and finite");
    const std::size_t m = samples.size();
    if (m < 3) throw InputError("fourier_analyze needs at least 3 samples");
    for (double v : samples) require_finite(v, "sample");

    const std::size_t nmax = m / 2;
    std::vector<double> ac(nmax + 1, 0.0), bc(nmax + 1, 0.0);
    for (std::size_t n = 0; n <= nmax; ++n) {
        double sc = 0.0, ss = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            // Reduce n*j mod m so the trig argument stays in [0, 2 pi).
            const double ang = kTwoPi * static_cast<double>((n * j) % m) / static_cast<double>(m);
            sc += samples[j] * std::cos(ang);
            ss += samples[j] * std::sin(ang);
        }
        const bool nyquist = (m % 2 == 0) && n == nmax;
        const double w = nyquist ? 1.0 / static_cast<double>(m) : 2.0 / static_cast<double>(m);
        ac[n] = w * sc;
        bc[n] = (n == 0 || nyquist) ? 0.0 : w * ss;
    }
    return TrigPolynomial(period, std::move(ac), std::move(bc));
}

TrigPolynomial fourier_analyze(std::span<const double> xs, std::span<const double> samples,
                               double period) {
    if (xs.size() != samples.size()) throw InputError("abscissa and sample counts differ");
    if (xs.size() < 3) throw InputError("fourier_analyze needs at least 3 samples");
    const double h = period / static_cast<double>(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        require_finite(xs[j], "abscissa");
        const double expect = xs[0] + h * static_cast<double>(j);
        if (std::abs(xs[j] - expect) > 1e-9 * std::max(1.0, period))
            throw InputError("samples are not uniformly spaced over one period (index " +
                             std::to_string(j) + ")");
    }
    TrigPolynomial p = fourier_analyze(samples, period);
    if (xs[0] == 0.0) return p;
    // Shift the phase: samples were taken at x0 + jh, so p currently represents f(x0 + x).
    const double x0 = xs[0];
    TrigPolynomial out = p;
    for (std::size_t n = 1; n < p.a.size(); ++n) {
        const double w = p.omega(static_cast<int>(n));
        const double c = std::cos(w * x0), s = std::sin(w * x0);
        // a cos(w(x - x0)) + b sin(w(x - x0)) expanded in cos(wx), sin(wx).
        out.a[n] = p.a[n] * c - p.b[n] * s;
        out.b[n] = p.a[n] * s + p.b[n] * c;
    }
    return out;
}

TrigPolynomial fourier_analyze_with_drift(std::span<const double> xs_closed,
                                          std::span<const double> samples_closed) {
    if (xs_closed.size() != samples_closed.size()) throw InputError("abscissa and sample counts differ");
    if (xs_closed.size() < 4) throw InputError("drift extraction needs at least 4 closed-interval samples");
    const std::size_t m = xs_closed.size() - 1;
    const double period = xs_closed[m] - xs_closed[0];
    if (!(period > 0.0)) throw InputError("closed interval must have positive length");
    for (double v : samples_closed) require_finite(v, "sample");
    const double drift = (samples_closed[m] - samples_closed[0]) / period;
    std::vector<double> rem(m);
    for (std::size_t j = 0; j < m; ++j) rem[j] = samples_closed[j] - drift * xs_closed[j];
    TrigPolynomial p = fourier_analyze(xs_closed.first(m), rem, period);
    p.drift = drift;
    return p;
}

void write_trig_polynomial(std::ostream& out, const TrigPolynomial& p) {
    out << "period=" << format_double(p.period) << '\n';
    for (std::size_t n = 0; n < p.a.size(); ++n) {
        if (p.a[n] != 0.0) out << 'a' << n << '=' << format_double(p.a[n]) << '\n';
        if (n > 0 && p.b[n] != 0.0) out << 'b' << n << '=' << format_double(p.b[n]) << '\n';
    }
    if (p.drift != 0.0) out << "b0=" << format_double(p.drift) << '\n';
}

std::string to_text(const TrigPolynomial& p) {
    std::ostringstream os;
    write_trig_polynomial(os, p);
    return os.str();
}

TrigPolynomial parse_trig_polynomial(std::span<const std::string> lines, int first_line_number) {
    double period = 0.0;
    bool have_period = false;
    std::vector<double> ac{0.0}, bc{0.0};
    double drift = 0.0;
    int line_no = first_line_number - 1;
    for (const auto& raw : lines) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("line " + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        val.erase(0, val.find_first_not_of(" \t"));
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw InputError("line " + std::to_string(line_no) + ": malformed number '" + val + "' for field '" + key + "'");
        }
        if (!std::isfinite(v)) throw InputError("line " + std::to_string(line_no) + ": non-finite value for '" + key + "'");
        if (key == "period") {
            period = v;
            have_period = true;
        } else if (key == "b0") {
            drift = v;
        } else if ((key[0] == 'a' || key[0] == 'b') && key.size() > 1 &&
                   key.find_first_not_of("0123456789", 1) == std::string::npos) {
            const auto n = static_cast<std::size_t>(std::stoul(key.substr(1)));
            auto& target = key[0] == 'a' ? ac : bc;
            if (target.size() <= n) target.resize(n + 1, 0.0);
            target[n] = v;
        } else {
            throw InputError("line " + std::to_string(line_no) + ": unknown field '" + key + "'");
        }
    }
    if (!have_period) throw InputError("line " + std::to_string(first_line_number) + ": missing period= record");
    try {
        return TrigPolynomial(period, std::move(ac), std::move(bc), drift);
    } catch (const InputError& e) {
        throw InputError("line " + std::to_string(first_line_number) + ": " + e.what());
    }
}

TrigPolynomial parse_trig_polynomial(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) lines.push_back(l);
    return parse_trig_polynomial(lines, 1);
}

}  // namespace fbr
