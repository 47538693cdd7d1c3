#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fbr/errors.hpp"
#include "fbr/harmonic_strip.hpp"
#include "fbr/holomorphic_model.hpp"
#include "fbr/trig_polynomial.hpp"

using namespace fbr;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(double period, int m, auto fn) {
    std::vector<double> s;
    for (int j = 0; j < m; ++j) s.push_back(fn(period * j / m));
    return s;
}

double laplacian_fd(const HarmonicStripFunction& h, double x, double y, double step) {
    return (h(x + step, y) + h(x - step, y) + h(x, y + step) + h(x, y - step) - 4.0 * h(x, y)) / (step * step);
}

}  // namespace

TEST(FourierAnalyze, ConstantFunction) {
    const auto p = fourier_analyze(sample(2.0, 9, [](double) { return 1.0; }), 2.0);
    EXPECT_NEAR(p.a[0], 2.0, 1e-15);
    for (int n = 1; n <= p.degree(); ++n) {
        EXPECT_NEAR(p.a[static_cast<std::size_t>(n)], 0.0, 1e-15);
        EXPECT_NEAR(p.b[static_cast<std::size_t>(n)], 0.0, 1e-15);
    }
}

TEST(FourierAnalyze, PureMode) {
    const auto p = fourier_analyze(sample(2.0, 9, [](double x) { return std::cos(kPi * x); }), 2.0);
    EXPECT_NEAR(p.a[1], 1.0, 1e-15);
    EXPECT_NEAR(p.a[0], 0.0, 1e-15);
    for (int n = 2; n <= p.degree(); ++n) EXPECT_NEAR(p.a[static_cast<std::size_t>(n)], 0.0, 1e-15);
    for (int n = 1; n <= p.degree(); ++n) EXPECT_NEAR(p.b[static_cast<std::size_t>(n)], 0.0, 1e-15);
}

TEST(FourierAnalyze, ReproducesSamplesExactly) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    std::vector<double> s(17);
    for (auto& v : s) v = nd(rng);
    const auto p = fourier_analyze(s, 3.0);
    for (int j = 0; j < 17; ++j) EXPECT_NEAR(p(3.0 * j / 17), s[static_cast<std::size_t>(j)], 1e-12);
}

TEST(FourierAnalyze, DriftExtraction) {
    std::vector<double> xs, fs;
    for (int j = 0; j <= 16; ++j) {
        xs.push_back(-1.0 + 2.0 * j / 16);
        fs.push_back(xs.back());
    }
    const auto p = fourier_analyze_with_drift(xs, fs);
    EXPECT_NEAR(p.drift, 1.0, 1e-15);
    for (double c : p.a) EXPECT_NEAR(c, 0.0, 1e-14);
    for (double c : p.b) EXPECT_NEAR(c, 0.0, 1e-14);
}

TEST(FourierAnalyze, Errors) {
    EXPECT_THROW(fourier_analyze(std::vector<double>{1.0, 2.0}, 1.0), InputError);
    EXPECT_THROW(fourier_analyze(std::vector<double>{1.0, NAN, 2.0}, 1.0), InputError);
    const std::vector<double> xs{0.0, 0.3, 0.5, 0.75};
    EXPECT_THROW(fourier_analyze(xs, std::vector<double>{1, 2, 3, 4}, 1.0), InputError);
}

TEST(TrigPolynomialText, RoundTripAndLineErrors) {
    TrigPolynomial p(2.0, {1.5, 0.25, 0.0, -3.0}, {0.0, 0.5, 0.0, 0.0}, 0.75);
    const auto q = parse_trig_polynomial(to_text(p));
    for (double x : {0.1, 0.7, 1.9}) EXPECT_DOUBLE_EQ(p(x), q(x));
    try {
        parse_trig_polynomial("period=2\na1=0.5\na2=zz\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(TrigPolynomial, Periodicity) {
    TrigPolynomial p(1.7, {0.3, 1.0, -0.5}, {0.0, 0.2, 0.9});
    for (double x : {-2.0, 0.1, 4.4}) EXPECT_NEAR(p(x + 1.7), p(x), 1e-13);
}

TEST(CauchySolver, ClosedForms) {
    const auto h1 = solve_cauchy_neumann(TrigPolynomial::constant(2.0, 1.0));
    const auto h2 = solve_cauchy_dirichlet(TrigPolynomial::cosine(2.0, 1));
    const auto h3 = solve_cauchy_neumann(TrigPolynomial::cosine(2.0, 1));
    const auto h4 = solve_cauchy_dirichlet(TrigPolynomial::sine(2.0, 1));
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const double x = -1.0 + 2.0 * i / 63, y = -1.0 + 2.0 * j / 63;
            EXPECT_NEAR(h1(x, y), y, 1e-12);
            EXPECT_NEAR(h2(x, y), std::cosh(kPi * y) * std::cos(kPi * x), 1e-12);
            EXPECT_NEAR(h3(x, y), std::sinh(kPi * y) * std::cos(kPi * x) / kPi, 1e-12);
            EXPECT_NEAR(h4(x, y), std::cosh(kPi * y) * std::sin(kPi * x), 1e-12);
        }
    EXPECT_DOUBLE_EQ(h1(3.0, 2.0), 2.0);
    EXPECT_NEAR(h3(0.0, 1.0), 3.67607791037497772, 1e-14);
    const auto g = h2.gradient(0.0, 0.0);
    EXPECT_DOUBLE_EQ(h2(0.0, 0.0), 1.0);
    EXPECT_NEAR(g[0], 0.0, 1e-15);
    EXPECT_NEAR(g[1], 0.0, 1e-15);
}

TEST(CauchySolver, ZeroDataAndSums) {
    const auto z = solve_cauchy_neumann(TrigPolynomial::constant(2.0, 0.0));
    EXPECT_EQ(z(0.3, 0.7), 0.0);
    CauchyData d{TrigPolynomial::constant(2.0, 1.0), TrigPolynomial::cosine(2.0, 1), 0.0};
    const auto h = solve_cauchy(d);
    for (double x : {-0.4, 0.2}) EXPECT_NEAR(h(x, 0.6), 1.0 + std::sinh(0.6 * kPi) * std::cos(kPi * x) / kPi, 1e-13);
    CauchyData bad{TrigPolynomial::constant(2.0, 1.0), TrigPolynomial::constant(3.0, 1.0), 0.0};
    EXPECT_THROW(solve_cauchy(bad), InputError);
}

TEST(CauchySolver, TracesHarmonicityLinearity) {
    TrigPolynomial g(2.5, {0.4, 1.0, -0.3, 0.2}, {0.0, 0.5, 0.1, -0.7});
    TrigPolynomial f(2.5, {1.2, -0.2, 0.6, 0.05}, {0.0, 0.3, -0.4, 0.25}, 0.3);
    CauchyData d{g, f, 0.4};
    const auto h = solve_cauchy(d);
    for (int j = 0; j < 40; ++j) {
        const double x = 2.5 * j / 40;
        EXPECT_NEAR(h(x, 0.4), g(x), 1e-12);
        EXPECT_NEAR(h.gradient(x, 0.4)[1], f(x), 1e-12);
    }
    // Order-2 decay of the 5-point Laplacian.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 1.2);
    for (int k = 0; k < 100; ++k) {
        const double x = u(rng), y = u(rng);
        const double r1 = std::abs(laplacian_fd(h, x, y, 2e-2)), r2 = std::abs(laplacian_fd(h, x, y, 1e-2));
        EXPECT_LT(r2, 0.3 * r1 + 1e-9);
    }
    // Linearity.
    CauchyData d2{TrigPolynomial::cosine(2.5, 2), TrigPolynomial::sine(2.5, 1), 0.4};
    CauchyData mix{2.0 * g + -3.0 * d2.g, 2.0 * f + -3.0 * d2.f, 0.4};
    const auto hm = solve_cauchy(mix), h2 = solve_cauchy(d2);
    for (double x : {0.0, 0.9, 2.2})
        for (double y : {-0.3, 0.4, 1.1}) EXPECT_NEAR(hm(x, y), 2.0 * h(x, y) - 3.0 * h2(x, y), 1e-12);
    // Taylor path agrees with the Fourier path.
    for (double x : {0.2, 1.7})
        for (double y : {0.0, 0.7, 1.2}) EXPECT_NEAR(taylor_cauchy_evaluate(d, x, y), h(x, y), 1e-10);
}

TEST(Conjugate, ClosedFormsAndCauchyRiemann) {
    const auto y = solve_cauchy_neumann(TrigPolynomial::constant(2.0, 1.0));
    const auto ys = conjugate_harmonic(y);
    EXPECT_NEAR(ys(0.7, 0.3), 0.7, 1e-15);
    const auto s = solve_cauchy_neumann(TrigPolynomial::cosine(2.0, 1));
    const auto ss = conjugate_harmonic(s);
    for (double x : {-0.6, 0.1, 0.9})
        for (double yy : {-0.5, 0.0, 0.8}) {
            EXPECT_NEAR(ss(x, yy), std::cosh(kPi * yy) * std::sin(kPi * x) / kPi, 1e-13);
            const auto gh = s.gradient(x, yy), gs = ss.gradient(x, yy);
            EXPECT_NEAR(gs[0], gh[1], 1e-13);
            EXPECT_NEAR(gs[1], -gh[0], 1e-13);
        }
    const auto c = solve_cauchy_dirichlet(TrigPolynomial::constant(2.0, 4.0));
    EXPECT_EQ(conjugate_harmonic(c)(0.4, 0.2), 0.0);
    // Double conjugation is -h up to an additive constant.
    TrigPolynomial g(2.0, {0.3, 1.0, -0.3}, {0.0, 0.5, 0.1});
    TrigPolynomial f(2.0, {1.0, -0.2, 0.6}, {0.0, 0.3, -0.4}, 0.2);
    const auto h = solve_cauchy({g, f, 0.0});
    const auto hh = conjugate_harmonic(conjugate_harmonic(h));
    const double shift = hh(0.0, 0.0) + h(0.0, 0.0);
    for (double x : {-0.6, 0.1, 0.9})
        for (double yy : {-0.5, 0.0, 0.8}) EXPECT_NEAR(hh(x, yy) + h(x, yy), shift, 1e-12);
}

TEST(Evaluation, GuardRaises) {
    TrigPolynomial f = TrigPolynomial::cosine(2.0, 10);
    const auto h = solve_cauchy_neumann(f);
    EXPECT_NO_THROW(h(0.0, 0.9));
    EXPECT_THROW(h(0.0, 1.0), EvaluationRangeError);
}

TEST(HolomorphicCompletion, ClosedForms) {
    // cos X e^{-Y} = Re e^{iZ}.
    const auto h = solve_cauchy({TrigPolynomial::cosine(2 * kPi, 1), TrigPolynomial::cosine(2 * kPi, 1, -1.0), 0.0});
    const auto f = holomorphic_completion(h);
    for (cplx z : {cplx{0.3, 0.2}, cplx{-1.0, 1.5}}) EXPECT_NEAR(std::abs(f(z) - std::exp(cplx{0, 1} * z)), 0.0, 1e-13);
    const auto y = solve_cauchy_neumann(TrigPolynomial::constant(2.0, 1.0));
    const auto fy = holomorphic_completion(y);
    for (cplx z : {cplx{0.3, 0.2}, cplx{-1.0, 1.5}}) EXPECT_NEAR(std::abs(fy(z) - cplx{0, -1} * z), 0.0, 1e-14);
    // General data: Re F = h and F' consistent with the gradient.
    TrigPolynomial g(2.0, {0.3, 1.0, -0.3}, {0.0, 0.5, 0.1});
    TrigPolynomial df(2.0, {1.0, -0.2, 0.6}, {0.0, 0.3, -0.4}, 0.2);
    const auto hg = solve_cauchy({g, df, 0.5});
    const auto fg = holomorphic_completion(hg, 0.9);
    EXPECT_NEAR(fg(cplx{0.0, 0.9}).imag(), 0.0, 1e-14);
    for (double x : {-0.6, 0.1, 0.9})
        for (double yy : {-0.5, 0.5, 0.8}) {
            const auto j = fg.jet(cplx{x, yy});
            EXPECT_NEAR(j.value.real(), hg(x, yy), 1e-12);
            const auto gr = hg.gradient(x, yy);
            EXPECT_NEAR(j.d1.real(), gr[0], 1e-12);
            EXPECT_NEAR(j.d1.imag(), -gr[1], 1e-12);
        }
}

TEST(HolomorphicModel, DerivativesExact) {
    HolomorphicModel m;
    m.modes = {{1.5, {0.2, -0.1}}, {-2.0, {0.3, 0.4}}};
    m.poly = {{1.0, 0.0}, {0.0, 2.0}, {0.5, 0.5}};
    m.resonant_coeff = {0.7, -0.2};
    const cplx z{0.3, -0.4};
    const double hstep = 1e-4;
    const auto j = m.jet(z);
    const cplx fd1 = (m(z + hstep) - m(z - hstep)) / (2 * hstep);
    const cplx fd2 = (m(z + hstep) - 2.0 * m(z) + m(z - hstep)) / (hstep * hstep);
    EXPECT_NEAR(std::abs(j.d1 - fd1), 0.0, 1e-7);
    EXPECT_NEAR(std::abs(j.d2 - fd2), 0.0, 1e-5);
    EXPECT_NEAR(std::abs(m.derivative_n(z, 1) - j.d1), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(m.derivative_n(z, 2) - j.d2), 0.0, 1e-13);
    const cplx fd3 = (m.derivative_n(z + hstep, 2) - m.derivative_n(z - hstep, 2)) / (2 * hstep);
    EXPECT_NEAR(std::abs(m.derivative_n(z, 3) - fd3), 0.0, 1e-6);
}
