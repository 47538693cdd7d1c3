#include "fbr/reflection.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbr/catalog.hpp"
#include "fbr/errors.hpp"
#include "fbr/format.hpp"

namespace fbr {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kResonanceTol = 1e-9;

std::vector<double> axis_points(double period, int count) {
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) xs[static_cast<std::size_t>(k)] = period * k / count;
    return xs;
}

/// Phi_j(H(z)) for the three components, as a surface point in the edge chart.
class MirrorPatch final : public AnalyticSurface {
public:
    MirrorPatch(NormalizationMap map, std::array<HolomorphicModel, 3> phi, double period, double height)
        : map_(std::move(map)), phi_(std::move(phi)), period_(period), height_(height) {}

    SurfacePoint evaluate(double x, double y) const override {
        const ComplexJet h = map_.jet(cplx{x, y});
        SurfacePoint p;
        for (int j = 0; j < 3; ++j) {
            const ComplexJet f = phi_[static_cast<std::size_t>(j)].jet(h.value);
            const cplx g1 = f.d1 * h.d1;
            const cplx g2 = f.d2 * h.d1 * h.d1 + f.d1 * h.d2;
            p.value[j] = f.value.real();
            p.dx[j] = g1.real();
            p.dy[j] = -g1.imag();
            p.dxx[j] = g2.real();
            p.dxy[j] = -g2.imag();
            p.dyy[j] = -g2.real();
        }
        return p;
    }
    StripDomain domain() const override { return {period_, -height_, 0.0}; }
    std::string name() const override { return "mirror"; }

private:
    NormalizationMap map_;
    std::array<HolomorphicModel, 3> phi_;
    double period_, height_;
};

}  // namespace

SteklovReport verify_steklov(const AnalyticSurface& surface, const BoundaryEdge& edge, int samples,
                             double sphere_tol) {
    const StripDomain d = surface.domain();
    if (!d.periodic()) throw InputError("Steklov check needs a periodic chart");
    SteklovReport r;
    const double sigma = edge.sigma();
    double sum = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x = d.period * k / samples;
        const SurfacePoint p = surface.evaluate(x, edge.y);
        const double F = p.dx.norm();
        if (!(F > 0.0)) throw InputError("degenerate parametrization on edge " + edge.label);
        const Vec3 dnu = edge.outward_y() * p.dy / F;
        const Vec3 res = p.value - sigma * dnu;
        r.sphere_deviation = std::max(r.sphere_deviation, std::abs(p.value.norm() - 1.0));
        for (int j = 0; j < 3; ++j)
            r.component_max[static_cast<std::size_t>(j)] = std::max(r.component_max[static_cast<std::size_t>(j)], std::abs(res[j]));
        const double m = res.norm();
        if (m > r.max_residual) {
            r.max_residual = m;
            r.worst_x = x;
        }
        sum += m;
    }
    r.mean_residual = sum / samples;
    r.on_sphere = r.sphere_deviation <= sphere_tol;
    return r;
}

HolomorphicModel lambda_field(const HolomorphicModel& phi, double sigma) {
    HolomorphicModel l;
    l.period = phi.period;
    l.guard = phi.guard;
    for (const auto& m : phi.modes) l.modes.push_back({m.omega, kI * (sigma - m.omega) * m.coeff});
    const std::size_t n = phi.poly.size();
    l.poly.assign(n, cplx{});
    for (std::size_t j = 0; j < n; ++j) {
        l.poly[j] = kI * sigma * phi.poly[j];
        if (j + 1 < n) l.poly[j] -= static_cast<double>(j + 1) * phi.poly[j + 1];
    }
    if (phi.resonant_coeff != cplx{}) {
        // d/dZ (r Z e^{isZ}) = r e^{isZ} + i s r Z e^{isZ}.
        const double s = phi.resonant_omega;
        l.modes.push_back({s, -phi.resonant_coeff});
        if (std::abs(sigma - s) > kResonanceTol) {
            l.resonant_omega = s;
            l.resonant_coeff = kI * (sigma - s) * phi.resonant_coeff;
        }
    }
    l.canonicalize();
    return l;
}

double verify_schwarz_condition(const std::array<HolomorphicModel, 3>& lambda, const std::vector<double>& axis) {
    double r = 0.0;
    for (const auto& l : lambda)
        for (double x : axis) r = std::max(r, std::abs(l.value(cplx{x, 0.0}).imag()));
    return r;
}

HolomorphicModel schwarz_extend(const HolomorphicModel& lambda, const std::vector<double>& axis, double tol) {
    if (lambda.resonant_coeff != cplx{}) throw InputError("schwarz_extend: resonant terms are not supported");
    double res = 0.0;
    for (double x : axis) res = std::max(res, std::abs(lambda.value(cplx{x, 0.0}).imag()));
    if (res > tol)
        throw StageError("schwarz", "Im Lambda on the axis is " + format_double(res) + ", above " + format_double(tol));
    auto coeff_at = [&](double w) {
        cplx c{};
        for (const auto& m : lambda.modes)
            if (std::abs(m.omega - w) <= 1e-12 * std::max(1.0, std::abs(w))) c += m.coeff;
        return c;
    };
    HolomorphicModel s;
    s.period = lambda.period;
    s.guard = lambda.guard;
    std::vector<double> ws;
    for (const auto& m : lambda.modes) {
        ws.push_back(m.omega);
        ws.push_back(-m.omega);
    }
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }),
             ws.end());
    for (double w : ws) s.modes.push_back({w, 0.5 * (coeff_at(w) + std::conj(coeff_at(-w)))});
    for (const auto& p : lambda.poly) s.poly.emplace_back(p.real(), 0.0);
    s.canonicalize();
    return s;
}

OdeSolution solve_reflection_ode(const HolomorphicModel& lambda, const HolomorphicModel& axis_trace, double period,
                                 int fit_points, double tol, double sigma) {
    if (lambda.resonant_coeff != cplx{}) throw InputError("reflection ODE: Lambda must not carry a resonant term");
    if (fit_points < 3) throw InputError("reflection ODE: at least 3 fit points required");
    OdeSolution out;
    HolomorphicModel& phi = out.phi;
    phi.period = lambda.period;
    phi.guard = lambda.guard;
    phi.resonant_omega = sigma;
    for (const auto& m : lambda.modes) {
        if (std::abs(m.omega - sigma) < kResonanceTol)
            phi.resonant_coeff += -m.coeff;  // particular solution -c Z e^{i sigma Z}
        else
            phi.modes.push_back({m.omega, m.coeff / (kI * (sigma - m.omega))});
    }
    const auto& p = lambda.poly;
    if (!p.empty()) {
        phi.poly.assign(p.size(), cplx{});
        const std::size_t d = p.size() - 1;
        phi.poly[d] = p[d] / (kI * sigma);
        for (std::size_t j = d; j-- > 0;) phi.poly[j] = (p[j] + static_cast<double>(j + 1) * phi.poly[j + 1]) / (kI * sigma);
    }
    phi.canonicalize();

    const std::vector<double> xs = axis_points(period, fit_points);
    std::vector<double> target(xs.size());
    double scale = 1.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double t = axis_trace.value(cplx{xs[k], 0.0}).real();
        target[k] = t - phi.value(cplx{xs[k], 0.0}).real();
        scale = std::max(scale, std::abs(t));
    }
    // C e^{i sigma Z} is admissible only when it has the period of the data.
    const double turns = period * std::abs(sigma) / (2.0 * std::numbers::pi);
    const bool periodic = std::round(turns) >= 1.0 && std::abs(turns - std::round(turns)) < 1e-9 * std::max(1.0, turns);
    if (periodic) {
        Eigen::MatrixXd A(static_cast<Eigen::Index>(xs.size()), 2);
        Eigen::VectorXd b(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const auto r = static_cast<Eigen::Index>(k);
            A(r, 0) = std::cos(sigma * xs[k]);
            A(r, 1) = -std::sin(sigma * xs[k]);
            b(r) = target[k];
        }
        const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
        out.homogeneous = cplx{c(0), c(1)};
        if (out.homogeneous != cplx{}) {
            phi.modes.push_back({sigma, out.homogeneous});
            phi.canonicalize();
        }
    }
    for (std::size_t k = 0; k < xs.size(); ++k)
        out.axis_mismatch = std::max(out.axis_mismatch, std::abs(phi.value(cplx{xs[k], 0.0}).real() -
                                                                 axis_trace.value(cplx{xs[k], 0.0}).real()));
    if (out.axis_mismatch > tol * scale)
        throw StageError("ode", "axis trace missed by " + format_double(out.axis_mismatch) + " (tolerance " +
                                    format_double(tol * scale) + ")");
    return out;
}

ReflectionFields reflection_fields(const SurfacePtr& surface, const BoundaryEdge& edge, const ReflectionOptions& options) {
    ReflectionFields out;
    const double sigma = edge.sigma();
    out.oriented = orient_to_edge(surface, edge);
    const BoundaryEdge axis_edge{edge.label, 0.0, EdgeSide::above, true, edge.ball_side};
    const double height = out.oriented->domain().y_hi;
    out.steklov = verify_steklov(*out.oriented, axis_edge);

    // Normalization: F = 1 on the axis in Z = H(z).
    try {
        const TrigPolynomial F = boundary_conformal_factor(*out.oriented, axis_edge, options.samples);
        out.map = build_normalization(F, 0.0, height);
    } catch (const std::exception& e) {
        throw StageError("normalize", e.what());
    }
    const double P = out.map.P();

    // Cauchy data of phi_j on the Z axis, then holomorphic completion.
    const int M = options.samples;
    std::array<std::vector<double>, 3> val, dY;
    try {
        for (int k = 0; k < M; ++k) {
            const double X = P * k / M;
            const double x = out.map.inverse(cplx{X, 0.0}).real();
            const SurfacePoint sp = out.oriented->evaluate(x, 0.0);
            const cplx hp = out.map.jet(cplx{x, 0.0}).d1;
            for (int j = 0; j < 3; ++j) {
                const cplx d = cplx{sp.dx[j], -sp.dy[j]} / hp;  // phi_X - i phi_Y
                val[static_cast<std::size_t>(j)].push_back(sp.value[j]);
                dY[static_cast<std::size_t>(j)].push_back(-d.imag());
            }
        }
        for (std::size_t j = 0; j < 3; ++j) {
            TrigPolynomial g = fourier_analyze(val[j], P), f = fourier_analyze(dY[j], P);
            g.prune(g.degree(), options.prune_tol);
            f.prune(f.degree(), options.prune_tol);
            out.phi[j] = holomorphic_completion(solve_cauchy({g, f, 0.0}), 0.0);
        }
    } catch (const std::exception& e) {
        throw StageError("cauchy", e.what());
    }

    const int N = (M - 1) / 2;
    out.axis = axis_points(P, 4 * N + 1);
    for (std::size_t j = 0; j < 3; ++j) out.lambda[j] = lambda_field(out.phi[j], sigma);
    out.schwarz = verify_schwarz_condition(out.lambda, out.axis);
    return out;
}

ReflectedPatch reflect_patch(const SurfacePtr& surface, const BoundaryEdge& edge, const ReflectionOptions& options) {
    if (!edge.free) throw StageError("steklov", "edge " + edge.label + " is not a free boundary");
    ReflectedPatch out;
    out.source = surface;
    out.edge = edge;
    out.sigma = edge.sigma();
    const double sigma = out.sigma;

    const SurfacePtr oriented = orient_to_edge(surface, edge);
    const BoundaryEdge axis_edge{edge.label, 0.0, EdgeSide::above, true, edge.ball_side};
    const SteklovReport st = verify_steklov(*oriented, axis_edge);
    out.residuals.steklov = st.max_residual;
    if (!st.on_sphere)
        throw StageError("steklov", "edge " + edge.label + " is off the unit sphere by " + format_double(st.sphere_deviation));
    if (st.max_residual > options.steklov_tol)
        throw StageError("steklov", "residual " + format_double(st.max_residual) + " on edge " + edge.label + " exceeds " +
                                        format_double(options.steklov_tol));

    ReflectionFields fields = reflection_fields(surface, edge, options);
    const double L = oriented->domain().period;
    const double height = oriented->domain().y_hi;
    out.mirror_height = options.mirror_height > 0.0 ? options.mirror_height : height;
    out.map = fields.map;
    out.phi = fields.phi;
    const double P = out.map.P();
    const std::vector<double>& axis = fields.axis;
    const int fit = static_cast<int>(axis.size());
    out.residuals.schwarz = fields.schwarz;
    for (std::size_t j = 0; j < 3; ++j) out.lambda[j] = schwarz_extend(fields.lambda[j], axis, options.schwarz_tol);

    // ODE on the mirror side.
    for (std::size_t j = 0; j < 3; ++j) {
        try {
            out.phi_star[j] = solve_reflection_ode(out.lambda[j], out.phi[j], P, fit, options.match_tol, sigma).phi;
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError("ode", e.what());
        }
        for (double x : axis) {
            const ComplexJet f = out.phi_star[j].jet(cplx{x, 0.0});
            const cplx r = kI * sigma * f.value - f.d1 - out.lambda[j].value(cplx{x, 0.0});
            out.residuals.ode_identity = std::max(out.residuals.ode_identity, std::abs(r));
        }
    }

    // Mirror patch, first in the edge chart, then carried back to the source chart.
    auto mirror = std::make_shared<MirrorPatch>(out.map, out.phi_star, L, out.mirror_height);
    try {
        constexpr int kNx = 32, kNy = 8;
        for (int i = 0; i < kNx; ++i) {
            const double x = L * i / kNx;
            const SurfacePoint a = oriented->evaluate(x, 0.0), b = mirror->evaluate(x, 0.0);
            out.residuals.match_value = std::max(out.residuals.match_value, (a.value - b.value).norm());
            out.residuals.match_derivative = std::max(out.residuals.match_derivative, (a.dy - b.dy).norm());
            for (int k = 0; k <= kNy; ++k) {
                const cplx Z = out.map(cplx{x, -out.mirror_height * k / kNy});
                cplx s{};
                double n = 0.0;
                for (const auto& f : out.phi_star) {
                    const cplx d = f.derivative(Z);
                    s += d * d;
                    n += std::norm(d);
                }
                out.residuals.conformality = std::max(out.residuals.conformality, std::abs(s) / std::max(1.0, n));
            }
        }
    } catch (const std::exception& e) {
        throw StageError("match", e.what());
    }
    if (out.residuals.match_value > options.match_tol || out.residuals.match_derivative > options.match_tol)
        throw StageError("match", "seam mismatch " + format_double(std::max(out.residuals.match_value, out.residuals.match_derivative)));

    const double sgn = edge.side == EdgeSide::above ? 1.0 : -1.0;
    HolomorphicMapFn to_edge = [edge, sgn](cplx z) {
        return HolomorphicJet{source_to_edge_chart(edge, z), cplx{sgn, 0.0}, cplx{}};
    };
    StripDomain dom{L, 0.0, 0.0};
    if (edge.side == EdgeSide::above) {
        dom.y_lo = edge.y - out.mirror_height;
        dom.y_hi = edge.y;
    } else {
        dom.y_lo = edge.y;
        dom.y_hi = edge.y + out.mirror_height;
    }
    const std::string name = surface->name() + "*" + edge.label;
    auto bare = std::make_shared<ReparametrizedSurface>(mirror, to_edge, dom, std::vector<BoundaryEdge>{}, name);
    const EdgeSide seam_side = edge.side == EdgeSide::above ? EdgeSide::below : EdgeSide::above;
    const EdgeSide far_side = edge.side;
    std::vector<BoundaryEdge> edges;
    edges.push_back(classify_edge(*bare, edge.label, edge.y, seam_side));
    try {
        edges.push_back(classify_edge(*bare, edge.label + "*", edge.side == EdgeSide::above ? dom.y_lo : dom.y_hi, far_side));
    } catch (const EvaluationRangeError&) {
    }
    out.patch = std::make_shared<ReparametrizedSurface>(mirror, to_edge, dom, std::move(edges), name);
    return out;
}

}  // namespace fbr
