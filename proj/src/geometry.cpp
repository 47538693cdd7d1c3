#include "fbr/geometry.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fbr/errors.hpp"
#include "fbr/format.hpp"
#include "fbr/reflection.hpp"

namespace fbr {

namespace {

constexpr cplx kI{0.0, 1.0};

double period_or_unit(const StripDomain& d) { return d.periodic() ? d.period : 2.0; }

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

Vec3 richardson(const Vec3& coarse, const Vec3& fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace

FundamentalForms fundamental_forms(const SurfacePoint& p) {
    FundamentalForms f;
    const Vec3& Xu = p.dx;
    const Vec3& Xv = p.dy;
    f.metric = Xu.squaredNorm();
    const Vec3 cross = Xu.cross(Xv);
    const double area = cross.norm();
    if (!(f.metric > 0.0) || !(area > 1e-14 * f.metric))
        throw EvaluationRangeError("branch point: degenerate tangent plane (|Psi_x|^2 = " + format_double(f.metric) + ")");
    f.normal = cross / area;
    f.L = p.dxx.dot(f.normal);
    f.M = p.dxy.dot(f.normal);
    f.N = p.dyy.dot(f.normal);
    const double lam = f.metric;
    f.H_mean = (f.L + f.N) / (2.0 * lam);
    f.K = (f.L * f.N - f.M * f.M) / (lam * lam);

    // Gauss-Weingarten in conformal coordinates.
    const double au = Xu.dot(p.dxx) / lam;  // Lambda_u / 2 Lambda
    const double av = Xu.dot(p.dxy) / lam;  // Lambda_v / 2 Lambda
    const Vec3 r1 = p.dxx - (au * Xu - av * Xv + f.L * f.normal);
    const Vec3 r2 = p.dxy - (av * Xu + au * Xv + f.M * f.normal);
    const Vec3 r3 = p.dyy - (-au * Xu + av * Xv + f.N * f.normal);
    const double scale = std::max({1.0, p.dxx.norm(), p.dxy.norm(), p.dyy.norm()});
    f.rectangle_residual = std::max({r1.norm(), r2.norm(), r3.norm()}) / scale;
    return f;
}

FundamentalForms fundamental_forms(const AnalyticSurface& surface, double x, double y) {
    return fundamental_forms(surface.evaluate(x, y));
}

SurfacePoint finite_difference_point(const AnalyticSurface& s, double x, double y, double h1, double h2) {
    auto P = [&](double a, double b) { return s.position(a, b); };
    SurfacePoint p;
    p.value = P(x, y);
    auto first = [&](double h, bool in_x) {
        return in_x ? Vec3((P(x + h, y) - P(x - h, y)) / (2.0 * h)) : Vec3((P(x, y + h) - P(x, y - h)) / (2.0 * h));
    };
    auto second = [&](double h, int which) -> Vec3 {
        if (which == 0) return (P(x + h, y) - 2.0 * p.value + P(x - h, y)) / (h * h);
        if (which == 2) return (P(x, y + h) - 2.0 * p.value + P(x, y - h)) / (h * h);
        return (P(x + h, y + h) - P(x + h, y - h) - P(x - h, y + h) + P(x - h, y - h)) / (4.0 * h * h);
    };
    p.dx = richardson(first(h1, true), first(h1 / 2, true));
    p.dy = richardson(first(h1, false), first(h1 / 2, false));
    p.dxx = richardson(second(h2, 0), second(h2 / 2, 0));
    p.dxy = richardson(second(h2, 1), second(h2 / 2, 1));
    p.dyy = richardson(second(h2, 2), second(h2 / 2, 2));
    return p;
}

FundamentalForms fundamental_forms_fd(const AnalyticSurface& surface, double x, double y) {
    return fundamental_forms(finite_difference_point(surface, x, y));
}

HopfSample hopf_quantities(const PlaneModel& model, cplx w) {
    const FundamentalForms f = fundamental_forms(model.evaluate(w));
    const cplx g = w * w * f.hopf();
    return {w, g.real(), g.imag(), f.K, f.metric};
}

double hopf_cauchy_riemann(const PlaneModel& model, cplx w, double h) {
    auto g = [&](cplx v) {
        const HopfSample s = hopf_quantities(model, v);
        return cplx{s.alpha, s.beta};
    };
    const double step = h * std::abs(w);
    const cplx gu = (g(w + step) - g(w - step)) / (2.0 * step);
    const cplx gv = (g(w + kI * step) - g(w - kI * step)) / (2.0 * step);
    return std::abs(w) * std::abs(gu + kI * gv) / 2.0 / std::max(1.0, std::abs(g(w)));
}

HopfReport hopf_scan(const PlaneModel& model, int nx, int ny, double cr_step) {
    const StripDomain d = model.strip()->domain();
    HopfReport r;
    r.K_max = -std::numeric_limits<double>::infinity();
    r.K_min = std::numeric_limits<double>::infinity();
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double sum = 0.0, sum2 = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double y = d.y_lo + (j + 0.5) * d.height() / ny;
        for (int i = 0; i < nx; ++i) {
            const cplx w = model.to_plane(cplx{d.period * i / nx, y});
            const HopfSample s = hopf_quantities(model, w);
            r.beta_sup = std::max(r.beta_sup, std::abs(s.beta));
            amin = std::min(amin, s.alpha);
            amax = std::max(amax, s.alpha);
            sum += s.alpha;
            sum2 += s.alpha * s.alpha;
            r.K_max = std::max(r.K_max, s.K);
            r.K_min = std::min(r.K_min, s.K);
            if (cr_step > 0.0) r.holomorphy = std::max(r.holomorphy, hopf_cauchy_riemann(model, w, cr_step));
            ++r.samples;
        }
    }
    r.alpha_mean = sum / r.samples;
    r.alpha_std = std::sqrt(std::max(0.0, sum2 / r.samples - r.alpha_mean * r.alpha_mean));
    r.alpha_spread = r.alpha_mean != 0.0 ? (amax - amin) / std::abs(r.alpha_mean) : amax - amin;
    r.c = r.alpha_mean;
    return r;
}

std::vector<BoundaryRelation> boundary_curvature_relations(const PlaneModel& model,
                                                           const std::vector<BoundaryEdge>& edges, int samples) {
    std::vector<BoundaryRelation> out;
    for (const auto& e : edges) {
        BoundaryRelation r;
        r.label = e.label;
        r.radius = model.circle_radius(e.y);
        r.sigma_edge = e.sigma() * e.outward_y();
        const double rho = r.radius;
        for (int k = 0; k < samples; ++k) {
            const cplx w = std::polar(rho, 2.0 * std::numbers::pi * k / samples);
            const SurfacePoint p = model.evaluate(w);
            const double u = w.real(), v = w.imag();
            const double lam = p.dx.squaredNorm();
            const double F = std::sqrt(lam);
            const Vec3 Xr = (u * p.dx + v * p.dy) / rho;
            const double pos = (Xr - r.sigma_edge * F * p.value).norm();
            r.position = std::max(r.position, pos);
            r.relative = std::max(r.relative, pos / F);
            const double lam_u = 2.0 * p.dx.dot(p.dxx), lam_v = 2.0 * p.dx.dot(p.dxy);
            const double lam_r = (u * lam_u + v * lam_v) / rho;
            r.factor = std::max(r.factor, std::abs(1.0 / rho + lam_r / (2.0 * lam) - r.sigma_edge * F));
            const cplx g = w * w * fundamental_forms(p).hopf();
            r.beta = std::max(r.beta, std::abs(g.imag()));
        }
        out.push_back(r);
    }
    return out;
}

std::vector<BoundaryRelation> boundary_curvature_relations(const PlaneModel& model, int samples) {
    return boundary_curvature_relations(model, model.strip()->free_edges(), samples);
}

double gaussian_curvature_identity(const PlaneModel& model, double c, int nx, int ny) {
    const StripDomain d = model.strip()->domain();
    double worst = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double y = d.y_lo + (j + 0.5) * d.height() / ny;
        for (int i = 0; i < nx; ++i) {
            const cplx w = model.to_plane(cplx{d.period * i / nx, y});
            const FundamentalForms f = fundamental_forms(model.evaluate(w));
            const double q = std::abs(c) / std::norm(w);
            const double K_id = -q * q / (f.metric * f.metric);
            const double diff = std::abs(f.K - K_id);
            worst = std::max(worst, f.K != 0.0 ? diff / std::abs(f.K) : diff);
        }
    }
    return worst;
}

double curvature_density(const AnalyticSurface& surface, double y, int nx, bool absolute) {
    const StripDomain d = surface.domain();
    if (!d.periodic()) throw InputError("curvature quadrature needs a periodic chart");
    double sum = 0.0;
    for (int i = 0; i < nx; ++i) {
        const FundamentalForms f = fundamental_forms(surface, d.period * i / nx, y);
        const double k = f.K * f.metric;
        sum += absolute ? std::abs(k) : k;
    }
    return sum * d.period / nx;
}

double curvature_integral(const AnalyticSurface& surface, double y_lo, double y_hi, int nx, bool absolute,
                          double max_panel) {
    if (!(y_hi > y_lo)) return 0.0;
    const int panels = std::max(1, static_cast<int>(std::ceil((y_hi - y_lo) / max_panel)));
    const double w = (y_hi - y_lo) / panels;
    auto g = [&](double y) { return curvature_density(surface, y, nx, absolute); };
    double total = 0.0;
    for (int k = 0; k < panels; ++k)
        total += boost::math::quadrature::gauss<double, 20>::integrate(g, y_lo + k * w, y_lo + (k + 1) * w);
    return total;
}

TotalCurvature total_curvature(const AnalyticSurface& surface, int nx, double fit_distance) {
    const StripDomain d = surface.domain();
    TotalCurvature r;
    r.value = curvature_integral(surface, d.y_lo, d.y_hi, nx);
    const double dist = fit_distance > 0.0 ? fit_distance : std::min(1.0, d.height() / 4.0);
    auto end_tail = [&](double end, double inward, double& rate) {
        const double i0 = curvature_density(surface, end, nx);
        const double i1 = curvature_density(surface, end + inward * dist, nx);
        const double i2 = curvature_density(surface, end + 2.0 * inward * dist, nx);
        rate = 0.0;
        if (i0 == 0.0 || i1 == 0.0 || i0 / i1 <= 0.0 || std::abs(i1) <= std::abs(i0)) return 0.0;
        rate = std::log(i1 / i0) / dist;
        const double predicted = i0 * std::exp(2.0 * rate * dist);
        r.fit_residual = std::max(r.fit_residual, std::abs(predicted - i2) / std::abs(i2));
        return i0 / rate;
    };
    r.tail = end_tail(d.y_lo, 1.0, r.rate_lo) + end_tail(d.y_hi, -1.0, r.rate_hi);
    r.total = r.value + r.tail;
    return r;
}

FluxReport flux(const AnalyticSurface& surface, const BoundaryEdge& edge, int nodes) {
    const StripDomain d = surface.domain();
    if (!d.periodic()) throw InputError("flux needs a closed (periodic) boundary");
    if (nodes < 64) throw InputError("flux quadrature needs at least 64 nodes");
    FluxReport r;
    const double dx = d.period / nodes;
    for (int k = 0; k < nodes; ++k) {
        const SurfacePoint p = surface.evaluate(d.period * k / nodes, edge.y);
        r.flux += edge.outward_y() * p.dy * dx;
        r.steklov_side += edge.sigma() * p.value * p.dx.norm() * dx;
    }
    r.identity_residual = (r.flux - r.steklov_side).norm();
    return r;
}

ConvexityReport boundary_convexity(const AnalyticSurface& surface, const BoundaryEdge& edge, int nodes) {
    const StripDomain d = surface.domain();
    std::vector<double> kappa;
    for (int k = 0; k < nodes; ++k) {
        const SurfacePoint p = surface.evaluate(period_or_unit(d) * k / nodes, edge.y);
        const double speed = p.dx.norm();
        kappa.push_back(p.dx.cross(p.dxx).dot(p.value) / (speed * speed * speed));
    }
    ConvexityReport r;
    r.min_curvature = *std::min_element(kappa.begin(), kappa.end());
    r.max_curvature = *std::max_element(kappa.begin(), kappa.end());
    double mean = 0.0;
    for (double k : kappa) mean += k;
    const double s = mean < 0.0 ? -1.0 : 1.0;
    r.indicator = std::numeric_limits<double>::infinity();
    for (double k : kappa) r.indicator = std::min(r.indicator, s * k);
    return r;
}

std::vector<GaussMapSample> gauss_map_samples(const AnalyticSurface& surface, int nx, int ny) {
    const StripDomain d = surface.domain();
    std::vector<GaussMapSample> out;
    out.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j) {
        const double y = d.y_lo + (j + 0.5) * d.height() / ny;
        for (int i = 0; i < nx; ++i) {
            const double x = period_or_unit(d) * i / nx;
            const SurfacePoint p = surface.evaluate(x, y);
            out.push_back({x, y, p.dx.cross(p.dy).normalized()});
        }
    }
    return out;
}

InjectivityReport injectivity_scan(const std::vector<GaussMapSample>& samples) {
    InjectivityReport r;
    r.min_angle = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Vec3& a = samples[i].normal;
        r.unit_error = std::max(r.unit_error, std::abs(a.norm() - 1.0));
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const Vec3& b = samples[j].normal;
            const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
            if (angle < r.min_angle) {
                r.min_angle = angle;
                r.first = i;
                r.second = j;
            }
        }
    }
    return r;
}

SuperharmonicReport superharmonic_checks(const AnalyticSurface& surface, int samples, std::uint64_t seed,
                                         double fd_step) {
    const StripDomain d = surface.domain();
    SuperharmonicReport r;
    r.samples = samples;
    r.log_max = -std::numeric_limits<double>::infinity();
    r.log_min = std::numeric_limits<double>::infinity();
    const double margin = std::max(1.5 * fd_step, 0.02 * d.height());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, period_or_unit(d));
    std::uniform_real_distribution<double> uy(d.y_lo + margin, d.y_hi - margin);
    auto r2 = [&](double x, double y) { return surface.position(x, y).squaredNorm(); };
    auto lap = [&](double x, double y, double h) {
        return (r2(x + h, y) + r2(x - h, y) + r2(x, y + h) + r2(x, y - h) - 4.0 * r2(x, y)) / (h * h);
    };
    for (int i = 0; i < samples; ++i) {
        const double x = ux(rng), y = uy(rng);
        const SurfacePoint p = surface.evaluate(x, y);
        const double lam = p.dx.squaredNorm();
        const double lap_r2 = richardson(lap(x, y, fd_step), lap(x, y, fd_step / 2)) / lam;
        r.laplacian_r2 = std::max(r.laplacian_r2, std::abs(lap_r2 - 4.0));
        // Delta log r = (Delta g / g - |grad g|^2 / g^2) / 2 with g = r^2.
        const double g = p.value.squaredNorm();
        const double gx = 2.0 * p.value.dot(p.dx), gy = 2.0 * p.value.dot(p.dy);
        const double lg = 2.0 * (p.value.dot(p.dxx + p.dyy) + p.dx.squaredNorm() + p.dy.squaredNorm());
        const double lap_k = -0.5 * (lg / g - (gx * gx + gy * gy) / (g * g)) / lam;
        r.log_max = std::max(r.log_max, lap_k);
        r.log_min = std::min(r.log_min, lap_k);
    }
    for (const auto& e : surface.free_edges()) {
        for (int k = 0; k < 128; ++k) {
            const SurfacePoint p = surface.evaluate(period_or_unit(d) * k / 128, e.y);
            const double rr = p.value.squaredNorm();
            r.boundary_value = std::max(r.boundary_value, std::abs(0.5 * std::log(rr)));
            // Inward conormal derivative: -outward_y * d/dy / F.
            const double dk = e.outward_y() * p.value.dot(p.dy) / (p.dx.norm() * rr);
            r.boundary_normal = std::max(r.boundary_normal, std::abs(dk - e.sigma()));
        }
    }
    return r;
}

CurvatureLineReport curvature_line_forms_check(const AnalyticSurface& surface, int nx, int ny) {
    const StripDomain d = surface.domain();
    CurvatureLineReport r;
    struct Sample {
        SurfacePoint p;
        FundamentalForms f;
    };
    std::vector<Sample> pts;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const SurfacePoint p = surface.evaluate(period_or_unit(d) * i / nx, d.y_lo + (j + 0.5) * d.height() / ny);
            pts.push_back({p, fundamental_forms(p)});
        }
    for (const auto& s : pts)
        if (!(s.f.K < 0.0)) {
            r.status = "skipped";
            return r;
        }
    cplx mean{};
    for (const auto& s : pts) mean += s.f.hopf();
    mean /= static_cast<double>(pts.size());
    r.kappa_min = std::numeric_limits<double>::infinity();
    for (const auto& s : pts) {
        r.hopf_spread = std::max(r.hopf_spread, std::abs(s.f.hopf() - mean) / std::abs(mean));
        // d zeta = sqrt(f) dz: the xi and eta directions in (x, y) are z' and i z', z' = 1 / sqrt(f).
        const cplx zp = 1.0 / std::sqrt(s.f.hopf());
        const Eigen::Vector2d a(zp.real(), zp.imag()), b(-zp.imag(), zp.real());
        Eigen::Matrix2d I, II;
        I << s.p.dx.dot(s.p.dx), s.p.dx.dot(s.p.dy), s.p.dx.dot(s.p.dy), s.p.dy.dot(s.p.dy);
        II << s.f.L, s.f.M, s.f.M, s.f.N;
        const double kappa = std::abs(s.f.hopf()) / s.f.metric;
        r.kappa_min = std::min(r.kappa_min, kappa);
        r.kappa_max = std::max(r.kappa_max, kappa);
        r.first_form = std::max({r.first_form, std::abs(kappa * a.dot(I * a) - 1.0), std::abs(kappa * a.dot(I * b)),
                                 std::abs(kappa * b.dot(I * b) - 1.0)});
        r.second_form =
            std::max({r.second_form, std::abs(a.dot(II * a) - 1.0), std::abs(a.dot(II * b)), std::abs(b.dot(II * b) + 1.0)});
        r.diagonalization = std::max(r.diagonalization, std::abs(a.dot(II * b)));
    }
    r.status = r.hopf_spread <= 1e-6 ? "ok" : "general";
    return r;
}

CurvatureReport curvature_report(const PlaneModel& model, const std::vector<BoundaryEdge>& lines, int nx, int ny) {
    CurvatureReport r;
    const AnalyticSurface& s = *model.strip();
    r.hopf = hopf_scan(model, nx, ny, 0.0);
    r.total = total_curvature(s, nx);
    for (const auto& e : lines) {
        CurvatureReport::Line l;
        l.label = e.label;
        l.flux = flux(s, e, std::max(64, nx)).flux;
        l.steklov = verify_steklov(s, e).max_residual;
        l.schwarz = reflection_fields(model.strip(), e).schwarz;
        l.convexity = boundary_convexity(s, e).indicator;
        r.flux_sum += l.flux;
        r.lines.push_back(l);
    }
    return r;
}

}  // namespace fbr
