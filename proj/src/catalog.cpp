#include "fbr/catalog.hpp"

#include <cmath>
#include <numbers>

#include "fbr/errors.hpp"
#include "fbr/surface_file.hpp"

namespace fbr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Writes Re F and Im F (both harmonic) into the first two coordinates.
void planar_from_holomorphic(SurfacePoint& p, cplx f, cplx f1, cplx f2) {
    // psi = Re F: psi_x = Re F', psi_y = -Im F', psi_xx = Re F'', psi_xy = -Im F''.
    // Im F = Re(-i F).
    const cplx g = cplx{0.0, -1.0} * f, g1 = cplx{0.0, -1.0} * f1, g2 = cplx{0.0, -1.0} * f2;
    p.value = Vec3(f.real(), g.real(), 0.0);
    p.dx = Vec3(f1.real(), g1.real(), 0.0);
    p.dy = Vec3(-f1.imag(), -g1.imag(), 0.0);
    p.dxx = Vec3(f2.real(), g2.real(), 0.0);
    p.dxy = Vec3(-f2.imag(), -g2.imag(), 0.0);
    p.dyy = -p.dxx;
}

class CatenoidBand final : public AnalyticSurface {
public:
    CatenoidBand(double c, double t_start, int dir, double height, std::string name)
        : c_(c), t_start_(t_start), dir_(dir), height_(height), name_(std::move(name)) {
        edges_.push_back(classify_edge(*this, "gamma1", 0.0, EdgeSide::above, 1e-10));
        edges_.push_back(classify_edge(*this, "gamma2", height_, EdgeSide::below, 1e-10));
    }

    SurfacePoint evaluate(double x, double y) const override {
        const double t = t_start_ + dir_ * y;
        const double ch = std::cosh(t), sh = std::sinh(t), cx = std::cos(x), sx = std::sin(x);
        const double d = static_cast<double>(dir_);
        SurfacePoint p;
        p.value = c_ * Vec3(ch * cx, ch * sx, t);
        p.dx = c_ * Vec3(-ch * sx, ch * cx, 0.0);
        p.dy = d * c_ * Vec3(sh * cx, sh * sx, 1.0);
        p.dxx = c_ * Vec3(-ch * cx, -ch * sx, 0.0);
        p.dxy = d * c_ * Vec3(-sh * sx, sh * cx, 0.0);
        p.dyy = c_ * Vec3(ch * cx, ch * sx, 0.0);
        return p;
    }
    StripDomain domain() const override { return {kTwoPi, 0.0, height_}; }
    std::vector<BoundaryEdge> edges() const override { return edges_; }
    std::string name() const override { return name_; }

private:
    double c_, t_start_;
    int dir_;
    double height_;
    std::string name_;
    std::vector<BoundaryEdge> edges_;
};

class EquatorialDisk final : public AnalyticSurface {
public:
    explicit EquatorialDisk(double y_max) : y_max_(y_max) {}
    SurfacePoint evaluate(double x, double y) const override {
        const double e = std::exp(-y);
        SurfacePoint p;
        p.value = e * Vec3(std::cos(x), std::sin(x), 0.0);
        p.dx = e * Vec3(-std::sin(x), std::cos(x), 0.0);
        p.dy = -p.value;
        p.dxx = -p.value;
        p.dxy = -p.dx;
        p.dyy = p.value;
        return p;
    }
    StripDomain domain() const override { return {kTwoPi, 0.0, y_max_}; }
    std::vector<BoundaryEdge> edges() const override {
        return {BoundaryEdge{"gamma1", 0.0, EdgeSide::above, true, BallSide::interior},
                BoundaryEdge{"cut", y_max_, EdgeSide::below, false, BallSide::interior}};
    }
    std::string name() const override { return "equatorial-disk"; }

private:
    double y_max_;
};

class WarpedDisk final : public AnalyticSurface {
public:
    WarpedDisk(double eps, double y_max) : eps_(eps), y_max_(y_max) {}
    SurfacePoint evaluate(double x, double y) const override {
        const cplx z{x, y}, i{0.0, 1.0};
        const cplx q = z + eps_ * std::sin(z), q1 = 1.0 + eps_ * std::cos(z), q2 = -eps_ * std::sin(z);
        const cplx f = std::exp(i * q);
        SurfacePoint p;
        planar_from_holomorphic(p, f, i * q1 * f, (i * q2 - q1 * q1) * f);
        return p;
    }
    StripDomain domain() const override { return {kTwoPi, 0.0, y_max_}; }
    std::vector<BoundaryEdge> edges() const override {
        return {BoundaryEdge{"gamma1", 0.0, EdgeSide::above, true, BallSide::interior},
                BoundaryEdge{"cut", y_max_, EdgeSide::below, false, BallSide::interior}};
    }
    std::string name() const override { return "warped-disk:" + std::to_string(eps_); }

private:
    double eps_, y_max_;
};

class WarpedPlane final : public AnalyticSurface {
public:
    explicit WarpedPlane(double eps) : eps_(eps) {}
    SurfacePoint evaluate(double x, double y) const override {
        const cplx z{x, y};
        const double pi = std::numbers::pi;
        const cplx f = z + eps_ * std::sin(pi * z) / pi;
        const cplx f1 = 1.0 + eps_ * std::cos(pi * z);
        const cplx f2 = -eps_ * pi * std::sin(pi * z);
        SurfacePoint p;
        planar_from_holomorphic(p, f, f1, f2);
        return p;
    }
    StripDomain domain() const override { return {2.0, 0.0, 1.0}; }
    std::vector<BoundaryEdge> edges() const override {
        return {BoundaryEdge{"gamma1", 0.0, EdgeSide::above, false, BallSide::interior}};
    }
    std::string name() const override { return "warped-plane:" + std::to_string(eps_); }

private:
    double eps_;
};

class SpherePatch final : public AnalyticSurface {
public:
    SpherePatch(double r, double span) : r_(r), span_(span) {}
    SurfacePoint evaluate(double x, double y) const override {
        const double s = 1.0 / std::cosh(y), t = std::tanh(y);
        const double s1 = -s * t, t1 = s * s;
        const double s2 = s * t * t - s * s * s, t2 = -2.0 * s * s * t;
        const double cx = std::cos(x), sx = std::sin(x);
        SurfacePoint p;
        p.value = r_ * Vec3(s * cx, s * sx, t);
        p.dx = r_ * s * Vec3(-sx, cx, 0.0);
        p.dy = r_ * Vec3(s1 * cx, s1 * sx, t1);
        p.dxx = r_ * s * Vec3(-cx, -sx, 0.0);
        p.dxy = r_ * s1 * Vec3(-sx, cx, 0.0);
        p.dyy = r_ * Vec3(s2 * cx, s2 * sx, t2);
        return p;
    }
    StripDomain domain() const override { return {kTwoPi, -span_, span_}; }
    std::string name() const override { return "sphere:" + std::to_string(r_); }
    bool harmonic() const override { return false; }

private:
    double r_, span_;
};

class FlatPlane final : public AnalyticSurface {
public:
    SurfacePoint evaluate(double x, double y) const override {
        SurfacePoint p;
        p.value = Vec3(x, y, 0.0);
        p.dx = Vec3(1.0, 0.0, 0.0);
        p.dy = Vec3(0.0, 1.0, 0.0);
        return p;
    }
    StripDomain domain() const override { return {0.0, -1.0, 1.0}; }
    std::string name() const override { return "plane"; }
};

double parse_param(const std::string& selector, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw InputError("surface selector '" + selector + "': malformed parameter '" + text + "'");
    }
}

}  // namespace

double CatenoidConstants::boundary_radius() const { return c * std::cosh(t0); }
double CatenoidConstants::boundary_height() const { return c * t0; }

const CatenoidConstants& critical_catenoid_constants() {
    static const CatenoidConstants k = [] {
        double lo = 1.0, hi = 1.5;
        auto g = [](double t) { return t * std::tanh(t) - 1.0; };
        while (hi - lo > 0.0) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (g(mid) > 0.0 ? hi : lo) = mid;
        }
        const double t0 = 0.5 * (lo + hi);
        return CatenoidConstants{t0, 1.0 / std::sqrt(std::cosh(t0) * std::cosh(t0) + t0 * t0)};
    }();
    return k;
}

BoundaryEdge classify_edge(const AnalyticSurface& surface, std::string label, double y, EdgeSide side,
                           double sphere_tol) {
    BoundaryEdge e{std::move(label), y, side, false, BallSide::interior};
    const StripDomain d = surface.domain();
    const double span = d.periodic() ? d.period : 2.0;
    double dev = 0.0, radial = 0.0;
    constexpr int kSamples = 16;
    for (int i = 0; i < kSamples; ++i) {
        const double x = span * (i + 0.5) / kSamples;
        const SurfacePoint p = surface.evaluate(x, y);
        dev = std::max(dev, std::abs(p.value.norm() - 1.0));
        // d|Psi|^2 in the inward (into the surface) y direction.
        radial += p.value.dot(p.dy) * (side == EdgeSide::above ? 1.0 : -1.0);
    }
    e.free = dev <= sphere_tol;
    e.ball_side = radial < 0.0 ? BallSide::interior : BallSide::exterior;
    return e;
}

SurfacePtr catenoid_band(double c, double t_start, int direction, double height, std::string name) {
    if (direction != 1 && direction != -1) throw InputError("catenoid band direction must be +1 or -1");
    if (!(c > 0.0) || !(height > 0.0)) throw InputError("catenoid band needs c > 0 and height > 0");
    return std::make_shared<CatenoidBand>(c, t_start, direction, height, std::move(name));
}

SurfacePtr critical_catenoid() {
    const auto& k = critical_catenoid_constants();
    return catenoid_band(k.c, k.t0, -1, 2.0 * k.t0, "critical-catenoid");
}

SurfacePtr exterior_critical_catenoid() {
    const auto& k = critical_catenoid_constants();
    return catenoid_band(k.c, k.t0, 1, 2.0 * k.t0, "exterior-catenoid");
}

SurfacePtr noncritical_catenoid(double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw InputError("noncritical catenoid fraction must be in (0, 1)");
    const double t1 = fraction * critical_catenoid_constants().t0;
    const double c = 1.0 / std::sqrt(std::cosh(t1) * std::cosh(t1) + t1 * t1);
    return catenoid_band(c, t1, -1, 2.0 * t1, "noncritical-catenoid:" + std::to_string(fraction));
}

SurfacePtr equatorial_disk(double y_max) {
    if (!(y_max > 0.0)) throw InputError("disk truncation must be positive");
    return std::make_shared<EquatorialDisk>(y_max);
}

SurfacePtr warped_disk(double eps, double y_max) {
    if (!(std::abs(eps) < 1.0)) throw InputError("warped disk needs |eps| < 1");
    return std::make_shared<WarpedDisk>(eps, y_max);
}

SurfacePtr warped_plane(double eps) {
    if (!(std::abs(eps) < 1.0)) throw InputError("warped plane needs |eps| < 1");
    return std::make_shared<WarpedPlane>(eps);
}

SurfacePtr sphere_patch(double radius, double y_span) {
    if (!(radius > 0.0)) throw InputError("sphere radius must be positive");
    return std::make_shared<SpherePatch>(radius, y_span);
}

SurfacePtr flat_plane() { return std::make_shared<FlatPlane>(); }

SeriesSurface::SeriesSurface(std::array<HarmonicStripFunction, 3> components, double height, std::string name)
    : comps_(std::move(components)), height_(height), name_(std::move(name)) {
    for (const auto& c : comps_)
        if (std::abs(c.period() - comps_[0].period()) > 1e-12 * comps_[0].period())
            throw InputError("surface components have different periods");
    if (!(height_ > 0.0)) throw InputError("surface height must be positive");
    edges_.push_back(classify_edge(*this, "gamma1", 0.0, EdgeSide::above));
    edges_.push_back(classify_edge(*this, "gamma2", height_, EdgeSide::below));
}

SurfacePoint SeriesSurface::evaluate(double x, double y) const {
    SurfacePoint p;
    for (int k = 0; k < 3; ++k) {
        const ScalarJet j = comps_[static_cast<std::size_t>(k)].jet(x, y);
        p.value[k] = j.value;
        p.dx[k] = j.dx;
        p.dy[k] = j.dy;
        p.dxx[k] = j.dxx;
        p.dxy[k] = j.dxy;
        p.dyy[k] = j.dyy;
    }
    return p;
}

StripDomain SeriesSurface::domain() const { return {comps_[0].period(), 0.0, height_}; }

SurfacePtr catalog_surface(const std::string& selector) {
    const auto colon = selector.find(':');
    const std::string name = selector.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : selector.substr(colon + 1);
    auto need = [&]() {
        if (arg.empty()) throw InputError("surface selector '" + selector + "' needs a parameter");
        return parse_param(selector, arg);
    };
    if (name == "critical-catenoid") return critical_catenoid();
    if (name == "exterior-catenoid") return exterior_critical_catenoid();
    if (name == "noncritical-catenoid") return noncritical_catenoid(need());
    if (name == "equatorial-disk") return arg.empty() ? equatorial_disk() : equatorial_disk(need());
    if (name == "warped-disk") return warped_disk(need());
    if (name == "warped-plane") return warped_plane(need());
    if (name == "sphere") return sphere_patch(need());
    if (name == "plane") return flat_plane();
    if (name == "file") return load_surface(arg);
    throw InputError("unknown surface selector '" + selector + "'");
}

}  // namespace fbr
