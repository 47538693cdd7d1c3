#include "fbr/surface.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fbr/errors.hpp"

namespace fbr {

std::optional<BoundaryEdge> AnalyticSurface::edge(const std::string& label) const {
    for (const auto& e : edges())
        if (e.label == label) return e;
    return std::nullopt;
}

std::vector<BoundaryEdge> AnalyticSurface::free_edges() const {
    std::vector<BoundaryEdge> out;
    for (const auto& e : edges())
        if (e.free) out.push_back(e);
    return out;
}

SurfacePoint compose(const SurfacePoint& p, const HolomorphicJet& g) {
    const double xX = g.d1.real(), yX = g.d1.imag();
    const double xY = -yX, yY = xX;
    const double xXX = g.d2.real(), yXX = g.d2.imag();
    const double xXY = -yXX, yXY = xXX;
    const double xYY = -xXX, yYY = -yXX;

    SurfacePoint q;
    q.value = p.value;
    q.dx = p.dx * xX + p.dy * yX;
    q.dy = p.dx * xY + p.dy * yY;
    q.dxx = p.dxx * (xX * xX) + p.dxy * (2.0 * xX * yX) + p.dyy * (yX * yX) + p.dx * xXX + p.dy * yXX;
    q.dxy = p.dxx * (xX * xY) + p.dxy * (xX * yY + xY * yX) + p.dyy * (yX * yY) + p.dx * xXY + p.dy * yXY;
    q.dyy = p.dxx * (xY * xY) + p.dxy * (2.0 * xY * yY) + p.dyy * (yY * yY) + p.dx * xYY + p.dy * yYY;
    return q;
}

ReparametrizedSurface::ReparametrizedSurface(SurfacePtr base, HolomorphicMapFn map, StripDomain domain,
                                             std::vector<BoundaryEdge> edges, std::string name)
    : base_(std::move(base)), map_(std::move(map)), domain_(domain), edges_(std::move(edges)), name_(std::move(name)) {
    if (!base_) throw InputError("reparametrization of a null surface");
}

SurfacePoint ReparametrizedSurface::evaluate(double x, double y) const {
    const HolomorphicJet g = map_(cplx{x, y});
    return compose(base_->evaluate(g.value.real(), g.value.imag()), g);
}

cplx edge_chart_to_source(const BoundaryEdge& edge, cplx zeta) {
    const cplx shift{0.0, edge.y};
    return edge.side == EdgeSide::above ? zeta + shift : shift - zeta;
}

cplx source_to_edge_chart(const BoundaryEdge& edge, cplx z) {
    const cplx shift{0.0, edge.y};
    return edge.side == EdgeSide::above ? z - shift : shift - z;
}

SurfacePtr orient_to_edge(const SurfacePtr& surface, const BoundaryEdge& edge) {
    const StripDomain d = surface->domain();
    StripDomain nd = d;
    nd.y_lo = 0.0;
    nd.y_hi = edge.side == EdgeSide::above ? d.y_hi - edge.y : edge.y - d.y_lo;
    if (!(nd.y_hi > 0.0)) throw InputError("edge " + edge.label + " does not bound the surface's domain");

    std::vector<BoundaryEdge> moved;
    for (auto e : surface->edges()) {
        const cplx p = source_to_edge_chart(edge, cplx{0.0, e.y});
        e.y = p.imag();
        if (edge.side == EdgeSide::below) e.side = e.side == EdgeSide::above ? EdgeSide::below : EdgeSide::above;
        moved.push_back(e);
    }
    const double sgn = edge.side == EdgeSide::above ? 1.0 : -1.0;
    HolomorphicMapFn map = [edge, sgn](cplx zeta) {
        return HolomorphicJet{edge_chart_to_source(edge, zeta), cplx{sgn, 0.0}, cplx{0.0, 0.0}};
    };
    return std::make_shared<ReparametrizedSurface>(surface, std::move(map), nd, std::move(moved),
                                                   surface->name() + "@" + edge.label);
}

namespace {

class ScaledSurface final : public AnalyticSurface {
public:
    ScaledSurface(SurfacePtr base, double s) : base_(std::move(base)), s_(s) {}
    SurfacePoint evaluate(double x, double y) const override {
        SurfacePoint p = base_->evaluate(x, y);
        for (Vec3* v : {&p.value, &p.dx, &p.dy, &p.dxx, &p.dxy, &p.dyy}) *v *= s_;
        return p;
    }
    StripDomain domain() const override { return base_->domain(); }
    std::vector<BoundaryEdge> edges() const override { return base_->edges(); }
    std::string name() const override { return base_->name() + "*" + std::to_string(s_); }
    bool harmonic() const override { return base_->harmonic(); }

private:
    SurfacePtr base_;
    double s_;
};

}  // namespace

SurfacePtr scaled(const SurfacePtr& surface, double s) {
    if (!(s > 0.0)) throw InputError("scale factor must be positive");
    return std::make_shared<ScaledSurface>(surface, s);
}

SurfaceInvariantReport check_surface_invariants(const AnalyticSurface& surface, int samples, std::uint64_t seed) {
    SurfaceInvariantReport r;
    const StripDomain d = surface.domain();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, d.periodic() ? d.period : 2.0);
    std::uniform_real_distribution<double> uy(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        const double x = ux(rng);
        const double y = d.y_lo + (0.02 + 0.96 * uy(rng)) * d.height();
        const SurfacePoint p = surface.evaluate(x, y);
        const double e = p.dx.squaredNorm();
        r.harmonicity = std::max(r.harmonicity, (p.dxx + p.dyy).norm() / std::max(1.0, p.dxx.norm()));
        const double conf = std::max(std::abs(e - p.dy.squaredNorm()), std::abs(p.dx.dot(p.dy)));
        r.conformality = std::max(r.conformality, conf / std::max(1.0, e));
    }
    for (const auto& edge : surface.free_edges()) {
        for (int i = 0; i < samples; ++i) {
            const double x = ux(rng);
            r.sphere = std::max(r.sphere, std::abs(surface.position(x, edge.y).norm() - 1.0));
        }
    }
    return r;
}

}  // namespace fbr
