#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fbr {

using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

/// Position and exact partial derivatives of a parametrized surface at one chart point.
struct SurfacePoint {
    Vec3 value = Vec3::Zero();
    Vec3 dx = Vec3::Zero();
    Vec3 dy = Vec3::Zero();
    Vec3 dxx = Vec3::Zero();
    Vec3 dxy = Vec3::Zero();
    Vec3 dyy = Vec3::Zero();
};

/// Which side of a boundary line y = const the surface occupies in its chart.
enum class EdgeSide { above, below };

/// Whether the surface lies inside or outside the unit ball near a free boundary.
/// Controls the sign of the Steklov identity (psi = sigma * d psi / d nu, sigma = +-1).
enum class BallSide { interior, exterior };

struct BoundaryEdge {
    std::string label;
    double y = 0.0;
    EdgeSide side = EdgeSide::above;
    /// Free boundary: the edge lies on the unit sphere and carries the Steklov condition.
    bool free = false;
    BallSide ball_side = BallSide::interior;

    double sigma() const { return ball_side == BallSide::interior ? 1.0 : -1.0; }
    /// +1 when the outward conormal points toward increasing y.
    double outward_y() const { return side == EdgeSide::above ? -1.0 : 1.0; }
};

/// Parameter domain: a horizontal strip R x (y_lo, y_hi), periodic in x with `period`.
/// `period == 0` marks a non-periodic chart.
struct StripDomain {
    double period = 0.0;
    double y_lo = 0.0;
    double y_hi = 1.0;

    double height() const { return y_hi - y_lo; }
    bool periodic() const { return period > 0.0; }
};

/// Conformal parametrization Psi(x, y) -> R^3 with exact first and second derivatives.
/// Implementations are immutable; evaluation is thread-safe.
class AnalyticSurface {
public:
    virtual ~AnalyticSurface() = default;

    virtual SurfacePoint evaluate(double x, double y) const = 0;
    virtual StripDomain domain() const = 0;
    virtual std::vector<BoundaryEdge> edges() const { return {}; }
    virtual std::string name() const = 0;
    /// True when every coordinate function is harmonic in the chart.
    virtual bool harmonic() const { return true; }

    Vec3 position(double x, double y) const { return evaluate(x, y).value; }
    std::optional<BoundaryEdge> edge(const std::string& label) const;
    std::vector<BoundaryEdge> free_edges() const;
};

using SurfacePtr = std::shared_ptr<const AnalyticSurface>;

/// Holomorphic change of variables z = G(zeta) with its first two derivatives.
struct HolomorphicJet {
    cplx value;
    cplx d1;
    cplx d2;
};
using HolomorphicMapFn = std::function<HolomorphicJet(cplx)>;

/// Exact chain rule for Psi(G(zeta)) where G is holomorphic. Works for any smooth Psi.
SurfacePoint compose(const SurfacePoint& p, const HolomorphicJet& g);

/// Psi(G(x + i y)) as a surface; domain, edges and name are supplied by the caller.
class ReparametrizedSurface final : public AnalyticSurface {
public:
    ReparametrizedSurface(SurfacePtr base, HolomorphicMapFn map, StripDomain domain,
                          std::vector<BoundaryEdge> edges, std::string name);

    SurfacePoint evaluate(double x, double y) const override;
    StripDomain domain() const override { return domain_; }
    std::vector<BoundaryEdge> edges() const override { return edges_; }
    std::string name() const override { return name_; }
    bool harmonic() const override { return base_->harmonic(); }
    const SurfacePtr& base() const { return base_; }

private:
    SurfacePtr base_;
    HolomorphicMapFn map_;
    StripDomain domain_;
    std::vector<BoundaryEdge> edges_;
    std::string name_;
};

/// Rechart so that `edge` sits on y = 0 with the surface above it. For an edge with the
/// surface below, the chart is rotated by pi about the edge point (x, y_e):
/// z = i y_e - zeta, which keeps the change of variables holomorphic.
SurfacePtr orient_to_edge(const SurfacePtr& surface, const BoundaryEdge& edge);

/// Inverse of the chart map used by orient_to_edge: maps an oriented-chart point back.
cplx edge_chart_to_source(const BoundaryEdge& edge, cplx zeta);
cplx source_to_edge_chart(const BoundaryEdge& edge, cplx z);

/// s * Psi: the same surface in a ball of radius s.
SurfacePtr scaled(const SurfacePtr& surface, double s);

/// Sampled invariant residuals of an AnalyticSurface (harmonicity, conformality,
/// free edges on the unit sphere).
struct SurfaceInvariantReport {
    double harmonicity = 0.0;   // max |Psi_xx + Psi_yy| / max(1, |Psi_x|^2)^(1/2)
    double conformality = 0.0;  // max of | |Psi_x|^2 - |Psi_y|^2 | and |Psi_x . Psi_y|, relative to |Psi_x|^2
    double sphere = 0.0;        // max | |Psi| - 1 | over free edges
};

SurfaceInvariantReport check_surface_invariants(const AnalyticSurface& surface, int samples,
                                                std::uint64_t seed);

}  // namespace fbr
