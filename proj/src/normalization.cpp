#include "fbr/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "fbr/errors.hpp"
#include "fbr/format.hpp"

namespace fbr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNoWinding = std::numeric_limits<int>::min();

}  // namespace

TrigPolynomial boundary_conformal_factor(const AnalyticSurface& surface, const BoundaryEdge& edge, int samples) {
    const StripDomain d = surface.domain();
    if (!d.periodic()) throw InputError("conformal factor trace needs a periodic chart");
    if (samples < 3) throw InputError("conformal factor trace needs at least 3 samples");
    std::vector<double> f(static_cast<std::size_t>(samples));
    double lo = INFINITY;
    for (int j = 0; j < samples; ++j) {
        f[static_cast<std::size_t>(j)] = surface.evaluate(d.period * j / samples, edge.y).dx.norm();
        lo = std::min(lo, f[static_cast<std::size_t>(j)]);
    }
    if (!(lo > 1e-12)) throw InputError("degenerate parametrization: |Psi_x| vanishes on edge " + edge.label);
    TrigPolynomial F = fourier_analyze(f, d.period);
    F.prune(F.degree(), 1e-14);
    return F;
}

int PunctureSet::total_multiplicity() const {
    int m = 0;
    for (const auto& p : points) m += p.multiplicity;
    return m;
}

bool PunctureSet::excludes(cplx z, double period) const {
    for (const auto& p : points) {
        cplx d = z - p.z;
        if (period > 0.0) d.real(std::remainder(d.real(), period));
        if (std::abs(d) < exclusion_radius) return true;
    }
    return false;
}

NormalizationMap::NormalizationMap(HarmonicStripFunction X, HarmonicStripFunction Y, HolomorphicModel H,
                                   double period, double y_lo, double y_hi)
    : X_(std::move(X)), Y_(std::move(Y)), H_(std::move(H)), period_(period), y_lo_(y_lo), y_hi_(y_hi) {
    P_ = X_(period_, 0.0) - X_(0.0, 0.0);
    constexpr int kCols = 80, kRows = 24;
    for (int i = 0; i <= kCols; ++i)
        for (int j = 0; j <= kRows; ++j) {
            const cplx z{period_ * (-0.125 + 1.25 * i / kCols), y_lo_ + (y_hi_ - y_lo_) * j / kRows};
            try {
                table_.emplace_back(z, H_.value(z));
            } catch (const EvaluationRangeError&) {
            }
        }
    if (table_.empty()) throw InputError("normalization map cannot be evaluated on its source strip");
}

cplx NormalizationMap::inverse(cplx Z) const {
    // H(z + L) = H(z) + P: reduce to the tabulated period.
    const double k = std::floor(Z.real() / P_);
    const cplx Zr = Z - k * P_;
    cplx z = table_.front().first;
    double best = INFINITY;
    for (const auto& [zt, Ht] : table_) {
        const double d = std::norm(Ht - Zr);
        if (d < best) {
            best = d;
            z = zt;
        }
    }
    const double tol = 1e-14 * std::max(1.0, std::abs(Zr));
    cplx r = H_.value(z) - Zr;
    for (int it = 0; it < 100; ++it) {
        if (std::abs(r) <= tol) return z + k * period_;
        const cplx d1 = H_.derivative(z);
        if (std::abs(d1) == 0.0) break;
        cplx step = r / d1;
        double lambda = 1.0;
        for (int damp = 0; damp < 30; ++damp) {
            const cplx zn = z - lambda * step;
            try {
                const cplx rn = H_.value(zn) - Zr;
                if (std::abs(rn) < std::abs(r) || std::abs(rn) <= tol) {
                    z = zn;
                    r = rn;
                    break;
                }
            } catch (const EvaluationRangeError&) {
            }
            lambda *= 0.5;
            if (damp == 29) {
                // No decrease possible at round-off level: accept if already close.
                if (std::abs(r) <= 1e3 * tol) return z + k * period_;
                throw ConvergenceError("H inverse: Newton stalled at Z = (" + format_double(Z.real()) + ", " +
                                       format_double(Z.imag()) + ")");
            }
        }
    }
    if (std::abs(r) <= 1e3 * tol) return z + k * period_;
    throw ConvergenceError("H inverse: Newton did not converge at Z = (" + format_double(Z.real()) + ", " +
                           format_double(Z.imag()) + ")");
}

NormalizationMap build_normalization(const TrigPolynomial& F, double y_lo, double y_hi) {
    F.validate();
    double lo = INFINITY;
    for (int j = 0; j < 256; ++j) lo = std::min(lo, F(F.period * j / 256));
    if (!(lo > 0.0)) throw InputError("conformal factor trace must be strictly positive (min " + format_double(lo) + ")");
    if (F.drift != 0.0) throw InputError("conformal factor trace must be periodic");
    HarmonicStripFunction Y = solve_cauchy_neumann(F);
    HarmonicStripFunction X = conjugate_harmonic(Y);
    // completion G has Re G = Y and Im G = -X; H = X + i Y = i G.
    HolomorphicModel H = holomorphic_completion(Y, 0.0);
    H *= cplx{0.0, 1.0};
    H.period = F.period;
    return NormalizationMap(std::move(X), std::move(Y), std::move(H), F.period, y_lo, y_hi);
}

namespace {

/// Change of arg(f) along the segment a -> b, refining until each step is below 1 rad.
/// Returns NaN when |f| is tiny relative to `scale` on the path.
double arg_change(const HolomorphicModel& H, cplx a, cplx b, cplx fa, cplx fb, double scale, int depth) {
    const double floor = 1e-9 * scale;
    if (std::abs(fa) < floor || std::abs(fb) < floor) return NAN;
    const double d = std::arg(fb / fa);
    if (std::abs(d) < 1.0 && depth > 0) return d;
    if (depth > 48) return NAN;
    const cplx m = 0.5 * (a + b);
    const cplx fm = H.derivative(m);
    const double l = arg_change(H, a, m, fa, fm, scale, depth + 1);
    const double r = arg_change(H, m, b, fm, fb, scale, depth + 1);
    return l + r;
}

int cell_winding(const HolomorphicModel& H, cplx c00, cplx c10, cplx c11, cplx c01, double scale) {
    const cplx corners[5] = {c00, c10, c11, c01, c00};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const double d = arg_change(H, corners[e], corners[e + 1], H.derivative(corners[e]),
                                    H.derivative(corners[e + 1]), scale, 0);
        if (std::isnan(d)) return kNoWinding;
        total += d;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

cplx polish(const HolomorphicModel& H, cplx z, int multiplicity, double tol) {
    for (int it = 0; it < 200; ++it) {
        const cplx f = H.derivative_n(z, 1);
        if (std::abs(f) <= tol) return z;
        const cplx df = H.derivative_n(z, 2);
        if (std::abs(df) == 0.0) break;
        const cplx step = static_cast<double>(multiplicity) * f / df;
        double lambda = 1.0;
        bool moved = false;
        for (int d = 0; d < 40; ++d) {
            const cplx zn = z - lambda * step;
            if (std::abs(H.derivative_n(zn, 1)) < std::abs(f)) {
                z = zn;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) break;
    }
    return z;
}

}  // namespace

PunctureSet find_branch_points(const HolomorphicModel& H, const SearchRect& rect, int nx, int ny,
                               double exclusion_radius) {
    if (nx < 1 || ny < 1) throw InputError("branch point search grid must be at least 1x1");
    if (!(rect.x_hi > rect.x_lo && rect.y_hi > rect.y_lo)) throw InputError("empty branch point search rectangle");
    // The outer boundary is excluded: pull it in by a hair.
    const double w = rect.x_hi - rect.x_lo, h = rect.y_hi - rect.y_lo;
    const double inset = 1e-7 * std::max(w, h);
    const double x0 = rect.x_lo + inset, x1 = rect.x_hi - inset, y0 = rect.y_lo + inset, y1 = rect.y_hi - inset;

    double scale = 0.0;
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) scale = std::max(scale, std::abs(H.derivative(cplx{x0 + (x1 - x0) * i / 8, y0 + (y1 - y0) * j / 8})));
    scale = std::max(scale, 1e-300);

    PunctureSet out;
    out.exclusion_radius = exclusion_radius;
    const double tol = std::max(1e-12, 1e-14 * scale);

    for (int attempt = 0; attempt <= 3; ++attempt) {
        // Interior grid lines shifted on retries; outer lines fixed.
        constexpr double kShift[4] = {0.0, 0.137, -0.291, 0.413};
        const double off = kShift[attempt];
        auto gx = [&](int i) { return i == 0 ? x0 : i == nx ? x1 : x0 + (x1 - x0) * (i + off) / nx; };
        auto gy = [&](int j) { return j == 0 ? y0 : j == ny ? y1 : y0 + (y1 - y0) * (j - off) / ny; };
        bool failed = false;
        std::vector<Puncture> found;
        for (int i = 0; i < nx && !failed; ++i)
            for (int j = 0; j < ny && !failed; ++j) {
                const cplx c00{gx(i), gy(j)}, c10{gx(i + 1), gy(j)}, c11{gx(i + 1), gy(j + 1)}, c01{gx(i), gy(j + 1)};
                const int wnd = cell_winding(H, c00, c10, c11, c01, scale);
                if (wnd == kNoWinding) {
                    failed = true;
                    break;
                }
                if (wnd > 0) {
                    const cplx z = polish(H, 0.25 * (c00 + c10 + c11 + c01), wnd, tol);
                    found.push_back({z, wnd});
                }
            }
        if (failed) continue;
        const int total = cell_winding(H, {x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, scale);
        if (total == kNoWinding) continue;
        // Merge zeros polished to the same point from neighbouring cells.
        for (const auto& p : found) {
            auto it = std::find_if(out.points.begin(), out.points.end(),
                                   [&](const Puncture& q) { return std::abs(q.z - p.z) <= 2.0 * exclusion_radius; });
            if (it == out.points.end())
                out.points.push_back(p);
            else
                it->multiplicity += p.multiplicity;
        }
        out.total_winding = total;
        for (const auto& p : out.points)
            if (std::abs(H.derivative(p.z)) > 1e-8 * std::max(1.0, scale))
                throw ConvergenceError("branch point polishing failed near (" + format_double(p.z.real()) + ", " +
                                       format_double(p.z.imag()) + ")");
        return out;
    }
    throw ConvergenceError("zero of H' on a grid line after 3 perturbed retries");
}

PunctureSet find_branch_points(const NormalizationMap& map, const SearchRect& rect, int nx, int ny) {
    return find_branch_points(map.H(), rect, nx, ny, map.punctures.exclusion_radius);
}

namespace {

class PushedSurface final : public AnalyticSurface {
public:
    PushedSurface(SurfacePtr base, NormalizationMap map, double y_hi, std::vector<BoundaryEdge> edges)
        : base_(std::move(base)), map_(std::move(map)), y_hi_(y_hi), edges_(std::move(edges)) {}

    SurfacePoint evaluate(double X, double Y) const override {
        const cplx z = map_.inverse(cplx{X, Y});
        if (map_.punctures.excludes(z, map_.source_period()))
            throw EvaluationRangeError("query inside a puncture exclusion disk");
        const ComplexJet h = map_.jet(z);
        const cplx g1 = 1.0 / h.d1;
        const cplx g2 = -h.d2 * g1 * g1 * g1;
        return compose(base_->evaluate(z.real(), z.imag()), HolomorphicJet{z, g1, g2});
    }
    StripDomain domain() const override { return {map_.P(), 0.0, y_hi_}; }
    std::vector<BoundaryEdge> edges() const override { return edges_; }
    std::string name() const override { return base_->name() + "/normalized"; }
    bool harmonic() const override { return base_->harmonic(); }

private:
    SurfacePtr base_;
    NormalizationMap map_;
    double y_hi_;
    std::vector<BoundaryEdge> edges_;
};

}  // namespace

SurfacePtr push_forward(const SurfacePtr& surface, const NormalizationMap& map) {
    const StripDomain d = surface->domain();
    if (!d.periodic() || std::abs(d.period - map.source_period()) > 1e-12 * d.period)
        throw InputError("push_forward: surface period does not match the normalization");
    double y_hi = INFINITY;
    for (int j = 0; j < 256; ++j) y_hi = std::min(y_hi, map.Y()(d.period * j / 256, d.y_hi));
    std::vector<BoundaryEdge> edges;
    for (auto e : surface->edges())
        if (e.y == 0.0) edges.push_back(e);
    return std::make_shared<PushedSurface>(surface, map, y_hi, std::move(edges));
}

void write_normalization(std::ostream& out, const NormalizationMap& map) {
    std::vector<double> xs;
    const int m = 65;
    for (int j = 0; j < m; ++j) xs.push_back(map.X()(map.source_period() * j / m, 0.0) - map.P() * j / m);
    TrigPolynomial xt = fourier_analyze(xs, map.source_period());
    xt.drift = map.P() / map.source_period();
    xt.prune(xt.degree(), 1e-14);
    std::vector<double> fs;
    for (int j = 0; j < m; ++j) fs.push_back(map.Y().gradient(map.source_period() * j / m, 0.0)[1]);
    TrigPolynomial yt = fourier_analyze(fs, map.source_period());
    yt.prune(yt.degree(), 1e-14);
    out << "component=X\n";
    write_trig_polynomial(out, xt);
    out << "component=Y\n";
    write_trig_polynomial(out, yt);
}

}  // namespace fbr
