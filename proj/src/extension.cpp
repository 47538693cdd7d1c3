#include "fbr/extension.hpp"

#include <algorithm>
#include <cmath>

#include "fbr/catalog.hpp"
#include "fbr/format.hpp"
#include "fbr/geometry.hpp"

namespace fbr {

namespace {

std::pair<BoundaryEdge, BoundaryEdge> reflection_lines(const AnalyticSurface& s) {
    const StripDomain d = s.domain();
    const BoundaryEdge* lo = nullptr;
    const BoundaryEdge* hi = nullptr;
    const auto edges = s.edges();
    for (const auto& e : edges) {
        if (e.side == EdgeSide::above && std::abs(e.y - d.y_lo) <= 1e-12 * std::max(1.0, d.height())) lo = &e;
        if (e.side == EdgeSide::below && std::abs(e.y - d.y_hi) <= 1e-12 * std::max(1.0, d.height())) hi = &e;
    }
    if (!lo || !hi) throw InputError("surface '" + s.name() + "' is not an annulus with two boundary lines");
    return {*lo, *hi};
}

void merge_punctures(PunctureSet& into, const PunctureSet& more, double period) {
    for (const auto& p : more.points) {
        bool dup = false;
        for (const auto& q : into.points) {
            cplx d = p.z - q.z;
            d.real(std::remainder(d.real(), period));
            if (std::abs(d) < 2.0 * into.exclusion_radius) dup = true;
        }
        if (!dup) into.points.push_back(p);
    }
    into.total_winding += more.total_winding;
}

}  // namespace

ExtendedSurface::ExtendedSurface(SurfacePtr base, std::vector<ExtensionStep> steps, double exclusion_radius)
    : base_(std::move(base)), steps_(std::move(steps)) {
    domain_ = base_->domain();
    std::tie(lower_, upper_) = reflection_lines(*base_);
    punctures_.exclusion_radius = exclusion_radius;
    pieces_.push_back({"original", domain_.y_lo, domain_.y_hi, base_});
    for (const auto& s : steps_) {
        pieces_.push_back({s.line + "#" + std::to_string(s.index), s.band_lo, s.band_hi, s.patch.surface()});
        domain_.y_lo = std::min(domain_.y_lo, s.strip_lo);
        domain_.y_hi = std::max(domain_.y_hi, s.strip_hi);
        merge_punctures(punctures_, s.punctures, domain_.period);
    }
    if (steps_.empty()) {
        edges_ = base_->edges();
    } else {
        edges_.push_back(classify_edge(*this, "lower", domain_.y_lo, EdgeSide::above));
        edges_.push_back(classify_edge(*this, "upper", domain_.y_hi, EdgeSide::below));
    }
}

SurfacePoint ExtendedSurface::evaluate(double x, double y) const {
    for (const auto& p : pieces_)
        if (y >= p.y_lo && y <= p.y_hi) return p.surface->evaluate(x, y);
    // Round-off just outside the strip: the nearest piece.
    const Piece* best = &pieces_.front();
    double gap = INFINITY;
    for (const auto& p : pieces_) {
        const double g = std::min(std::abs(y - p.y_lo), std::abs(y - p.y_hi));
        if (g < gap) {
            gap = g;
            best = &p;
        }
    }
    return best->surface->evaluate(x, y);
}

std::string ExtendedSurface::name() const {
    return steps_.empty() ? base_->name() : base_->name() + "^[" + lineage_string() + "]";
}

std::vector<std::string> ExtendedSurface::lineage() const {
    std::vector<std::string> out;
    for (const auto& s : steps_) out.push_back(s.line);
    return out;
}

std::string ExtendedSurface::lineage_string() const {
    std::string s;
    for (const auto& l : lineage()) s += (s.empty() ? "" : ",") + l;
    return s;
}

ExtensionPtr extend(const SurfacePtr& surface, int steps, const ExtendOptions& options) {
    if (steps < 0) throw InputError("number of reflection steps must be >= 0");
    const auto [lower, upper] = reflection_lines(*surface);
    for (const auto& e : {lower, upper}) {
        const SteklovReport st = verify_steklov(*surface, e);
        if (!e.free || !st.on_sphere || st.max_residual > options.reflection.steklov_tol)
            throw ExtensionError(StageError("steklov", "edge " + e.label + " fails the Steklov check (residual " +
                                                           format_double(st.max_residual) + ")"),
                                 {});
    }
    auto ext = std::make_shared<const ExtendedSurface>(surface, std::vector<ExtensionStep>{}, options.exclusion_radius);
    std::vector<ExtensionStep> done;
    const double L = surface->domain().period;
    for (int k = 1; k <= steps; ++k) {
        const StripDomain d = ext->domain();
        const bool odd = k % 2 == 1;
        const BoundaryEdge& line = odd ? lower : upper;
        ExtensionStep step;
        step.index = k;
        step.line = line.label;
        try {
            step.patch = reflect_patch(ext, line, options.reflection);
        } catch (const StageError& e) {
            throw ExtensionError(e, ext->lineage());
        }
        const double h = step.patch.mirror_height;
        if (odd) {
            step.band_lo = line.y - h;
            step.band_hi = d.y_lo;
            step.strip_lo = step.band_lo;
            step.strip_hi = d.y_hi;
        } else {
            step.band_lo = d.y_hi;
            step.band_hi = line.y + h;
            step.strip_lo = d.y_lo;
            step.strip_hi = step.band_hi;
        }

        // Zeros of H' over both sides of the line, mapped back to the original chart.
        const double h_src = odd ? d.y_hi - line.y : line.y - d.y_lo;
        PunctureSet found;
        try {
            found = find_branch_points(step.patch.map, SearchRect{0.0, L, -h, h_src}, options.branch_nx,
                                       options.branch_ny);
        } catch (const std::exception& e) {
            throw ExtensionError(StageError("normalize", std::string("branch-point search: ") + e.what()), ext->lineage());
        }
        step.punctures.exclusion_radius = options.exclusion_radius;
        step.punctures.total_winding = found.total_winding;
        for (auto p : found.points) {
            p.z = edge_chart_to_source(line, p.z);
            step.punctures.points.push_back(p);
        }

        // C1 seam between the new band and the piece it touches.
        const double seam = odd ? step.band_hi : step.band_lo;
        for (int i = 0; i < options.seam_samples; ++i) {
            const double x = L * i / options.seam_samples;
            const SurfacePoint a = ext->evaluate(x, seam), b = step.patch.surface()->evaluate(x, seam);
            const double scale = std::max(1.0, a.value.norm());
            const double r = std::max({(a.value - b.value).norm(), (a.dx - b.dx).norm(), (a.dy - b.dy).norm()}) / scale;
            step.seam_residual = std::max(step.seam_residual, r);
        }
        if (step.seam_residual > options.reflection.match_tol)
            throw ExtensionError(StageError("match", "seam mismatch " + format_double(step.seam_residual) + " at y = " +
                                                         format_double(seam)),
                                 ext->lineage());
        done.push_back(std::move(step));
        ext = std::make_shared<const ExtendedSurface>(surface, done, options.exclusion_radius);
    }
    return ext;
}

PlaneModel to_punctured_plane(const ExtensionPtr& ext) { return PlaneModel(ext, ext->punctures()); }

std::vector<CoverageRecord> coverage_monitor(const ExtendedSurface& ext, int nx) {
    std::vector<CoverageRecord> out;
    const auto& pieces = ext.pieces();
    const StripDomain d0 = ext.base()->domain();
    CoverageRecord r0;
    r0.strip_lo = d0.y_lo;
    r0.strip_hi = d0.y_hi;
    r0.band_area = curvature_integral(*ext.base(), d0.y_lo, d0.y_hi, nx, true);
    r0.cumulative = r0.band_area;
    out.push_back(r0);
    for (std::size_t i = 0; i < ext.steps().size(); ++i) {
        const ExtensionStep& s = ext.steps()[i];
        CoverageRecord r;
        r.step = s.index;
        r.line = s.line;
        r.strip_lo = s.strip_lo;
        r.strip_hi = s.strip_hi;
        r.band_area = curvature_integral(*pieces[i + 1].surface, s.band_lo, s.band_hi, nx, true);
        r.cumulative = out.back().cumulative + r.band_area;
        out.push_back(r);
    }
    return out;
}

}  // namespace fbr
