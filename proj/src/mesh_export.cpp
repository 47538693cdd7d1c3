#include "fbr/mesh_export.hpp"

#include <cmath>

#include "fbr/errors.hpp"
#include "fbr/format.hpp"
#include "fbr/parallel.hpp"

namespace fbr {

namespace {

struct Sample {
    double x, y;
    cplx normalized;
    Vec3 psi;
};

struct Grid {
    int cols = 0, rows = 0;
    bool wrapped = false;
    std::vector<Sample> samples;  // row-major
};

// x over one period (or a square window for a non-periodic chart), y over the piece.
Grid sample_piece(const MeshPiece& piece, int nx, int ny, bool wrap, int threads) {
    const StripDomain d = piece.surface->domain();
    if (wrap && !d.periodic()) throw InputError("--wrap needs a periodic chart ('" + piece.name + "')");
    double x0 = 0.0, width = d.period;
    if (!d.periodic()) {
        width = d.height();
        x0 = -width / 2.0;
    }
    Grid g;
    g.cols = nx;
    g.rows = ny;
    g.wrapped = wrap;
    g.samples.resize(static_cast<std::size_t>(nx) * ny);
    const double dx = wrap ? width / nx : width / (nx - 1);
    const double dy = (piece.y_hi - piece.y_lo) / (ny - 1);
    parallel_for(static_cast<std::size_t>(ny), threads, [&](std::size_t j) {
        const double y = piece.y_lo + dy * static_cast<double>(j);
        for (int i = 0; i < nx; ++i) {
            const double x = x0 + dx * i;
            Sample s{x, y, cplx(x, y), Vec3::Zero()};
            try {
                s.psi = piece.surface->position(x, y);
            } catch (const EvaluationRangeError&) {
                // Puncture: nudge into the piece.
                const double yy = y + (j + 1 < static_cast<std::size_t>(ny) ? 1e-2 : -1e-2) * dy;
                s.psi = piece.surface->position(x, yy);
            }
            if (piece.normalized) s.normalized = piece.normalized(cplx(x, y));
            g.samples[j * nx + i] = s;
        }
    });
    return g;
}

}  // namespace

MeshPiece mesh_piece(const ReflectedPatch& patch) {
    MeshPiece p;
    const StripDomain d = patch.surface()->domain();
    p.name = "mirror-" + patch.edge.label;
    p.surface = patch.surface();
    p.y_lo = d.y_lo;
    p.y_hi = d.y_hi;
    p.normalized = [map = patch.map, edge = patch.edge](cplx z) { return map(source_to_edge_chart(edge, z)); };
    return p;
}

std::vector<MeshPiece> mesh_pieces(const AnalyticSurface& surface, const SurfacePtr& ptr) {
    const StripDomain d = surface.domain();
    return {MeshPiece{surface.name(), ptr, d.y_lo, d.y_hi, {}}};
}

std::vector<MeshPiece> mesh_pieces(const ExtensionPtr& ext) {
    std::vector<MeshPiece> out;
    const auto& pieces = ext->pieces();
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        MeshPiece p{pieces[k].label, pieces[k].surface, pieces[k].y_lo, pieces[k].y_hi, {}};
        if (k > 0) {
            const auto& step = ext->steps()[k - 1];
            p.normalized = [map = step.patch.map, edge = step.patch.edge](cplx z) {
                return map(source_to_edge_chart(edge, z));
            };
        }
        out.push_back(std::move(p));
    }
    return out;
}

void write_obj(std::ostream& out, const std::vector<MeshPiece>& pieces, int nx, int ny, bool wrap, int threads) {
    if (nx < 8 || ny < 8) throw InputError("mesh resolution must be at least 8x8");
    std::size_t base = 1;
    for (const auto& piece : pieces) {
        const Grid g = sample_piece(piece, nx, ny, wrap, threads);
        out << "o " << piece.name << '\n';
        for (const auto& s : g.samples)
            out << "v " << format_double(s.psi.x()) << ' ' << format_double(s.psi.y()) << ' '
                << format_double(s.psi.z()) << '\n';
        const int cells = wrap ? nx : nx - 1;
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < cells; ++i) {
                const std::size_t a = base + static_cast<std::size_t>(j) * nx + i;
                const std::size_t b = base + static_cast<std::size_t>(j) * nx + (i + 1) % nx;
                const std::size_t c = b + nx, d = a + nx;
                out << "f " << a << ' ' << b << ' ' << c << '\n';
                out << "f " << a << ' ' << c << ' ' << d << '\n';
            }
        base += g.samples.size();
    }
}

void write_csv(std::ostream& out, const std::vector<MeshPiece>& pieces, int nx, int ny, bool wrap, int threads) {
    if (nx < 8 || ny < 8) throw InputError("grid resolution must be at least 8x8");
    out << "x,y,X,Y,psi1,psi2,psi3\n";
    for (const auto& piece : pieces) {
        const Grid g = sample_piece(piece, nx, ny, wrap, threads);
        for (const auto& s : g.samples)
            out << format_double(s.x) << ',' << format_double(s.y) << ',' << format_double(s.normalized.real()) << ','
                << format_double(s.normalized.imag()) << ',' << format_double(s.psi.x()) << ','
                << format_double(s.psi.y()) << ',' << format_double(s.psi.z()) << '\n';
    }
}

}  // namespace fbr
