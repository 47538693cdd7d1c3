#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fbr/extension.hpp"
#include "fbr/surface.hpp"

namespace fbr {

/// A rectangle of the chart to be sampled as one object group.
struct MeshPiece {
    std::string name;
    SurfacePtr surface;
    double y_lo = 0.0, y_hi = 0.0;
    /// Normalized coordinates X + i Y of a chart point; identity when empty.
    std::function<cplx(cplx)> normalized;
};

std::vector<MeshPiece> mesh_pieces(const AnalyticSurface& surface, const SurfacePtr& ptr);
std::vector<MeshPiece> mesh_pieces(const ExtensionPtr& ext);
MeshPiece mesh_piece(const ReflectedPatch& patch);

/// Vertices row by row (y outer, x inner), quads split into two triangles, one `o` group per piece.
/// nx x ny vertices per piece: 2 (nx - 1)(ny - 1) triangles, or 2 nx (ny - 1) with `wrap`
/// (periodic x sampled without the duplicate column, seam faces added).
void write_obj(std::ostream& out, const std::vector<MeshPiece>& pieces, int nx, int ny, bool wrap, int threads = 1);

/// Columns x,y,X,Y,psi1,psi2,psi3; same sampling as the OBJ writer.
void write_csv(std::ostream& out, const std::vector<MeshPiece>& pieces, int nx, int ny, bool wrap, int threads = 1);

}  // namespace fbr
