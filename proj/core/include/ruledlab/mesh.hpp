#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "ruledlab/scene.hpp"

namespace ruledlab::mesh {

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles; // 0-based corner indices
};

struct Polyline {
    std::vector<Vec3> vertices;
};

/// Quad-split triangulation of the patch x(u,v) over the config grid.
TriMesh surface_mesh(const scene::SceneConfig& cfg);

/// Quad-split triangulation of the Laplace normal image surface over the
/// grid (the v-range parametrizes the image rulings). Requires a
/// non-conoidal base with conoidal-form support.
TriMesh image_surface_mesh(const scene::SceneConfig& cfg);

/// The Laplace normal image curve sampled along u at v = 0.
Polyline gamma_polyline(const scene::SceneConfig& cfg);

/// Minimal OBJ-compatible output: "v x y z" per vertex plus 1-based
/// "f i j k" faces or "l i j" segments, all numbers formatted %.12g.
void write_obj(const TriMesh& mesh, std::ostream& out);
void write_obj(const Polyline& line, std::ostream& out);

} // namespace ruledlab::mesh
