#include "ruledlab/mesh.hpp"

#include "float_format.hpp"
#include "ruledlab/errors.hpp"
#include "ruledlab/image.hpp"

namespace ruledlab::mesh {

namespace {

using detail::g12;

TriMesh triangulate_grid(int nu, int nv, const std::vector<Vec3>& vertices) {
    TriMesh m;
    m.vertices = vertices;
    m.triangles.reserve(static_cast<std::size_t>(2 * (nu - 1) * (nv - 1)));
    const auto at = [nv](int i, int j) { return i * nv + j; };
    for (int i = 0; i + 1 < nu; ++i) {
        for (int j = 0; j + 1 < nv; ++j) {
            m.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            m.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    }
    return m;
}

} // namespace

TriMesh surface_mesh(const scene::SceneConfig& cfg) {
    const scene::Domain& d = cfg.domain;
    const surface::FrameFlow flow(cfg.invariants, cfg.tolerances.frame_step);
    const double uspan = d.u_max - d.u_min;
    const double vspan = d.v_max - d.v_min;

    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(d.nu) * d.nv);
    for (int i = 0; i < d.nu; ++i) {
        const surface::FramePoint fr = flow.at(d.u_min + uspan * (i / double(d.nu - 1)));
        for (int j = 0; j < d.nv; ++j)
            verts.push_back(surface::patch_point(cfg.invariants, fr, d.v_min + vspan * (j / double(d.nv - 1))).x);
    }
    return triangulate_grid(d.nu, d.nv, verts);
}

TriMesh image_surface_mesh(const scene::SceneConfig& cfg) {
    if (cfg.support.kind != relnorm::SupportField::Kind::ConoidalForm)
        throw GeometryError("image surface mesh needs a conoidal-form support q = f(u)/w");
    const scene::Domain& d = cfg.domain;
    const surface::FrameFlow flow(cfg.invariants, cfg.tolerances.frame_step);
    const double uspan = d.u_max - d.u_min;
    const double vspan = d.v_max - d.v_min;

    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(d.nu) * d.nv);
    for (int i = 0; i < d.nu; ++i) {
        const surface::FramePoint fr = flow.at(d.u_min + uspan * (i / double(d.nu - 1)));
        const auto [ifp, ii] = image::image_surface(cfg.invariants, cfg.support.f_expr, fr);
        for (int j = 0; j < d.nv; ++j)
            verts.push_back(ifp.s_star + (d.v_min + vspan * (j / double(d.nv - 1))) * ifp.ruling);
    }
    return triangulate_grid(d.nu, d.nv, verts);
}

Polyline gamma_polyline(const scene::SceneConfig& cfg) {
    const scene::Domain& d = cfg.domain;
    const surface::FrameFlow flow(cfg.invariants, cfg.tolerances.frame_step);
    const double uspan = d.u_max - d.u_min;

    Polyline line;
    line.vertices.reserve(static_cast<std::size_t>(d.nu));
    for (int i = 0; i < d.nu; ++i) {
        const surface::FramePoint fr = flow.at(d.u_min + uspan * (i / double(d.nu - 1)));
        const surface::SurfacePoint pt = surface::patch_point(cfg.invariants, fr, 0.0);
        line.vertices.push_back(laplace::laplace_field(pt, fr, cfg.invariants, cfg.support).L);
    }
    return line;
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
    for (const Vec3& v : mesh.vertices)
        out << "v " << g12(v.x()) << ' ' << g12(v.y()) << ' ' << g12(v.z()) << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_obj(const Polyline& line, std::ostream& out) {
    for (const Vec3& v : line.vertices)
        out << "v " << g12(v.x()) << ' ' << g12(v.y()) << ' ' << g12(v.z()) << '\n';
    for (std::size_t i = 0; i + 1 < line.vertices.size(); ++i)
        out << "l " << i + 1 << ' ' << i + 2 << '\n';
}

} // namespace ruledlab::mesh
