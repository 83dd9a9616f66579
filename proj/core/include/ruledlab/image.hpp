#pragma once

#include <utility>
#include <vector>

#include "ruledlab/surface.hpp"

namespace ruledlab::image {

/// Fundamental invariants of the Laplace normal image surface at one u.
struct ImageInvariants {
    double delta_star = 0.0;
    double kappa_star = 0.0;
    double lambda_star = 0.0;
};

/// Directrix and striction points of the image surface; its rulings are
/// parallel to those of the base surface.
struct ImageFramePoint {
    double u = 0.0;
    Vec3 r_star = Vec3::Zero();
    Vec3 s_star = Vec3::Zero();
    Vec3 ruling = Vec3::UnitX();
};

/// Image surface data for a non-conoidal surface with support f(u)/w.
/// Requires kappa, delta and f nonvanishing at u.
std::pair<ImageFramePoint, ImageInvariants> image_surface(const surface::InvariantTriple& inv,
                                                          const expr::Expression& f,
                                                          const surface::FramePoint& frame);

/// Sampling grid for the proposition checks.
struct CheckGrid {
    int nu = 41;
    int nv = 9;
    double v_min = -2.0;
    double v_max = 2.0;
};

/// Tangents of the base striction line versus tangents of the image
/// directrix: geometric parallel/orthogonal verdicts per u next to the
/// closed-form conditions (f = c delta with kappa lambda + 1 = 0; kappa =
/// lambda), plus whether the two routes agree everywhere.
struct Prop4Report {
    std::vector<double> u;
    std::vector<uint8_t> parallel_geom, orthogonal_geom;
    std::vector<uint8_t> parallel_cond, orthogonal_cond;
    std::vector<double> parallel_residual, orthogonal_residual;
    bool parallel_everywhere = false;
    bool orthogonal_everywhere = false;
    bool consistent = false;
};

Prop4Report check_prop4(const surface::InvariantTriple& inv, const expr::Expression& f,
                        const surface::FrameFlow& flow, const CheckGrid& grid = {},
                        double geom_tol = 1e-6, double cond_tol = 1e-9);

/// Directrix/striction coincidence: the geometric separation max|s*-r*| and
/// the closed-form condition (f/delta)' = 0, tested in both directions.
struct Prop5Report {
    double separation = 0.0;
    double condition_residual = 0.0;
    bool coincide_geom = false;
    bool coincide_cond = false;
    bool agree = false;
};

Prop5Report check_prop5(const surface::InvariantTriple& inv, const expr::Expression& f,
                        const surface::FrameFlow& flow, int nu = 41, double tol = 1e-9);

/// One row of the image-surface property table: a geometric test on the
/// recovered invariants next to the paper's closed-form criterion on
/// (f, kappa, delta). Residuals are scale-normalized.
struct Prop6Field {
    bool geom = false;
    bool closed = false;
    double geom_residual = 0.0;
    double closed_residual = 0.0;

    bool agree() const { return geom == closed; }
};

struct Prop6Report {
    Prop6Field normals_parallel;
    Prop6Field orthoid;
    Prop6Field striction_asymptotic;
    Prop6Field striction_curvature_line;
    Prop6Field congruent;
    Prop6Field edlinger;

    bool all_agree() const;
};

Prop6Report check_prop6(const surface::InvariantTriple& inv, const expr::Expression& f,
                        const surface::FrameFlow& flow, const CheckGrid& grid = {},
                        double closed_tol = 1e-8, double geom_tol = 1e-4);

/// Recovers the image invariants by reconstruction: the image surface shares
/// the Kruppa frame with the base, so the base frames with the striction
/// point replaced by s* feed the generic invariant recovery.
surface::InvariantSamples recover_image_invariants(const surface::InvariantTriple& inv,
                                                   const expr::Expression& f,
                                                   std::span<const surface::FramePoint> frames);

/// Componentwise range of the image invariants over one maximal u-interval
/// on which kappa and f keep their signs; the formulas assume nonvanishing
/// quantities, so the grid is segmented at the crossings.
struct InvariantSegment {
    double u_begin = 0.0;
    double u_end = 0.0;
    ImageInvariants lo, hi;
    int samples = 0;
};

std::vector<InvariantSegment> invariant_segments(const surface::InvariantTriple& inv,
                                                 const expr::Expression& f, int nu = 101);

} // namespace ruledlab::image
