#pragma once

#include <string>
#include <vector>

#include "ruledlab/relnorm.hpp"

namespace ruledlab::laplace {

/// Laplace normal vector at one point: frame components, ambient vector and
/// its ambient partial derivatives.
struct LaplaceSample {
    double u = 0.0;
    double v = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    Vec3 L = Vec3::Zero();
    Vec3 L_u = Vec3::Zero();
    Vec3 L_v = Vec3::Zero();
};

LaplaceSample laplace_field(const surface::SurfacePoint& pt, const surface::FramePoint& frame,
                            const surface::InvariantTriple& inv,
                            const relnorm::SupportField& q);

enum class Verdict { Point, StraightLine, PlanarCurve, Surface };

std::string verdict_name(Verdict v);

struct Evidence {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
};

struct ClassificationReport {
    Verdict verdict = Verdict::Surface;
    std::vector<Evidence> evidence;
    std::vector<double> gamma_u;
    std::vector<Vec3> gamma; // Laplace normal image collapsed at v_ref = 0
    Vec3 gamma_mean = Vec3::Zero();
    Vec3 line_direction = Vec3::Zero();
    Vec3 plane_normal = Vec3::Zero();
    double scale = 0.0;

    const Evidence* find(const std::string& name) const;
};

/// (u,v) evaluation grid for classification; the u-range comes from the
/// invariant interval.
struct Grid {
    double v_min = -2.0;
    double v_max = 2.0;
    int nu = 25;
    int nv = 25;
};

struct Tolerances {
    double rel = 1e-6;        // relative threshold for all degeneracy tests
    double frame_step = 1e-3; // RK4 base step for the frame flow
};

/// Classifies the Laplace normal image over the grid: first tests whether L
/// is constant along rulings, then collapses to the curve at v = 0 and runs
/// point / line / plane residual tests on the centered samples.
ClassificationReport classify_image(const surface::InvariantTriple& inv,
                                    const relnorm::SupportField& q, const Grid& grid,
                                    const Tolerances& tol = {});

/// Curvature of the planar image curve of a conoidal surface with support
/// f(u)/w, computed exactly from the jets of f and delta.
double gamma_curvature(const surface::InvariantTriple& inv, const expr::Expression& f,
                       double u);

/// Same, from a precomputed jet of f; only the channels up to order 2 are
/// used, so a jet measured off a support product q*w is enough.
double gamma_curvature(const surface::InvariantTriple& inv, const Jet3& f, double u);

/// The family whose Laplace normal image collapses to a point:
/// kappa = 0, delta = c3 (c1 cos u + c2 sin u)^{-2}, q = +-|c3|^{1/2} q_AFF.
struct Case1Family {
    double c1 = 1.0, c2 = 0.0, c3 = 1.0;
    expr::Expression kappa;
    expr::Expression delta;
    relnorm::SupportField support; // f = c3/(c1 cos u + c2 sin u), the smooth branch
    expr::Expression a_e, a_n;     // frame components of the constant vector

    /// Ambient location of the constant vector under the canonical frame
    /// placed at u0.
    Vec3 a_canonical(double u0) const;

    /// Residuals of the two defining relations of the point case at u.
    std::pair<double, double> residuals(double u, const expr::ConstantMap& constants = {}) const;
};

Case1Family family_case1_delta(double c1, double c2, double c3);

/// The family whose Laplace normal image collapses to a straight line with
/// the affine normal image an improper sphere:
/// kappa = 0, delta = c2 cos^{-2}(u + c1).
struct Case2Family {
    double c1 = 0.0, c2 = 1.0;
    expr::Expression kappa;
    expr::Expression delta;

    /// Residual of 2 delta delta'' - 3 delta'^2 - 4 delta^2 at u.
    double line_condition_residual(double u) const;

    /// Ambient direction of the image line under the canonical frame at u0.
    Vec3 alpha_canonical(double u0) const;
};

Case2Family family_case2_delta(double c1, double c2);

} // namespace ruledlab::laplace
