#pragma once

#include "ruledlab/surface.hpp"

namespace ruledlab::relnorm {

/// Support function of a relative normalization. Either a general expression
/// q(u, v, w) or the conoidal form q = f(u)/w with f an expression in u.
/// The pseudo-variable w = sqrt(v^2 + delta^2) is bound by the evaluator, so
/// support expressions can reference it directly.
struct SupportField {
    enum class Kind { General, ConoidalForm };

    Kind kind = Kind::General;
    expr::Expression q_expr; // Kind::General
    expr::Expression f_expr; // Kind::ConoidalForm

    static SupportField general(expr::Expression q);
    static SupportField conoidal(expr::Expression f);

    /// Value and (u,v)-partials of q, with the chain rule through w(u,v).
    BiJet2 eval(const surface::InvariantTriple& inv, double u, double v) const;

    /// Value only, on the plain scalar path.
    double value(const surface::InvariantTriple& inv, double u, double v) const;
};

/// Jet of w(u,v) = sqrt(v^2 + delta(u)^2).
BiJet2 w_jet(const surface::InvariantTriple& inv, double u, double v);

/// Relative structure at one surface point: support jet, tangent-plane
/// covector, relative metric components and the relative normal, the latter
/// both in ambient coordinates and resolved in the Kruppa frame.
struct RelativeStructure {
    BiJet2 q;
    Vec3 X = Vec3::Zero();
    double G11 = 0.0;
    double G12 = 0.0;
    double G22 = 0.0;
    Vec3 y = Vec3::Zero();
    double y_e = 0.0;
    double y_n = 0.0;
    double y_z = 0.0;
};

RelativeStructure relative_normal(const surface::SurfacePoint& pt,
                                  const surface::FramePoint& frame,
                                  const surface::InvariantTriple& inv,
                                  const SupportField& q);

/// Ambient partial derivatives of the relative normal field, obtained from
/// the frame-component jets together with the frame ODE.
struct RelativeNormalDerivatives {
    Vec3 y_u = Vec3::Zero();
    Vec3 y_v = Vec3::Zero();
};

RelativeNormalDerivatives relative_normal_derivatives(const surface::FramePoint& frame,
                                                      const surface::InvariantTriple& inv,
                                                      const SupportField& q, double v);

/// Equiaffine normalization: support |K|^{1/4} and its relative normal.
struct EquiaffineNormal {
    double q_aff = 0.0;
    Vec3 y = Vec3::Zero();
    double y_e = 0.0;
    double y_n = 0.0;
};

EquiaffineNormal equiaffine_normal(const surface::SurfacePoint& pt,
                                   const surface::FramePoint& frame,
                                   const surface::InvariantTriple& inv);

/// The equiaffine support as a general SupportField expression
/// scale * sqrt(abs(delta))/w, built by AST composition from the delta
/// expression of the given invariants.
SupportField equiaffine_support(const surface::InvariantTriple& inv, double scale = 1.0);

} // namespace ruledlab::relnorm
