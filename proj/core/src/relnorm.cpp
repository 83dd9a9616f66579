#include "ruledlab/relnorm.hpp"

#include <cmath>

#include "ruledlab/errors.hpp"

namespace ruledlab::relnorm {

namespace {

constexpr double kSupportGuard = 1e-12;

BiJet2 support_jet(const SupportField& field, const surface::InvariantTriple& inv, double u,
                   double v, const BiJet2& w) {
    switch (field.kind) {
    case SupportField::Kind::General:
        return expr::eval_bijet2(field.q_expr, u, v, w, inv.constants);
    case SupportField::Kind::ConoidalForm: {
        const BiJet2 f = BiJet2::from_u_jet(expr::eval_jet3(field.f_expr, u, inv.constants));
        return f / w;
    }
    }
    throw EvalError("invalid support field");
}

} // namespace

SupportField SupportField::general(expr::Expression q) {
    SupportField s;
    s.kind = Kind::General;
    s.q_expr = std::move(q);
    return s;
}

SupportField SupportField::conoidal(expr::Expression f) {
    SupportField s;
    s.kind = Kind::ConoidalForm;
    s.f_expr = std::move(f);
    return s;
}

BiJet2 SupportField::eval(const surface::InvariantTriple& inv, double u, double v) const {
    return support_jet(*this, inv, u, v, w_jet(inv, u, v));
}

double SupportField::value(const surface::InvariantTriple& inv, double u, double v) const {
    const double d = inv.delta_at(u);
    const double w = std::sqrt(v * v + d * d);
    switch (kind) {
    case Kind::General:
        return expr::eval_value(q_expr, u, v, w, inv.constants);
    case Kind::ConoidalForm:
        return expr::eval_value_u(f_expr, u, inv.constants) / w;
    }
    throw EvalError("invalid support field");
}

BiJet2 w_jet(const surface::InvariantTriple& inv, double u, double v) {
    const BiJet2 d = BiJet2::from_u_jet(inv.delta_jet(u));
    const BiJet2 vv = BiJet2::var_v(v);
    return sqrt(vv * vv + d * d);
}

RelativeStructure relative_normal(const surface::SurfacePoint& pt,
                                  const surface::FramePoint& frame,
                                  const surface::InvariantTriple& inv,
                                  const SupportField& field) {
    const double u = frame.u;
    const double v = pt.v;
    const double kappa = inv.kappa_at(u);
    const Jet3 delta = inv.delta_jet(u);
    const double d = delta.v;
    const double w = pt.w;
    const double w2 = w * w;

    const BiJet2 q = field.eval(inv, u, v);
    if (std::fabs(q.v) < kSupportGuard)
        throw GeometryError("support function vanishes; not a relative normalization");

    RelativeStructure rs;
    rs.q = q;
    rs.y_e = -w * (d * q.du + q.dv * (kappa * w2 + delta.d1 * v)) / (d * d);
    rs.y_n = (d * d * q.v - w2 * v * q.dv) / (d * w);
    rs.y_z = -(v * q.v + w2 * q.dv) / w;
    rs.y = rs.y_e * frame.e + rs.y_n * frame.n + rs.y_z * frame.z;
    rs.X = pt.xi / q.v;
    rs.G11 = pt.h11 / q.v;
    rs.G12 = pt.h12 / q.v;
    rs.G22 = pt.h22 / q.v;
    return rs;
}

RelativeNormalDerivatives relative_normal_derivatives(const surface::FramePoint& frame,
                                                      const surface::InvariantTriple& inv,
                                                      const SupportField& field, double v) {
    const double u = frame.u;
    const Jet3 kappa3 = inv.kappa_jet(u);
    const Jet3 delta3 = inv.delta_jet(u);

    const BiJet2 kappa = BiJet2::from_u_jet(kappa3);
    const BiJet2 delta = BiJet2::from_u_jet(delta3);
    const BiJet2 delta1 = BiJet2::from_u_jet(jet_shift(delta3));
    const BiJet2 vj = BiJet2::var_v(v);
    const BiJet2 w = sqrt(vj * vj + delta * delta);
    const BiJet2 w2 = w * w;
    const BiJet2 q = support_jet(field, inv, u, v, w);
    if (std::fabs(q.v) < kSupportGuard)
        throw GeometryError("support function vanishes; not a relative normalization");

    // frame components of y as bivariate jets, Leibniz through every factor
    const BiJet2 qu{q.du, q.duu, q.duv, 0, 0, 0};
    const BiJet2 qv{q.dv, q.duv, q.dvv, 0, 0, 0};
    const BiJet2 ye = -w * (delta * qu + qv * (kappa * w2 + delta1 * vj)) / (delta * delta);
    const BiJet2 yn = (delta * delta * q - w2 * vj * qv) / (delta * w);
    const BiJet2 yz = -(vj * q + w2 * qv) / w;

    // d/du of (Ye e + Yn n + Yz z) with e' = n, n' = -e + kappa z, z' = -kappa n
    const double k = kappa.v;
    RelativeNormalDerivatives out;
    out.y_u = (ye.du - yn.v) * frame.e + (ye.v + yn.du - k * yz.v) * frame.n +
              (k * yn.v + yz.du) * frame.z;
    out.y_v = ye.dv * frame.e + yn.dv * frame.n + yz.dv * frame.z;
    return out;
}

EquiaffineNormal equiaffine_normal(const surface::SurfacePoint& pt,
                                   const surface::FramePoint& frame,
                                   const surface::InvariantTriple& inv) {
    const double u = frame.u;
    const double v = pt.v;
    const double kappa = inv.kappa_at(u);
    const Jet3 delta = inv.delta_jet(u);
    const double d = delta.v;
    const double eps = d > 0.0 ? 1.0 : -1.0;

    EquiaffineNormal en;
    en.q_aff = std::sqrt(std::fabs(d)) / pt.w;
    const double scale = eps / std::sqrt(std::fabs(d));
    en.y_e = scale * (2.0 * kappa * v + delta.d1) / (2.0 * d);
    en.y_n = scale;
    en.y = en.y_e * frame.e + en.y_n * frame.n;
    return en;
}

SupportField equiaffine_support(const surface::InvariantTriple& inv, double scale) {
    using expr::Expression;
    Expression q = Expression::number(scale) *
                   Expression::unary(expr::UnaryOp::Sqrt,
                                     Expression::unary(expr::UnaryOp::Abs, inv.delta)) /
                   Expression::variable(expr::Var::W);
    return SupportField::general(std::move(q));
}

} // namespace ruledlab::relnorm
