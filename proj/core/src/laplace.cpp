#include "ruledlab/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "ruledlab/errors.hpp"
#include "ruledlab/oracle.hpp"

namespace ruledlab::laplace {

namespace {

constexpr double kSupportGuard = 1e-12;

struct FieldJets {
    BiJet2 L1, L2;
};

FieldJets laplace_jets(const surface::InvariantTriple& inv, const relnorm::SupportField& field,
                       double u, double v) {
    const Jet3 kappa3 = inv.kappa_jet(u);
    const Jet3 delta3 = inv.delta_jet(u);

    const BiJet2 kappa = BiJet2::from_u_jet(kappa3);
    const BiJet2 delta = BiJet2::from_u_jet(delta3);
    const BiJet2 delta1 = BiJet2::from_u_jet(jet_shift(delta3));
    const BiJet2 vj = BiJet2::var_v(v);
    const BiJet2 w = sqrt(vj * vj + delta * delta);

    BiJet2 q;
    switch (field.kind) {
    case relnorm::SupportField::Kind::General:
        q = expr::eval_bijet2(field.q_expr, u, v, w, inv.constants);
        break;
    case relnorm::SupportField::Kind::ConoidalForm:
        q = BiJet2::from_u_jet(expr::eval_jet3(field.f_expr, u, inv.constants)) / w;
        break;
    }
    if (std::fabs(q.v) < kSupportGuard)
        throw GeometryError("support function vanishes; not a relative normalization");

    FieldJets out;
    out.L1 = w * q * (2.0 * kappa * vj + delta1) / (2.0 * delta * delta);
    out.L2 = w * q / delta;
    return out;
}

} // namespace

LaplaceSample laplace_field(const surface::SurfacePoint& pt, const surface::FramePoint& frame,
                            const surface::InvariantTriple& inv,
                            const relnorm::SupportField& q) {
    const double u = frame.u;
    const double v = pt.v;
    const FieldJets jets = laplace_jets(inv, q, u, v);
    const double kappa = inv.kappa_at(u);

    LaplaceSample s;
    s.u = u;
    s.v = v;
    s.L1 = jets.L1.v;
    s.L2 = jets.L2.v;
    s.L = s.L1 * frame.e + s.L2 * frame.n;
    s.L_u = (jets.L1.du - s.L2) * frame.e + (s.L1 + jets.L2.du) * frame.n +
            kappa * s.L2 * frame.z;
    s.L_v = jets.L1.dv * frame.e + jets.L2.dv * frame.n;
    return s;
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Point: return "point";
    case Verdict::StraightLine: return "straight-line";
    case Verdict::PlanarCurve: return "planar-curve";
    case Verdict::Surface: return "surface";
    }
    return "?";
}

const Evidence* ClassificationReport::find(const std::string& name) const {
    for (const Evidence& e : evidence)
        if (e.name == name)
            return &e;
    return nullptr;
}

ClassificationReport classify_image(const surface::InvariantTriple& inv,
                                    const relnorm::SupportField& q, const Grid& grid,
                                    const Tolerances& tol) {
    if (grid.nu < 20 || grid.nv < 20)
        throw GeometryError("classification grid must cover at least 20x20 points");
    if (!(grid.v_min < grid.v_max))
        throw GeometryError("classification grid has an empty v-range");

    const surface::FrameFlow flow(inv, tol.frame_step);
    const double uspan = inv.u_max - inv.u_min;
    const double vspan = grid.v_max - grid.v_min;

    ClassificationReport rep;
    double scale = 0.0;
    double max_lv = 0.0;

    std::vector<surface::FramePoint> frames;
    frames.reserve(static_cast<std::size_t>(grid.nu));
    for (int i = 0; i < grid.nu; ++i)
        frames.push_back(flow.at(inv.u_min + uspan * (i / double(grid.nu - 1))));

    for (int i = 0; i < grid.nu; ++i) {
        for (int j = 0; j < grid.nv; ++j) {
            const double v = grid.v_min + vspan * (j / double(grid.nv - 1));
            const surface::SurfacePoint pt = surface::patch_point(inv, frames[i], v);
            const LaplaceSample s = laplace_field(pt, frames[i], inv, q);
            scale = std::max(scale, s.L.norm());
            max_lv = std::max(max_lv, s.L_v.norm());
        }
    }
    rep.scale = scale;

    // collapse at the striction line; when L is constant along rulings any
    // v gives the same curve
    rep.gamma_u.reserve(frames.size());
    rep.gamma.reserve(frames.size());
    Vec3 mean = Vec3::Zero();
    for (int i = 0; i < grid.nu; ++i) {
        const surface::SurfacePoint pt = surface::patch_point(inv, frames[i], 0.0);
        const LaplaceSample s = laplace_field(pt, frames[i], inv, q);
        rep.gamma_u.push_back(frames[i].u);
        rep.gamma.push_back(s.L);
        mean += s.L;
    }
    mean /= static_cast<double>(rep.gamma.size());
    rep.gamma_mean = mean;

    double point_residual = 0.0;
    for (const Vec3& g : rep.gamma)
        point_residual = std::max(point_residual, (g - mean).norm());
    point_residual /= scale;

    const oracle::FitResult line = oracle::fit_line(rep.gamma);
    const oracle::FitResult plane = oracle::fit_plane(rep.gamma);
    rep.line_direction = line.direction;
    rep.plane_normal = plane.direction;

    // residual of 2dd'' - 3d'^2 - 4d^2, evidence for the straight-line family
    double eq216 = 0.0;
    for (int i = 0; i < grid.nu; ++i) {
        const Jet3 d = inv.delta_jet(inv.u_min + uspan * (i / double(grid.nu - 1)));
        const double r = 2.0 * d.v * d.d2 - 3.0 * d.d1 * d.d1 - 4.0 * d.v * d.v;
        eq216 = std::max(eq216, std::fabs(r) / std::max(1.0, d.v * d.v));
    }

    rep.evidence.push_back({"max_Lv_over_scale", max_lv / scale, tol.rel});
    rep.evidence.push_back({"point_residual", point_residual, tol.rel});
    rep.evidence.push_back({"line_residual", line.residual, tol.rel});
    rep.evidence.push_back({"plane_residual", plane.residual, tol.rel});
    rep.evidence.push_back({"line_condition_residual", eq216, 1e-9});

    if (max_lv > tol.rel * scale)
        rep.verdict = Verdict::Surface;
    else if (point_residual <= tol.rel)
        rep.verdict = Verdict::Point;
    else if (!line.degenerate && line.residual <= tol.rel)
        rep.verdict = Verdict::StraightLine;
    else if (!plane.degenerate && plane.residual <= tol.rel)
        rep.verdict = Verdict::PlanarCurve;
    else
        rep.verdict = Verdict::Surface;
    return rep;
}

double gamma_curvature(const surface::InvariantTriple& inv, const expr::Expression& f,
                       double u) {
    return gamma_curvature(inv, expr::eval_jet3(f, u, inv.constants), u);
}

double gamma_curvature(const surface::InvariantTriple& inv, const Jet3& fj, double u) {
    if (std::fabs(inv.kappa_at(u)) > 1e-9)
        throw GeometryError("image curve curvature requires a conoidal surface");

    const Jet3 delta = inv.delta_jet(u);

    // curve from the collapsed Laplace field: Gamma = g m e + g n with
    // g = f/delta, m = delta'/(2 delta); frame ODE with kappa = 0
    const Jet3 g = fj / delta;
    const Jet3 m = jet_shift(delta) / (2.0 * delta);
    const Jet3 gm = g * m;

    const double P = gm.d1 - g.v;
    const double Q = gm.v + g.d1;
    const double R = gm.d2 - 2.0 * g.d1 - gm.v;
    const double S = 2.0 * gm.d1 + g.d2 - g.v;

    const double speed2 = P * P + Q * Q;
    if (speed2 < 1e-14)
        throw GeometryError("degenerate curvature denominator");
    return std::fabs(P * S - Q * R) / (speed2 * std::sqrt(speed2));
}

Case1Family family_case1_delta(double c1, double c2, double c3) {
    if (c3 == 0.0 || (c1 == 0.0 && c2 == 0.0))
        throw GeometryError("point family needs c3 != 0 and (c1, c2) != (0, 0)");

    using expr::Expression;
    const auto num = [](double x) { return Expression::number(x); };
    const Expression u = Expression::variable(expr::Var::U);
    const Expression p = num(c1) * Expression::unary(expr::UnaryOp::Cos, u) +
                         num(c2) * Expression::unary(expr::UnaryOp::Sin, u);

    Case1Family fam;
    fam.c1 = c1;
    fam.c2 = c2;
    fam.c3 = c3;
    fam.kappa = num(0.0);
    fam.delta = num(c3) / pow(p, num(2.0));
    fam.support = relnorm::SupportField::conoidal(num(c3) / p);
    fam.a_e = num(c1) * Expression::unary(expr::UnaryOp::Sin, u) -
              num(c2) * Expression::unary(expr::UnaryOp::Cos, u);
    fam.a_n = p;
    return fam;
}

Vec3 Case1Family::a_canonical(double u0) const {
    return {c1 * std::sin(u0) - c2 * std::cos(u0), c1 * std::cos(u0) + c2 * std::sin(u0), 0.0};
}

std::pair<double, double> Case1Family::residuals(double u,
                                                 const expr::ConstantMap& constants) const {
    const Jet3 d = expr::eval_jet3(delta, u, constants);
    const Jet3 f = expr::eval_jet3(support.f_expr, u, constants);
    const Jet3 g = jet_shift(d) * f / (d * d); // delta' f / delta^2
    const Jet3 fd = f / d;
    return {g.d1 - 2.0 * fd.v, g.v + 2.0 * fd.d1};
}

Case2Family family_case2_delta(double c1, double c2) {
    if (c2 == 0.0)
        throw GeometryError("line family needs c2 != 0");

    using expr::Expression;
    const auto num = [](double x) { return Expression::number(x); };
    const Expression shifted =
        Expression::variable(expr::Var::U) + num(c1);

    Case2Family fam;
    fam.c1 = c1;
    fam.c2 = c2;
    fam.kappa = num(0.0);
    fam.delta = num(c2) / pow(Expression::unary(expr::UnaryOp::Cos, shifted), num(2.0));
    return fam;
}

double Case2Family::line_condition_residual(double u) const {
    const Jet3 d = expr::eval_jet3(delta, u);
    return 2.0 * d.v * d.d2 - 3.0 * d.d1 * d.d1 - 4.0 * d.v * d.v;
}

Vec3 Case2Family::alpha_canonical(double u0) const {
    return {std::sin(u0 + c1), std::cos(u0 + c1), 0.0};
}

} // namespace ruledlab::laplace
