#include "ruledlab/image.hpp"

#include <algorithm>
#include <cmath>

#include "ruledlab/errors.hpp"

namespace ruledlab::image {

namespace {

constexpr double kZeroGuard = 1e-12;

Jet3 f_over_delta(const surface::InvariantTriple& inv, const expr::Expression& f, double u,
                  Jet3* f_out = nullptr, Jet3* kappa_out = nullptr, Jet3* delta_out = nullptr) {
    const Jet3 kappa = inv.kappa_jet(u);
    const Jet3 delta = inv.delta_jet(u);
    const Jet3 fj = expr::eval_jet3(f, u, inv.constants);
    if (std::fabs(kappa.v) < kZeroGuard)
        throw GeometryError("image surface needs a non-conoidal base (kappa = 0; the image "
                            "degenerates and is handled by classification)");
    if (std::fabs(fj.v) < kZeroGuard)
        throw GeometryError("support numerator f vanishes");
    if (f_out)
        *f_out = fj;
    if (kappa_out)
        *kappa_out = kappa;
    if (delta_out)
        *delta_out = delta;
    return fj / delta;
}

} // namespace

std::pair<ImageFramePoint, ImageInvariants> image_surface(const surface::InvariantTriple& inv,
                                                          const expr::Expression& f,
                                                          const surface::FramePoint& frame) {
    Jet3 fj, kappa;
    const Jet3 g = f_over_delta(inv, f, frame.u, &fj, &kappa);

    ImageFramePoint ifp;
    ifp.u = frame.u;
    ifp.r_star = g.v * frame.n;
    ifp.s_star = g.v * frame.n - g.d1 * frame.e;
    ifp.ruling = frame.e;

    ImageInvariants ii;
    ii.kappa_star = kappa.v;
    ii.delta_star = kappa.v * g.v;
    ii.lambda_star = -(g.d2 + g.v) / (kappa.v * g.v);
    return {ifp, ii};
}

Prop4Report check_prop4(const surface::InvariantTriple& inv, const expr::Expression& f,
                        const surface::FrameFlow& flow, const CheckGrid& grid, double geom_tol,
                        double cond_tol) {
    Prop4Report rep;
    const double uspan = inv.u_max - inv.u_min;
    bool par_all = true, orth_all = true, consistent = true;

    for (int i = 0; i < grid.nu; ++i) {
        const double u = inv.u_min + uspan * (i / double(grid.nu - 1));
        const surface::FramePoint fr = flow.at(u);
        Jet3 fj, kappa, delta;
        const Jet3 g = f_over_delta(inv, f, u, &fj, &kappa, &delta);
        const double lambda = inv.lambda_at(u);

        const Vec3 sigma_t = delta.v * (lambda * fr.e + fr.z);
        const Vec3 gamma_t = g.d1 * fr.n + g.v * (-fr.e + kappa.v * fr.z);
        const double ns = sigma_t.norm(), ng = gamma_t.norm();
        if (ns < kZeroGuard || ng < kZeroGuard)
            throw GeometryError("zero tangent vector in the striction/directrix comparison");

        const double par_res = sigma_t.cross(gamma_t).norm() / (ns * ng);
        const double orth_res = std::fabs(sigma_t.dot(gamma_t)) / (ns * ng);
        const bool par_geom = par_res <= geom_tol;
        const bool orth_geom = orth_res <= geom_tol;
        const bool par_cond = std::fabs(g.d1) / (1.0 + std::fabs(g.v)) <= cond_tol &&
                              std::fabs(kappa.v * lambda + 1.0) <= cond_tol;
        const bool orth_cond = std::fabs(kappa.v - lambda) <= cond_tol;

        rep.u.push_back(u);
        rep.parallel_geom.push_back(par_geom);
        rep.orthogonal_geom.push_back(orth_geom);
        rep.parallel_cond.push_back(par_cond);
        rep.orthogonal_cond.push_back(orth_cond);
        rep.parallel_residual.push_back(par_res);
        rep.orthogonal_residual.push_back(orth_res);

        par_all = par_all && par_geom;
        orth_all = orth_all && orth_geom;
        consistent = consistent && par_geom == par_cond && orth_geom == orth_cond;
    }
    rep.parallel_everywhere = par_all;
    rep.orthogonal_everywhere = orth_all;
    rep.consistent = consistent;
    return rep;
}

Prop5Report check_prop5(const surface::InvariantTriple& inv, const expr::Expression& f,
                        const surface::FrameFlow& flow, int nu, double tol) {
    Prop5Report rep;
    const double uspan = inv.u_max - inv.u_min;
    double scale = 0.0;
    for (int i = 0; i < nu; ++i) {
        const double u = inv.u_min + uspan * (i / double(nu - 1));
        const auto [ifp, ii] = image_surface(inv, f, flow.at(u));
        const Jet3 g = f_over_delta(inv, f, u);
        rep.separation = std::max(rep.separation, (ifp.s_star - ifp.r_star).norm());
        rep.condition_residual = std::max(rep.condition_residual, std::fabs(g.d1));
        scale = std::max(scale, ifp.r_star.norm());
    }
    rep.separation /= 1.0 + scale;
    rep.condition_residual /= 1.0 + scale;
    rep.coincide_geom = rep.separation <= tol;
    rep.coincide_cond = rep.condition_residual <= tol;
    rep.agree = rep.coincide_geom == rep.coincide_cond;
    return rep;
}

bool Prop6Report::all_agree() const {
    return normals_parallel.agree() && orthoid.agree() && striction_asymptotic.agree() &&
           striction_curvature_line.agree() && congruent.agree() && edlinger.agree();
}

Prop6Report check_prop6(const surface::InvariantTriple& inv, const expr::Expression& f,
                        const surface::FrameFlow& flow, const CheckGrid& grid, double closed_tol,
                        double geom_tol) {
    Prop6Report rep;
    const double uspan = inv.u_max - inv.u_min;
    const double vspan = grid.v_max - grid.v_min;

    for (int i = 0; i < grid.nu; ++i) {
        const double u = inv.u_min + uspan * (i / double(grid.nu - 1));
        Jet3 fj, kappa, delta;
        const Jet3 g = f_over_delta(inv, f, u, &fj, &kappa, &delta);
        const double lambda = inv.lambda_at(u);
        const auto [ifp, ii] = image_surface(inv, f, flow.at(u));

        // (b) orthoid
        rep.orthoid.geom_residual = std::max(rep.orthoid.geom_residual,
                                             std::fabs(ii.lambda_star));
        rep.orthoid.closed_residual =
            std::max(rep.orthoid.closed_residual,
                     std::fabs(g.d2 + g.v) / (1.0 + std::fabs(g.v)));

        // (c) striction line of the image is an asymptotic line
        rep.striction_asymptotic.geom_residual =
            std::max(rep.striction_asymptotic.geom_residual,
                     std::fabs(ii.kappa_star - ii.lambda_star));
        const double c255 = delta.v * g.d2 + fj.v * (kappa.v * kappa.v + 1.0);
        rep.striction_asymptotic.closed_residual =
            std::max(rep.striction_asymptotic.closed_residual,
                     std::fabs(c255) / (1.0 + std::fabs(fj.v) * (kappa.v * kappa.v + 1.0)));

        // (d) striction line of the image is a line of curvature
        rep.striction_curvature_line.geom_residual =
            std::max(rep.striction_curvature_line.geom_residual,
                     std::fabs(1.0 + ii.kappa_star * ii.lambda_star));
        rep.striction_curvature_line.closed_residual =
            std::max(rep.striction_curvature_line.closed_residual,
                     std::fabs(g.d2) / (1.0 + std::fabs(g.v)));

        // (e) congruent image: equal fundamental invariant triples
        const double cong_geom = std::max({std::fabs(ii.delta_star - delta.v),
                                           std::fabs(ii.kappa_star - kappa.v),
                                           std::fabs(ii.lambda_star - lambda)});
        rep.congruent.geom_residual = std::max(rep.congruent.geom_residual, cong_geom);
        const Jet3 dk = delta / kappa;
        const double cong_closed =
            std::max(std::fabs(fj.v - delta.v * delta.v / kappa.v) / (1.0 + std::fabs(fj.v)),
                     std::fabs(lambda + dk.d2 / delta.v + 1.0 / kappa.v));
        rep.congruent.closed_residual = std::max(rep.congruent.closed_residual, cong_closed);

        // (f) Edlinger image: constant delta* and kappa* lambda* + 1 = 0
        const Jet3 dstar = kappa * g;
        const double edl_geom = std::max(std::fabs(dstar.d1),
                                         std::fabs(1.0 + ii.kappa_star * ii.lambda_star));
        rep.edlinger.geom_residual = std::max(rep.edlinger.geom_residual, edl_geom);
        const double edl_closed = std::max(std::fabs(g.d2) / (1.0 + std::fabs(g.v)),
                                           std::fabs((kappa * g).d1) / (1.0 + std::fabs(dstar.v)));
        rep.edlinger.closed_residual = std::max(rep.edlinger.closed_residual, edl_closed);

        // (a) parallel Euclidean normals, geometric route over the v-grid
        const surface::FramePoint fr = flow.at(u);
        for (int j = 0; j < grid.nv; ++j) {
            const double v = grid.v_min + vspan * (j / double(grid.nv - 1));
            const surface::SurfacePoint pt = surface::patch_point(inv, fr, v);
            const double vstar = g.d1 + fj.v * (2.0 * kappa.v * v + delta.d1) /
                                            (2.0 * delta.v * delta.v);
            const double wstar = std::sqrt(vstar * vstar + ii.delta_star * ii.delta_star);
            const Vec3 xi_star = (ii.delta_star * fr.n - vstar * fr.z) / wstar;
            rep.normals_parallel.geom_residual =
                std::max(rep.normals_parallel.geom_residual, pt.xi.cross(xi_star).norm());
        }
        const Jet3 t = fj / sqrt(abs(delta));
        rep.normals_parallel.closed_residual =
            std::max(rep.normals_parallel.closed_residual,
                     std::fabs(t.d1) / (1.0 + std::fabs(t.v)));
    }

    const auto decide = [&](Prop6Field& field) {
        field.geom = field.geom_residual <= geom_tol;
        field.closed = field.closed_residual <= closed_tol;
    };
    decide(rep.normals_parallel);
    decide(rep.orthoid);
    decide(rep.striction_asymptotic);
    decide(rep.striction_curvature_line);
    decide(rep.congruent);
    decide(rep.edlinger);
    return rep;
}

std::vector<InvariantSegment> invariant_segments(const surface::InvariantTriple& inv,
                                                 const expr::Expression& f, int nu) {
    std::vector<InvariantSegment> segments;
    InvariantSegment* open = nullptr;
    double prev_sign = 0.0;

    for (int i = 0; i < nu; ++i) {
        const double u = inv.u_min + (inv.u_max - inv.u_min) * (i / double(nu - 1));
        double kappa, fv;
        Jet3 g;
        try {
            Jet3 fj, kj;
            g = f_over_delta(inv, f, u, &fj, &kj);
            kappa = kj.v;
            fv = fj.v;
        } catch (const Error&) {
            open = nullptr;
            continue;
        }
        if (std::fabs(kappa) < 1e-9 || std::fabs(fv) < 1e-9) {
            open = nullptr;
            continue;
        }
        ImageInvariants ii;
        ii.kappa_star = kappa;
        ii.delta_star = kappa * g.v;
        ii.lambda_star = -(g.d2 + g.v) / (kappa * g.v);
        const double sgn = ii.delta_star > 0.0 ? 1.0 : -1.0;
        if (!open || sgn != prev_sign) {
            segments.push_back({u, u, ii, ii, 0});
            open = &segments.back();
            prev_sign = sgn;
        }
        open->u_end = u;
        ++open->samples;
        open->lo.delta_star = std::min(open->lo.delta_star, ii.delta_star);
        open->lo.kappa_star = std::min(open->lo.kappa_star, ii.kappa_star);
        open->lo.lambda_star = std::min(open->lo.lambda_star, ii.lambda_star);
        open->hi.delta_star = std::max(open->hi.delta_star, ii.delta_star);
        open->hi.kappa_star = std::max(open->hi.kappa_star, ii.kappa_star);
        open->hi.lambda_star = std::max(open->hi.lambda_star, ii.lambda_star);
    }
    return segments;
}

surface::InvariantSamples recover_image_invariants(const surface::InvariantTriple& inv,
                                                   const expr::Expression& f,
                                                   std::span<const surface::FramePoint> frames) {
    std::vector<surface::FramePoint> image_frames;
    image_frames.reserve(frames.size());
    for (const surface::FramePoint& fr : frames) {
        const auto [ifp, ii] = image_surface(inv, f, fr);
        surface::FramePoint g = fr;
        g.s = ifp.s_star;
        image_frames.push_back(g);
    }
    return surface::recover_invariants(image_frames);
}

} // namespace ruledlab::image
