#include "ruledlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "float_format.hpp"
#include "ruledlab/errors.hpp"
#include "ruledlab/image.hpp"

namespace ruledlab::verify {

namespace {

using detail::g12;
using relnorm::SupportField;
using surface::FramePoint;
using surface::SurfacePoint;

constexpr double kConoidalKappaTol = 1e-12;
constexpr double kKappaNonvanishing = 1e-9;

struct Workspace {
    const scene::SceneConfig& cfg;
    surface::FrameFlow flow;
    bool f_form = false;             // q*w does not depend on v
    bool conoidal = false;           // f_form with kappa identically zero
    bool kappa_nonvanishing = false; // |kappa| bounded away from zero

    std::optional<laplace::ClassificationReport> classification;

    // jet of f(u) = q*w, measured off the support itself so a general
    // expression that happens to have the conoidal form is treated like one
    Jet3 f_jet(double u) const {
        if (cfg.support.kind == SupportField::Kind::ConoidalForm)
            return expr::eval_jet3(cfg.support.f_expr, u, cfg.invariants.constants);
        const BiJet2 w = relnorm::w_jet(cfg.invariants, u, 0.0);
        const BiJet2 t = cfg.support.eval(cfg.invariants, u, 0.0) * w;
        return {t.v, t.du, t.duu, 0.0};
    }

    explicit Workspace(const scene::SceneConfig& c)
        : cfg(c), flow(c.invariants, c.tolerances.frame_step) {
        double kmax = 0.0, kmin = 1e300;
        const int n = 101;
        for (int i = 0; i < n; ++i) {
            const double u =
                c.domain.u_min + (c.domain.u_max - c.domain.u_min) * (i / double(n - 1));
            const double k = std::fabs(c.invariants.kappa_at(u));
            kmax = std::max(kmax, k);
            kmin = std::min(kmin, k);
        }
        kappa_nonvanishing = kmin >= kKappaNonvanishing;

        if (c.support.kind == SupportField::Kind::ConoidalForm) {
            f_form = true;
        } else {
            // behavioral test: d(q*w)/dv over the grid
            double worst = 0.0, scale = 0.0;
            for (int i = 0; i < 11; ++i) {
                const double u =
                    c.domain.u_min + (c.domain.u_max - c.domain.u_min) * (i / 10.0);
                for (int j = 0; j < 11; ++j) {
                    const double v =
                        c.domain.v_min + (c.domain.v_max - c.domain.v_min) * (j / 10.0);
                    const BiJet2 t = c.support.eval(c.invariants, u, v) *
                                     relnorm::w_jet(c.invariants, u, v);
                    worst = std::max(worst, std::fabs(t.dv));
                    scale = std::max(scale, std::fabs(t.v));
                }
            }
            f_form = worst <= 1e-10 * (1.0 + scale);
        }
        conoidal = f_form && kmax <= kConoidalKappaTol;
    }

    const laplace::ClassificationReport& classify() {
        if (!classification)
            classification = laplace::classify_image(cfg.invariants, cfg.support,
                                                     cfg.classify_grid(),
                                                     cfg.classify_tolerances());
        return *classification;
    }

    double u_at(double t) const {
        return cfg.domain.u_min + t * (cfg.domain.u_max - cfg.domain.u_min);
    }
    double v_at(double t) const {
        return cfg.domain.v_min + t * (cfg.domain.v_max - cfg.domain.v_min);
    }
};

CheckResult check_oracle(Workspace& ws) {
    CheckResult r{"oracle", CheckResult::Status::Pass, {}, {}};
    const auto& cfg = ws.cfg;
    const oracle::LaplacianOracle lap(cfg.invariants, cfg.support, cfg.oracle_config());

    double max_rel = 0.0, z_struct = 0.0, z_oracle = 0.0;
    for (int i = 1; i <= 5; ++i) {
        for (int j = 1; j <= 5; ++j) {
            const double u = ws.u_at(i / 6.0);
            const double v = ws.v_at(j / 6.0);
            const FramePoint fr = ws.flow.at(u);
            const SurfacePoint pt = surface::patch_point(cfg.invariants, fr, v);
            const laplace::LaplaceSample s =
                laplace::laplace_field(pt, fr, cfg.invariants, cfg.support);
            const Vec3 numeric = lap.at(u, v);
            const double scale = 1.0 + s.L.norm();
            max_rel = std::max(max_rel, (numeric - s.L).norm() / scale);
            z_struct = std::max(z_struct, std::fabs(s.L.dot(fr.z)) / scale);
            z_oracle = std::max(z_oracle, std::fabs(numeric.dot(fr.z)));
        }
    }
    const double tol = cfg.tolerances.richardson ? 1e-6 : 1e-4;
    r.stats = {{"max_rel_dev", max_rel},
               {"tol", tol},
               {"z_structural", z_struct},
               {"z_oracle", z_oracle}};
    if (max_rel > tol || z_struct > 1e-12 || z_oracle > 1e-5)
        r.status = CheckResult::Status::Fail;
    return r;
}

double max_ruling_derivative(Workspace& ws) {
    const auto& cfg = ws.cfg;
    double max_lv = 0.0;
    for (int i = 0; i < cfg.domain.nu; ++i) {
        const FramePoint fr = ws.flow.at(ws.u_at(i / double(cfg.domain.nu - 1)));
        for (int j = 0; j < cfg.domain.nv; ++j) {
            const double v = ws.v_at(j / double(cfg.domain.nv - 1));
            const SurfacePoint pt = surface::patch_point(cfg.invariants, fr, v);
            const laplace::LaplaceSample s =
                laplace::laplace_field(pt, fr, cfg.invariants, cfg.support);
            max_lv = std::max(max_lv, s.L_v.norm());
        }
    }
    return max_lv;
}

CheckResult check_prop1(Workspace& ws) {
    CheckResult r{"prop1", CheckResult::Status::Pass, {}, {}};
    const double max_lv = max_ruling_derivative(ws);
    const double threshold = ws.conoidal ? 1e-9 : 1e-3;
    r.stats = {{"conoidal_form", ws.conoidal ? 1.0 : 0.0},
               {"max_Lv", max_lv},
               {"threshold", threshold}};
    const bool ok = ws.conoidal ? max_lv <= threshold : max_lv >= threshold;
    if (!ok)
        r.status = CheckResult::Status::Fail;
    return r;
}

// Residuals of the two relations that characterize the point case.
std::pair<double, double> point_case_residuals(const Workspace& ws, double u) {
    const auto& inv = ws.cfg.invariants;
    const Jet3 d = inv.delta_jet(u);
    const Jet3 f = ws.f_jet(u);
    const Jet3 g = jet_shift(d) * f / (d * d);
    const Jet3 fd = f / d;
    const double scale = 1.0 + std::fabs(fd.v);
    return {std::fabs(g.d1 - 2.0 * fd.v) / scale, std::fabs(g.v + 2.0 * fd.d1) / scale};
}

CheckResult check_prop2(Workspace& ws) {
    CheckResult r{"prop2", CheckResult::Status::Pass, {}, {}};
    const auto& cfg = ws.cfg;
    const auto& cls = ws.classify();
    const bool is_point = cls.verdict == laplace::Verdict::Point;

    double eq213 = 0.0;
    if (ws.conoidal) {
        for (int i = 0; i < cfg.domain.nu; ++i) {
            const auto [r1, r2] = point_case_residuals(ws, ws.u_at(i / double(cfg.domain.nu - 1)));
            eq213 = std::max({eq213, r1, r2});
        }
    } else {
        eq213 = 1.0; // conditions require the conoidal point family
    }
    const bool cond = ws.conoidal && eq213 <= 1e-9;

    r.stats = {{"verdict_point", is_point ? 1.0 : 0.0},
               {"condition_residual", eq213},
               {"point_residual", cls.find("point_residual")->value}};
    bool ok = is_point == cond;

    if (is_point) {
        // the point case is an improper relative sphere: y = L = const
        double y_vs_l = 0.0, y_const = 0.0;
        std::vector<Vec3> ys;
        for (int i = 0; i < cfg.domain.nu; ++i) {
            const FramePoint fr = ws.flow.at(ws.u_at(i / double(cfg.domain.nu - 1)));
            for (double t : {0.25, 0.75}) {
                const SurfacePoint pt = surface::patch_point(cfg.invariants, fr, ws.v_at(t));
                const auto rs = relnorm::relative_normal(pt, fr, cfg.invariants, cfg.support);
                const auto ls = laplace::laplace_field(pt, fr, cfg.invariants, cfg.support);
                y_vs_l = std::max(y_vs_l, (rs.y - ls.L).norm());
                ys.push_back(rs.y);
            }
        }
        Vec3 mean = Vec3::Zero();
        for (const Vec3& y : ys)
            mean += y;
        mean /= double(ys.size());
        for (const Vec3& y : ys)
            y_const = std::max(y_const, (y - mean).norm());
        y_vs_l /= cls.scale;
        y_const /= cls.scale;
        r.stats.push_back({"y_vs_L", y_vs_l});
        r.stats.push_back({"y_const", y_const});
        r.stats.push_back({"point_x", cls.gamma_mean.x()});
        r.stats.push_back({"point_y", cls.gamma_mean.y()});
        r.stats.push_back({"point_z", cls.gamma_mean.z()});
        ok = ok && y_vs_l <= 1e-6 && y_const <= 1e-6;
    }
    if (!ok)
        r.status = CheckResult::Status::Fail;
    return r;
}

CheckResult check_prop3(Workspace& ws) {
    CheckResult r{"prop3", CheckResult::Status::Pass, {}, {}};
    const auto& cls = ws.classify();
    const double max_lv_rel = cls.find("max_Lv_over_scale")->value;
    if (max_lv_rel > ws.cfg.tolerances.classify_rel) {
        r.status = CheckResult::Status::Skip;
        r.note = "image is 2-dimensional; no curve to test";
        return r;
    }
    const double plane_res = cls.find("plane_residual")->value;
    const double point_res = cls.find("point_residual")->value;
    const double eq216 = cls.find("line_condition_residual")->value;
    const bool planar = point_res <= ws.cfg.tolerances.classify_rel ||
                        plane_res <= ws.cfg.tolerances.classify_rel;
    // the closed-form line family must come out straight (or a point)
    bool family_ok = true;
    if (eq216 <= 1e-9)
        family_ok = cls.verdict == laplace::Verdict::StraightLine ||
                    cls.verdict == laplace::Verdict::Point;
    r.stats = {{"plane_residual", plane_res},
               {"line_condition_residual", eq216},
               {"verdict_line", cls.verdict == laplace::Verdict::StraightLine ? 1.0 : 0.0}};
    if (!planar || !family_ok)
        r.status = CheckResult::Status::Fail;
    return r;
}

bool image_checks_apply(const Workspace& ws, CheckResult& r) {
    if (ws.cfg.support.kind != SupportField::Kind::ConoidalForm || !ws.kappa_nonvanishing) {
        r.status = CheckResult::Status::Skip;
        r.note = "needs a non-conoidal base with support given as kind=conoidal";
        return false;
    }
    return true;
}

CheckResult check_prop4(Workspace& ws) {
    CheckResult r{"prop4", CheckResult::Status::Pass, {}, {}};
    if (!image_checks_apply(ws, r))
        return r;
    const auto rep = image::check_prop4(ws.cfg.invariants, ws.cfg.support.f_expr, ws.flow);
    double par_min = 1e300, orth_min = 1e300;
    for (double x : rep.parallel_residual)
        par_min = std::min(par_min, x);
    for (double x : rep.orthogonal_residual)
        orth_min = std::min(orth_min, x);
    r.stats = {{"parallel_everywhere", rep.parallel_everywhere ? 1.0 : 0.0},
               {"orthogonal_everywhere", rep.orthogonal_everywhere ? 1.0 : 0.0},
               {"min_parallel_residual", par_min},
               {"min_orthogonal_residual", orth_min}};
    if (!rep.consistent)
        r.status = CheckResult::Status::Fail;
    return r;
}

CheckResult check_prop5(Workspace& ws) {
    CheckResult r{"prop5", CheckResult::Status::Pass, {}, {}};
    if (!image_checks_apply(ws, r))
        return r;
    const auto rep = image::check_prop5(ws.cfg.invariants, ws.cfg.support.f_expr, ws.flow);
    r.stats = {{"separation", rep.separation},
               {"condition_residual", rep.condition_residual},
               {"coincide", rep.coincide_geom ? 1.0 : 0.0}};
    if (!rep.agree)
        r.status = CheckResult::Status::Fail;
    return r;
}

CheckResult check_prop6(Workspace& ws) {
    CheckResult r{"prop6", CheckResult::Status::Pass, {}, {}};
    if (!image_checks_apply(ws, r))
        return r;
    image::CheckGrid grid;
    grid.v_min = ws.cfg.domain.v_min;
    grid.v_max = ws.cfg.domain.v_max;
    const auto rep = image::check_prop6(ws.cfg.invariants, ws.cfg.support.f_expr, ws.flow, grid);

    const auto push = [&](const char* name, const image::Prop6Field& f) {
        r.stats.push_back({std::string(name) + "_holds", f.geom ? 1.0 : 0.0});
        r.stats.push_back({std::string(name) + "_geom_residual", f.geom_residual});
        r.stats.push_back({std::string(name) + "_closed_residual", f.closed_residual});
    };
    push("normals_parallel", rep.normals_parallel);
    push("orthoid", rep.orthoid);
    push("striction_asymptotic", rep.striction_asymptotic);
    push("striction_curvature_line", rep.striction_curvature_line);
    push("congruent", rep.congruent);
    push("edlinger", rep.edlinger);
    if (!rep.all_agree())
        r.status = CheckResult::Status::Fail;
    return r;
}

CheckResult check_examples(Workspace& ws) {
    CheckResult r{"examples", CheckResult::Status::Pass, {}, {}};
    const auto& cfg = ws.cfg;
    if (ws.conoidal) {
        // straight-line example: the image curve must have zero curvature
        // and fit a line
        double max_k = 0.0;
        const int n = 101;
        for (int i = 0; i < n; ++i) {
            const double u = ws.u_at(i / double(n - 1));
            max_k = std::max(max_k, laplace::gamma_curvature(cfg.invariants, ws.f_jet(u), u));
        }
        const auto& cls = ws.classify();
        const auto line = oracle::fit_line(cls.gamma);
        r.stats = {{"max_curvature", max_k}, {"line_residual", line.residual}};
        if (max_k > 1e-8 || line.residual > 1e-8)
            r.status = CheckResult::Status::Fail;
        return r;
    }
    if (ws.cfg.support.kind == SupportField::Kind::ConoidalForm && ws.kappa_nonvanishing) {
        // closing example: the striction line of the image surface is an
        // asymptotic line, kappa* = lambda*
        double dev = 0.0;
        const int n = 101;
        for (int i = 0; i < n; ++i) {
            const double u = ws.u_at(i / double(n - 1));
            const auto [ifp, ii] =
                image::image_surface(cfg.invariants, cfg.support.f_expr, ws.flow.at(u));
            dev = std::max(dev, std::fabs(ii.kappa_star - ii.lambda_star));
        }
        r.stats = {{"max_kappa_lambda_dev", dev}};
        if (dev > 1e-8)
            r.status = CheckResult::Status::Fail;
        return r;
    }
    r.status = CheckResult::Status::Skip;
    r.note = "needs a conoidal-form support";
    return r;
}

} // namespace

const char* check_name(Check c) {
    switch (c) {
    case Check::Oracle: return "oracle";
    case Check::Prop1: return "prop1";
    case Check::Prop2: return "prop2";
    case Check::Prop3: return "prop3";
    case Check::Prop4: return "prop4";
    case Check::Prop5: return "prop5";
    case Check::Prop6: return "prop6";
    case Check::Examples: return "examples";
    }
    return "?";
}

std::vector<Check> applicable_checks(const scene::SceneConfig& cfg) {
    std::vector<Check> out = {Check::Oracle, Check::Prop1, Check::Prop2, Check::Prop3};
    if (cfg.support.kind == SupportField::Kind::ConoidalForm) {
        out.push_back(Check::Prop4);
        out.push_back(Check::Prop5);
        out.push_back(Check::Prop6);
    }
    return out;
}

std::vector<Check> parse_checks(const std::string& text, const scene::SceneConfig& cfg) {
    if (text.empty() || text == "auto")
        return applicable_checks(cfg);
    if (text == "all")
        return {Check::Oracle, Check::Prop1, Check::Prop2, Check::Prop3,
                Check::Prop4, Check::Prop5, Check::Prop6, Check::Examples};

    std::vector<Check> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        bool found = false;
        for (Check c : {Check::Oracle, Check::Prop1, Check::Prop2, Check::Prop3, Check::Prop4,
                        Check::Prop5, Check::Prop6, Check::Examples}) {
            if (item == check_name(c)) {
                out.push_back(c);
                found = true;
                break;
            }
        }
        if (!found)
            throw Error("unknown check '" + item + "'");
    }
    if (out.empty())
        throw Error("empty check set");
    return out;
}

bool Report::overall() const {
    bool any = false;
    for (const CheckResult& c : checks) {
        if (c.status == CheckResult::Status::Fail)
            return false;
        if (c.status == CheckResult::Status::Pass)
            any = true;
    }
    return any;
}

std::string Report::text() const {
    std::string out = "scene: " + scene + "\n";
    for (const CheckResult& c : checks) {
        out += "check " + c.name + ": ";
        switch (c.status) {
        case CheckResult::Status::Pass: out += "PASS"; break;
        case CheckResult::Status::Fail: out += "FAIL"; break;
        case CheckResult::Status::Skip: out += "SKIP"; break;
        }
        for (const auto& [key, value] : c.stats)
            out += " " + key + "=" + g12(value);
        if (!c.note.empty())
            out += " (" + c.note + ")";
        out += "\n";
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        out += "image segment " + std::to_string(i + 1) + ": u=[" + g12(seg.u_begin) + "," +
               g12(seg.u_end) + "] delta_star=[" + g12(seg.lo.delta_star) + "," +
               g12(seg.hi.delta_star) + "] kappa_star=[" + g12(seg.lo.kappa_star) + "," +
               g12(seg.hi.kappa_star) + "] lambda_star=[" + g12(seg.lo.lambda_star) + "," +
               g12(seg.hi.lambda_star) + "]\n";
    }
    out += std::string("overall: ") + (overall() ? "PASS" : "FAIL") + "\n";
    return out;
}

Report run_verify(const scene::SceneConfig& cfg, const std::vector<Check>& checks) {
    Workspace ws(cfg);
    Report rep;
    rep.scene = cfg.name.empty() ? "unnamed" : cfg.name;
    if (cfg.support.kind == SupportField::Kind::ConoidalForm)
        rep.segments = image::invariant_segments(cfg.invariants, cfg.support.f_expr);
    for (Check c : checks) {
        switch (c) {
        case Check::Oracle: rep.checks.push_back(check_oracle(ws)); break;
        case Check::Prop1: rep.checks.push_back(check_prop1(ws)); break;
        case Check::Prop2: rep.checks.push_back(check_prop2(ws)); break;
        case Check::Prop3: rep.checks.push_back(check_prop3(ws)); break;
        case Check::Prop4: rep.checks.push_back(check_prop4(ws)); break;
        case Check::Prop5: rep.checks.push_back(check_prop5(ws)); break;
        case Check::Prop6: rep.checks.push_back(check_prop6(ws)); break;
        case Check::Examples: rep.checks.push_back(check_examples(ws)); break;
        }
    }
    return rep;
}

laplace::ClassificationReport run_classify(const scene::SceneConfig& cfg) {
    return laplace::classify_image(cfg.invariants, cfg.support, cfg.classify_grid(),
                                   cfg.classify_tolerances());
}

std::string classification_text(const scene::SceneConfig& cfg,
                                const laplace::ClassificationReport& rep) {
    std::string out = "scene: " + (cfg.name.empty() ? std::string("unnamed") : cfg.name) + "\n";
    out += "verdict: " + laplace::verdict_name(rep.verdict) + "\n";
    for (const auto& e : rep.evidence)
        out += "evidence " + e.name + "=" + g12(e.value) + " threshold=" + g12(e.threshold) +
               "\n";
    out += "scale=" + g12(rep.scale) + "\n";
    const auto vec_line = [&](const char* name, const Vec3& v) {
        return std::string(name) + "=" + g12(v.x()) + " " + g12(v.y()) + " " + g12(v.z()) + "\n";
    };
    out += vec_line("gamma_mean", rep.gamma_mean);
    out += vec_line("line_direction", rep.line_direction);
    out += vec_line("plane_normal", rep.plane_normal);

    // cross-check the analytic field used above against the independent
    // finite-difference Laplacian at a few interior points
    const oracle::LaplacianOracle lap(cfg.invariants, cfg.support, cfg.oracle_config());
    const surface::FrameFlow flow(cfg.invariants, cfg.tolerances.frame_step);
    double dev = 0.0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const double u =
                cfg.domain.u_min + (cfg.domain.u_max - cfg.domain.u_min) * (i / 4.0);
            const double v =
                cfg.domain.v_min + (cfg.domain.v_max - cfg.domain.v_min) * (j / 4.0);
            const FramePoint fr = flow.at(u);
            const auto pt = surface::patch_point(cfg.invariants, fr, v);
            const auto s = laplace::laplace_field(pt, fr, cfg.invariants, cfg.support);
            dev = std::max(dev, (lap.at(u, v) - s.L).norm() / (1.0 + s.L.norm()));
        }
    }
    const double tol = cfg.tolerances.richardson ? 1e-6 : 1e-4;
    out += "oracle_max_rel_dev=" + g12(dev) + " threshold=" + g12(tol) + " " +
           (dev <= tol ? "OK" : "MISMATCH") + "\n";
    return out;
}

std::string eval_csv(const scene::SceneConfig& cfg) {
    const surface::FrameFlow flow(cfg.invariants, cfg.tolerances.frame_step);
    const scene::Domain& d = cfg.domain;

    std::string out =
        "u,v,px,py,pz,ex,ey,ez,nx,ny,nz,zx,zy,zz,xix,xiy,xiz,K,q,q_aff,"
        "y_fe,y_fn,y_fz,yx,yy,yz,yaff_fe,yaff_fn,yaffx,yaffy,yaffz,L1,L2,Lx,Ly,Lz\n";
    for (int i = 0; i < d.nu; ++i) {
        const FramePoint fr = flow.at(d.u_min + (d.u_max - d.u_min) * (i / double(d.nu - 1)));
        for (int j = 0; j < d.nv; ++j) {
            const double v = d.v_min + (d.v_max - d.v_min) * (j / double(d.nv - 1));
            const SurfacePoint pt = surface::patch_point(cfg.invariants, fr, v);
            const auto rs = relnorm::relative_normal(pt, fr, cfg.invariants, cfg.support);
            const auto aff = relnorm::equiaffine_normal(pt, fr, cfg.invariants);
            const auto ls = laplace::laplace_field(pt, fr, cfg.invariants, cfg.support);

            const double cols[] = {pt.u,       v,          pt.x.x(),   pt.x.y(),  pt.x.z(),
                                   fr.e.x(),   fr.e.y(),   fr.e.z(),   fr.n.x(),  fr.n.y(),
                                   fr.n.z(),   fr.z.x(),   fr.z.y(),   fr.z.z(),  pt.xi.x(),
                                   pt.xi.y(),  pt.xi.z(),  pt.K,       rs.q.v,    aff.q_aff,
                                   rs.y_e,     rs.y_n,     rs.y_z,     rs.y.x(),  rs.y.y(),
                                   rs.y.z(),   aff.y_e,    aff.y_n,    aff.y.x(), aff.y.y(),
                                   aff.y.z(),  ls.L1,      ls.L2,      ls.L.x(),  ls.L.y(),
                                   ls.L.z()};
            bool first = true;
            for (double c : cols) {
                if (!first)
                    out += ',';
                out += g12(c);
                first = false;
            }
            out += '\n';
        }
    }
    return out;
}

std::string gamma_csv(const scene::SceneConfig& cfg) {
    Workspace ws(cfg);
    const scene::Domain& d = cfg.domain;

    // curvature is only defined when the image is a genuine curve; a
    // point-degenerate image has no tangent anywhere
    const bool curvature =
        ws.conoidal && ws.classify().verdict != laplace::Verdict::Point;

    std::string out = curvature ? "u,x,y,z,k\n" : "u,x,y,z\n";
    for (int i = 0; i < d.nu; ++i) {
        const double u = d.u_min + (d.u_max - d.u_min) * (i / double(d.nu - 1));
        const FramePoint fr = ws.flow.at(u);
        const SurfacePoint pt = surface::patch_point(cfg.invariants, fr, 0.0);
        const auto ls = laplace::laplace_field(pt, fr, cfg.invariants, cfg.support);
        out += g12(u) + "," + g12(ls.L.x()) + "," + g12(ls.L.y()) + "," + g12(ls.L.z());
        if (curvature) {
            out += ',';
            try {
                out += g12(laplace::gamma_curvature(cfg.invariants, ws.f_jet(u), u));
            } catch (const GeometryError&) {
                // isolated degenerate tangent: leave the cell empty
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace ruledlab::verify
