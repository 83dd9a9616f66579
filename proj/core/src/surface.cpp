#include "ruledlab/surface.hpp"

#include <algorithm>
#include <cmath>

#include "ruledlab/errors.hpp"

namespace ruledlab::surface {

namespace {

double guarded_delta(double delta, double u) {
    if (std::fabs(delta) < kTorsalGuard)
        throw TorsalRulingError(u);
    return delta;
}

struct FrameState {
    Vec3 e, n, z, s;
};

FrameState derivative(const InvariantTriple& inv, double u, const FrameState& y) {
    const double kappa = inv.kappa_at(u);
    const double delta = guarded_delta(expr::eval_value_u(inv.delta, u, inv.constants), u);
    const double lambda = inv.lambda_at(u);
    return {y.n, -y.e + kappa * y.z, -kappa * y.n, delta * (lambda * y.e + y.z)};
}

FrameState axpy(const FrameState& y, double a, const FrameState& d) {
    return {y.e + a * d.e, y.n + a * d.n, y.z + a * d.z, y.s + a * d.s};
}

void gram_schmidt(FrameState& y) {
    y.e.normalize();
    y.n -= y.n.dot(y.e) * y.e;
    y.n.normalize();
    y.z -= y.z.dot(y.e) * y.e;
    y.z -= y.z.dot(y.n) * y.n;
    y.z.normalize();
}

FrameState rk4_step(const InvariantTriple& inv, double u, const FrameState& y, double h) {
    const FrameState k1 = derivative(inv, u, y);
    const FrameState k2 = derivative(inv, u + 0.5 * h, axpy(y, 0.5 * h, k1));
    const FrameState k3 = derivative(inv, u + 0.5 * h, axpy(y, 0.5 * h, k2));
    const FrameState k4 = derivative(inv, u + h, axpy(y, h, k3));
    FrameState out = y;
    out.e += (h / 6.0) * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
    out.n += (h / 6.0) * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n);
    out.z += (h / 6.0) * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    out.s += (h / 6.0) * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
    gram_schmidt(out);
    return out;
}

FrameState to_state(const FramePoint& f) { return {f.e, f.n, f.z, f.s}; }

FramePoint to_frame(double u, const FrameState& y) { return {u, y.e, y.n, y.z, y.s}; }

} // namespace

double InvariantTriple::kappa_at(double u) const {
    return expr::eval_value_u(kappa, u, constants);
}

double InvariantTriple::delta_at(double u) const {
    return guarded_delta(expr::eval_value_u(delta, u, constants), u);
}

double InvariantTriple::lambda_at(double u) const {
    return expr::eval_value_u(lambda, u, constants);
}

Jet3 InvariantTriple::kappa_jet(double u) const { return expr::eval_jet3(kappa, u, constants); }

Jet3 InvariantTriple::delta_jet(double u) const {
    Jet3 j = expr::eval_jet3(delta, u, constants);
    guarded_delta(j.v, u);
    return j;
}

Jet3 InvariantTriple::lambda_jet(double u) const { return expr::eval_jet3(lambda, u, constants); }

InvariantTriple make_invariants(std::string_view kappa, std::string_view delta,
                                std::string_view lambda, double u_min, double u_max,
                                expr::ConstantMap constants) {
    InvariantTriple inv;
    inv.kappa = expr::parse(kappa);
    inv.delta = expr::parse(delta);
    inv.lambda = expr::parse(lambda);
    inv.u_min = u_min;
    inv.u_max = u_max;
    inv.constants = std::move(constants);
    return inv;
}

FramePoint canonical_frame(double u0) {
    return {u0, Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(), Vec3::Zero()};
}

bool is_orthonormal_right_handed(const FramePoint& f, double tol) {
    if (std::fabs(f.e.norm() - 1.0) > tol || std::fabs(f.n.norm() - 1.0) > tol ||
        std::fabs(f.z.norm() - 1.0) > tol)
        return false;
    if (std::fabs(f.e.dot(f.n)) > tol || std::fabs(f.e.dot(f.z)) > tol ||
        std::fabs(f.n.dot(f.z)) > tol)
        return false;
    return f.e.cross(f.n).dot(f.z) > 0.0;
}

std::vector<FramePoint> integrate_frame(const InvariantTriple& inv, double u0,
                                        const FramePoint& frame0, double step) {
    if (step <= 0.0)
        throw GeometryError("integration step must be positive");
    if (!is_orthonormal_right_handed(frame0))
        throw GeometryError("initial frame is not orthonormal right-handed");
    const double span = inv.u_max - u0;
    if (span <= 0.0)
        throw GeometryError("u0 must lie below the upper end of the invariant interval");

    const int n = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
    const double h = span / n;

    std::vector<FramePoint> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    FrameState y = to_state(frame0);
    out.push_back(to_frame(u0, y));
    for (int i = 0; i < n; ++i) {
        const double u = u0 + i * h;
        y = rk4_step(inv, u, y, h);
        out.push_back(to_frame(u0 + (i + 1) * h, y));
    }
    return out;
}

SurfacePoint patch_point(const InvariantTriple& inv, const FramePoint& frame, double v) {
    const double u = frame.u;
    const double kappa = inv.kappa_at(u);
    const Jet3 delta = inv.delta_jet(u);
    const double lambda = inv.lambda_at(u);

    const double d = delta.v;
    const double w2 = v * v + d * d;
    const double w = std::sqrt(w2);

    SurfacePoint pt;
    pt.u = u;
    pt.v = v;
    pt.x = frame.s + v * frame.e;
    pt.x_u = d * (lambda * frame.e + frame.z) + v * frame.n;
    pt.x_v = frame.e;
    pt.xi = (d * frame.n - v * frame.z) / w;
    pt.w = w;
    pt.h11 = -(kappa * v * v + delta.d1 * v + d * d * (kappa - lambda)) / w;
    pt.h12 = d;
    pt.h22 = 0.0;
    pt.K = -(d * d) / (w2 * w2);
    return pt;
}

InvariantSamples recover_invariants(std::span<const FramePoint> frames) {
    if (frames.size() < 5)
        throw GeometryError("invariant recovery needs at least five frames");
    for (const FramePoint& f : frames)
        if (!is_orthonormal_right_handed(f, 1e-6))
            throw GeometryError("frame sequence fails the orthonormal right-handed check");

    const double h = frames[1].u - frames[0].u;
    if (h <= 0.0)
        throw GeometryError("frame grid must be increasing");
    for (std::size_t i = 1; i + 1 < frames.size(); ++i) {
        const double hi = frames[i + 1].u - frames[i].u;
        if (std::fabs(hi - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw GeometryError("frame grid must be uniform");
    }

    InvariantSamples out;
    for (std::size_t i = 1; i + 1 < frames.size(); ++i) {
        const Vec3 e = frames[i].e;
        const Vec3 e1 = (frames[i + 1].e - frames[i - 1].e) / (2.0 * h);
        const Vec3 e2 = (frames[i + 1].e - 2.0 * frames[i].e + frames[i - 1].e) / (h * h);
        const Vec3 s1 = (frames[i + 1].s - frames[i - 1].s) / (2.0 * h);

        const double kappa = e.cross(e1).dot(e2);
        const double delta = s1.dot(e.cross(e1));
        if (std::fabs(delta) < kTorsalGuard)
            throw TorsalRulingError(frames[i].u);
        out.u.push_back(frames[i].u);
        out.kappa.push_back(kappa);
        out.delta.push_back(delta);
        out.lambda.push_back(s1.dot(e) / delta);
    }
    return out;
}

double striction_angle(double lambda) {
    if (lambda == 0.0)
        return 1.57079632679489662; // pi/2: the orthoid case
    return std::atan(1.0 / lambda);
}

FrameFlow::FrameFlow(InvariantTriple inv, double step)
    : FrameFlow(std::move(inv), canonical_frame(0.0), step) {}

FrameFlow::FrameFlow(InvariantTriple inv, const FramePoint& frame0, double step)
    : inv_(std::move(inv)) {
    if (step <= 0.0)
        throw GeometryError("integration step must be positive");
    const double span = inv_.u_max - inv_.u_min;
    if (span <= 0.0)
        throw GeometryError("invariant interval is empty");
    const int n = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
    h_ = span / n;

    FramePoint f0 = frame0;
    f0.u = inv_.u_min;
    base_ = integrate_frame(inv_, inv_.u_min, f0, h_);
}

FramePoint FrameFlow::at(double u) const {
    const auto step_from = [&](const FramePoint& f, double target) {
        FrameState y = to_state(f);
        double cur = f.u;
        // split long extrapolations outside the cached range into base-sized steps
        while (std::fabs(target - cur) > h_ * (1.0 + 1e-12)) {
            const double h = target > cur ? h_ : -h_;
            y = rk4_step(inv_, cur, y, h);
            cur += h;
        }
        if (std::fabs(target - cur) > 1e-15 * std::max(1.0, std::fabs(target)))
            y = rk4_step(inv_, cur, y, target - cur);
        return to_frame(target, y);
    };

    if (u <= inv_.u_min)
        return step_from(base_.front(), u);
    if (u >= inv_.u_max)
        return step_from(base_.back(), u);
    const auto idx = static_cast<std::size_t>((u - inv_.u_min) / h_);
    const std::size_t i = std::min(idx, base_.size() - 1);
    return step_from(base_[i], u);
}

} // namespace ruledlab::surface
