#pragma once

#include <span>
#include <vector>

#include "ruledlab/expr.hpp"
#include "ruledlab/types.hpp"

namespace ruledlab::surface {

/// Everything below the torsal guard counts as a vanishing parameter of
/// distribution; the surface formulas all divide by it.
inline constexpr double kTorsalGuard = 1e-12;

/// The fundamental invariants of a skew ruled surface as differentiable
/// scalar fields of u on an interval, plus the constant bindings their
/// expressions may reference.
struct InvariantTriple {
    expr::Expression kappa;
    expr::Expression delta;
    expr::Expression lambda;
    double u_min = 0.0;
    double u_max = 1.0;
    expr::ConstantMap constants;

    double kappa_at(double u) const;
    double delta_at(double u) const; // throws TorsalRulingError below the guard
    double lambda_at(double u) const;

    Jet3 kappa_jet(double u) const;
    Jet3 delta_jet(double u) const; // guarded like delta_at
    Jet3 lambda_jet(double u) const;
};

/// Convenience constructor from expression strings.
InvariantTriple make_invariants(std::string_view kappa, std::string_view delta,
                                std::string_view lambda, double u_min, double u_max,
                                expr::ConstantMap constants = {});

/// Kruppa frame (ruling direction, central normal, central tangent) together
/// with the striction point at one parameter value.
struct FramePoint {
    double u = 0.0;
    Vec3 e = Vec3::UnitX();
    Vec3 n = Vec3::UnitY();
    Vec3 z = Vec3::UnitZ();
    Vec3 s = Vec3::Zero();
};

/// Standard basis frame at u0. The reconstruction is unique only up to rigid
/// motions; this frame is the canonical representative.
FramePoint canonical_frame(double u0);

bool is_orthonormal_right_handed(const FramePoint& f, double tol = 1e-9);

/// One surface point with first partials, unit normal, the displayed second
/// fundamental form components and the Gaussian curvature.
struct SurfacePoint {
    double u = 0.0;
    double v = 0.0;
    Vec3 x = Vec3::Zero();
    Vec3 x_u = Vec3::Zero();
    Vec3 x_v = Vec3::Zero();
    Vec3 xi = Vec3::Zero();
    double w = 0.0;
    double h11 = 0.0;
    double h12 = 0.0;
    double h22 = 0.0;
    double K = 0.0;
};

/// Integrates the joint frame/striction ODE with classical RK4 at fixed step
/// from u0 to the upper end of the invariant interval. Each step ends with a
/// Gram-Schmidt pass (e then n then z). Throws if the initial frame is not
/// orthonormal right-handed or the parameter of distribution hits the torsal
/// guard anywhere on the grid.
std::vector<FramePoint> integrate_frame(const InvariantTriple& inv, double u0,
                                        const FramePoint& frame0, double step);

/// Evaluates the ruled patch x(u,v) = s(u) + v e(u) and its Euclidean
/// fundamental quantities at one point.
SurfacePoint patch_point(const InvariantTriple& inv, const FramePoint& frame, double v);

/// Per-node invariant values recovered from a frame sequence by central
/// finite differences. Only interior nodes are reported.
struct InvariantSamples {
    std::vector<double> u;
    std::vector<double> kappa;
    std::vector<double> delta;
    std::vector<double> lambda;
};

/// Recovers (kappa, delta, lambda) from at least five frames on a uniform
/// grid. Rejects frames that fail the right-handedness check.
InvariantSamples recover_invariants(std::span<const FramePoint> frames);

/// Striction angle with cot(sigma) = lambda in the range (-pi/2, pi/2].
double striction_angle(double lambda);

/// Frame lookup at arbitrary u. A fine base grid is integrated once in the
/// constructor; queries step off the nearest cached node, so lookups are pure
/// and safe to run concurrently.
class FrameFlow {
public:
    explicit FrameFlow(InvariantTriple inv, double step = 1e-3);
    FrameFlow(InvariantTriple inv, const FramePoint& frame0, double step = 1e-3);

    FramePoint at(double u) const;

    const InvariantTriple& invariants() const { return inv_; }
    const std::vector<FramePoint>& base_grid() const { return base_; }

private:
    InvariantTriple inv_;
    double h_ = 1e-3;
    std::vector<FramePoint> base_;
};

} // namespace ruledlab::surface
