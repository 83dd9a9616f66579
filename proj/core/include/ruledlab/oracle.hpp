#pragma once

#include <span>

#include "ruledlab/relnorm.hpp"

namespace ruledlab::oracle {

struct OracleConfig {
    double fd_step = 1e-4;
    bool richardson = true;
    double svd_tol = 1e-6;
};

/// Finite-difference Laplace normal: evaluates Delta x / 2 with Delta the
/// pseudo-Riemannian Laplace-Beltrami operator of the relative metric
/// G = h/q, entirely by central differences on 5-point stencils. The second
/// fundamental form is measured from the patch partials, so the result is
/// independent of the analytic Laplace field and of the jet machinery.
class LaplacianOracle {
public:
    LaplacianOracle(surface::InvariantTriple inv, relnorm::SupportField q,
                    OracleConfig cfg = {});

    Vec3 at(double u, double v) const;

    const surface::FrameFlow& flow() const { return flow_; }

private:
    relnorm::SupportField q_;
    OracleConfig cfg_;
    surface::FrameFlow flow_;
};

/// One-shot convenience wrapper around LaplacianOracle.
Vec3 laplacian_oracle(const surface::InvariantTriple& inv, const relnorm::SupportField& q,
                      double u, double v, const OracleConfig& cfg = {});

/// Number of singular values above tol relative to the largest; zero when
/// even the largest is below tol in absolute terms. Accepts 1 to 4 columns.
int numerical_rank(std::span<const Vec3> columns, double tol);

/// Total-least-squares fit of a line or plane through centered samples.
/// The residual is the ratio of the first discarded singular value to the
/// largest one; coincident samples give residual 0 and are flagged.
struct FitResult {
    double residual = 0.0;
    Vec3 direction = Vec3::Zero(); // line direction or plane normal
    Vec3 centroid = Vec3::Zero();
    bool degenerate = false;
};

FitResult fit_line(std::span<const Vec3> samples);
FitResult fit_plane(std::span<const Vec3> samples);

} // namespace ruledlab::oracle
