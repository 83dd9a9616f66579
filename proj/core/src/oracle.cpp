#include "ruledlab/oracle.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ruledlab/errors.hpp"

namespace ruledlab::oracle {

namespace {

constexpr double kDetGuard = 1e-14;

struct PatchData {
    surface::SurfacePoint pt;
};

// 4th-order central first derivative on a 5-point stencil.
template <typename F>
auto fd5(const F& f, double x, double h) -> decltype(f(x)) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

} // namespace

LaplacianOracle::LaplacianOracle(surface::InvariantTriple inv, relnorm::SupportField q,
                                 OracleConfig cfg)
    : q_(std::move(q)), cfg_(cfg), flow_(std::move(inv), 1e-3) {
    if (cfg_.fd_step <= 0.0)
        throw GeometryError("finite-difference step must be positive");
}

Vec3 LaplacianOracle::at(double u, double v) const {
    const surface::InvariantTriple& inv = flow_.invariants();
    const double h_in = cfg_.fd_step;

    const auto patch = [&](double uu, double vv) {
        return surface::patch_point(inv, flow_.at(uu), vv);
    };

    // second fundamental form measured from the first partials and the
    // normalized cross product; nothing here knows the invariant formulas
    const auto h_raw = [&](double uu, double vv, const surface::SurfacePoint& pt, double& h11,
                           double& h12, double& h22) {
        const Vec3 x_uu = fd5([&](double t) { return patch(t, vv).x_u; }, uu, h_in);
        const Vec3 x_uv = fd5([&](double t) { return patch(uu, t).x_u; }, vv, h_in);
        const Vec3 x_vv = fd5([&](double t) { return patch(uu, t).x_v; }, vv, h_in);
        const Vec3 normal = pt.x_u.cross(pt.x_v).normalized();
        h11 = x_uu.dot(normal);
        h12 = x_uv.dot(normal);
        h22 = x_vv.dot(normal);
    };

    // F^j = sqrt(|det G|) G^{jk} x_k with G = h/q
    const auto flux = [&](double uu, double vv, int j) -> Vec3 {
        const surface::SurfacePoint pt = patch(uu, vv);
        double h11, h12, h22;
        h_raw(uu, vv, pt, h11, h12, h22);
        const double q = q_.value(inv, uu, vv);
        if (std::fabs(q) < 1e-12)
            throw GeometryError("support function vanishes inside the oracle stencil");
        const double g11 = h11 / q, g12 = h12 / q, g22 = h22 / q;
        const double det = g11 * g22 - g12 * g12;
        if (std::fabs(det) < kDetGuard)
            throw GeometryError("relative metric is numerically degenerate");
        const double s = std::sqrt(std::fabs(det));
        if (j == 1)
            return (s / det) * (g22 * pt.x_u - g12 * pt.x_v);
        return (s / det) * (-g12 * pt.x_u + g11 * pt.x_v);
    };

    const auto divergence = [&](double h) -> Vec3 {
        const Vec3 du = fd5([&](double t) { return flux(t, v, 1); }, u, h);
        const Vec3 dv = fd5([&](double t) { return flux(u, t, 2); }, v, h);
        return du + dv;
    };

    Vec3 div = divergence(cfg_.fd_step);
    if (cfg_.richardson) {
        const Vec3 fine = divergence(0.5 * cfg_.fd_step);
        div = (16.0 * fine - div) / 15.0;
    }

    const surface::SurfacePoint pt = patch(u, v);
    double h11, h12, h22;
    h_raw(u, v, pt, h11, h12, h22);
    const double q = q_.value(inv, u, v);
    const double det = (h11 / q) * (h22 / q) - (h12 / q) * (h12 / q);
    if (std::fabs(det) < kDetGuard)
        throw GeometryError("relative metric is numerically degenerate");
    return div / (2.0 * std::sqrt(std::fabs(det)));
}

Vec3 laplacian_oracle(const surface::InvariantTriple& inv, const relnorm::SupportField& q,
                      double u, double v, const OracleConfig& cfg) {
    return LaplacianOracle(inv, q, cfg).at(u, v);
}

int numerical_rank(std::span<const Vec3> columns, double tol) {
    if (columns.empty() || columns.size() > 4)
        throw GeometryError("numerical rank expects 1 to 4 columns");
    Eigen::MatrixXd m(3, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i)
        m.col(static_cast<Eigen::Index>(i)) = columns[i];
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) < tol)
        return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0))
            ++rank;
    return rank;
}

namespace {

FitResult fit_impl(std::span<const Vec3> samples, bool plane) {
    if (samples.size() < 3)
        throw GeometryError("fitting needs at least three samples");
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : samples)
        centroid += p;
    centroid /= static_cast<double>(samples.size());

    Eigen::MatrixXd m(static_cast<Eigen::Index>(samples.size()), 3);
    for (std::size_t i = 0; i < samples.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = (samples[i] - centroid).transpose();

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();

    FitResult r;
    r.centroid = centroid;
    if (sv(0) < 1e-300) {
        r.degenerate = true;
        return r;
    }
    if (plane) {
        r.residual = sv(2) / sv(0);
        r.direction = svd.matrixV().col(2);
    } else {
        r.residual = sv(1) / sv(0);
        r.direction = svd.matrixV().col(0);
    }
    return r;
}

} // namespace

FitResult fit_line(std::span<const Vec3> samples) { return fit_impl(samples, false); }

FitResult fit_plane(std::span<const Vec3> samples) { return fit_impl(samples, true); }

} // namespace ruledlab::oracle
