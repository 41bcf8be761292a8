#include "lamfast/geometry.hpp"

#include <stdexcept>
#include <utility>

namespace lamfast {

PlanarRectangle::PlanarRectangle(double lx, double ly) : lx_(lx), ly_(ly) {
    if (lx <= 0.0 || ly <= 0.0)
        throw std::invalid_argument("PlanarRectangle: side lengths must be positive");
}

SurfacePoint PlanarRectangle::evaluate(double u, double v) const {
    SurfacePoint p;
    p.position = {lx_ * u, ly_ * v, 0.0};
    p.du = {lx_, 0.0, 0.0};
    p.dv = {0.0, ly_, 0.0};
    return p;
}

BilinearQuad::BilinearQuad(Eigen::Vector3d c00, Eigen::Vector3d c10, Eigen::Vector3d c01,
                           Eigen::Vector3d c11)
    : c00_(std::move(c00)), c10_(std::move(c10)), c01_(std::move(c01)), c11_(std::move(c11)) {}

SurfacePoint BilinearQuad::evaluate(double u, double v) const {
    SurfacePoint p;
    p.position = (1 - u) * (1 - v) * c00_ + u * (1 - v) * c10_ + (1 - u) * v * c01_ + u * v * c11_;
    p.du = (1 - v) * (c10_ - c00_) + v * (c11_ - c01_);
    p.dv = (1 - u) * (c01_ - c00_) + u * (c11_ - c10_);
    return p;
}

SplineSurface::SplineSurface(KnotVector ku, KnotVector kv, std::vector<Eigen::Vector3d> controls)
    : ku_(std::move(ku)), kv_(std::move(kv)), controls_(std::move(controls)) {
    const std::size_t expected =
        static_cast<std::size_t>(ku_.numFunctions()) * static_cast<std::size_t>(kv_.numFunctions());
    if (controls_.size() != expected)
        throw std::invalid_argument("SplineSurface: control net size does not match the bases");
}

SurfacePoint SplineSurface::evaluate(double u, double v) const {
    const BasisEval1D bu = ku_.evaluate(u);
    const BasisEval1D bv = kv_.evaluate(v);
    SurfacePoint p;
    p.position.setZero();
    p.du.setZero();
    p.dv.setZero();
    const int nu = ku_.numFunctions();
    for (int jv = 0; jv <= kv_.degree(); ++jv) {
        for (int ju = 0; ju <= ku_.degree(); ++ju) {
            const Eigen::Vector3d& c =
                controls_[static_cast<std::size_t>((bv.first_active + jv) * nu + bu.first_active + ju)];
            p.position += bu.values[ju] * bv.values[jv] * c;
            p.du += bu.derivs[ju] * bv.values[jv] * c;
            p.dv += bu.values[ju] * bv.derivs[jv] * c;
        }
    }
    return p;
}

ExtrudedGeometry::ExtrudedGeometry(std::shared_ptr<const SurfaceMap> surface,
                                   Eigen::Vector3d direction)
    : surface_(std::move(surface)), direction_(std::move(direction)) {
    if (!surface_)
        throw std::invalid_argument("ExtrudedGeometry: surface must not be null");
    if (direction_.norm() == 0.0)
        throw std::invalid_argument("ExtrudedGeometry: extrusion direction must be nonzero");
}

Eigen::Vector3d ExtrudedGeometry::position(double u, double v, double w) const {
    return surface_->evaluate(u, v).position + w * direction_;
}

GeometryFrame ExtrudedGeometry::frameAt(double u, double v) const {
    const SurfacePoint p = surface_->evaluate(u, v);
    GeometryFrame frame;
    frame.df.col(0) = p.du;
    frame.df.col(1) = p.dv;
    frame.df.col(2) = direction_;
    frame.det = frame.df.determinant();
    if (frame.det < 1e-14)
        throw std::domain_error("ExtrudedGeometry: degenerate or orientation-reversing Jacobian");
    frame.df_inv_transpose = frame.df.inverse().transpose();
    return frame;
}

} // namespace lamfast
