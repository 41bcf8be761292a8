#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lamfast/splines.hpp"

namespace lamfast {

/// Position and first partial derivatives of a surface at a parametric point.
struct SurfacePoint {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Vector3d du = Eigen::Vector3d::Zero();
    Eigen::Vector3d dv = Eigen::Vector3d::Zero();
};

/// A 2D -> 3D midsurface map S(u, v) on the unit square.
class SurfaceMap {
public:
    virtual ~SurfaceMap() = default;
    virtual SurfacePoint evaluate(double u, double v) const = 0;
};

/// Flat rectangle of side lengths Lx, Ly in the z = 0 plane.
class PlanarRectangle : public SurfaceMap {
public:
    PlanarRectangle(double lx, double ly);
    SurfacePoint evaluate(double u, double v) const override;

private:
    double lx_, ly_;
};

/// Bilinear interpolation of four corner points c00, c10, c01, c11.
class BilinearQuad : public SurfaceMap {
public:
    BilinearQuad(Eigen::Vector3d c00, Eigen::Vector3d c10, Eigen::Vector3d c01,
                 Eigen::Vector3d c11);
    SurfacePoint evaluate(double u, double v) const override;

private:
    Eigen::Vector3d c00_, c10_, c01_, c11_;
};

/// Tensor-product B-spline surface with a control net sized
/// (n_u x n_v); control point (i, j) is stored at controls[j * n_u + i].
class SplineSurface : public SurfaceMap {
public:
    SplineSurface(KnotVector ku, KnotVector kv, std::vector<Eigen::Vector3d> controls);
    SurfacePoint evaluate(double u, double v) const override;

private:
    KnotVector ku_, kv_;
    std::vector<Eigen::Vector3d> controls_;
};

/// Jacobian data of the volume map at an in-plane point.  The volume map is
/// an extrusion, so none of this depends on the thickness coordinate.
struct GeometryFrame {
    Eigen::Matrix3d df = Eigen::Matrix3d::Identity();            ///< [dS/du | dS/dv | a]
    Eigen::Matrix3d df_inv_transpose = Eigen::Matrix3d::Identity();
    double det = 1.0;
    Eigen::Vector3d covariant(int i) const { return df.col(i); }
    Eigen::Vector3d contravariant(int i) const { return df_inv_transpose.col(i); }
};

/// Volume parametrization F(u, v, w) = S(u, v) + w * a obtained by extruding
/// a midsurface along a constant direction.  Only such maps are
/// constructible, which is what makes per-in-plane-point frame caching exact.
class ExtrudedGeometry {
public:
    ExtrudedGeometry(std::shared_ptr<const SurfaceMap> surface, Eigen::Vector3d direction);

    /// Frame at in-plane point (u, v); valid for every thickness coordinate.
    /// Throws std::domain_error when the Jacobian is degenerate or
    /// orientation-reversing.
    GeometryFrame frameAt(double u, double v) const;

    /// Physical position F(u, v, w) = S(u, v) + w * a.
    Eigen::Vector3d position(double u, double v, double w) const;

    const Eigen::Vector3d& direction() const { return direction_; }
    const SurfaceMap& surface() const { return *surface_; }

private:
    std::shared_ptr<const SurfaceMap> surface_;
    Eigen::Vector3d direction_;
};

/// Maps a parametric gradient to the physical gradient: DF^{-T} * grad.
inline Eigen::Vector3d pullbackGradient(const GeometryFrame& frame,
                                        const Eigen::Vector3d& grad_hat) {
    return frame.df_inv_transpose * grad_hat;
}

} // namespace lamfast
