#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lamfast/geometry.hpp"
#include "lamfast/materials.hpp"
#include "lamfast/sparse.hpp"
#include "lamfast/splines.hpp"

namespace lamfast {

/// Everything needed to assemble a stiffness matrix: the discrete space, the
/// extruded geometry, and the laminate.
struct ProblemSetup {
    TensorProductSpace space;
    ExtrudedGeometry geom;
    Layup layup;
};

struct AssemblyOptions {
    int threads = 1;
    /// Gauss points per in-plane direction per element; 0 means degree+1.
    int inplane_points = 0;
    /// Gauss points per thickness cell; 0 means degree+1.
    int thickness_points = 0;
    /// When nonempty, only these layers contribute (others integrate as
    /// zero material).  Used to test layer additivity.
    std::vector<int> active_layers;
    /// Fast backend only: build five angle-independent in-plane operators
    /// and combine them with per-layer trigonometric weights instead of one
    /// operator set per distinct material configuration.
    bool decompose_angles = false;
};

/// Counters describing how much work an assembly performed.
struct AssemblyStats {
    /// Standard backend: number of (in-plane x thickness) quadrature-point
    /// visits.  Fast backend: in-plane quadrature-point visits during
    /// in-plane operator computation.
    std::int64_t qpoint_visits = 0;
    /// Geometry frame evaluations (before caching would multiply them).
    std::int64_t frame_evaluations = 0;
    /// Number of in-plane operator sets computed (fast backend).
    int operator_builds = 0;
};

/// Reference assembler: full 3D quadrature with the layerwise thickness
/// rule.  Cost per in-plane element scales with (layers x (p+1)^3).
StiffnessMatrix assembleStandard(const ProblemSetup& setup, const AssemblyOptions& options = {},
                                 AssemblyStats* stats = nullptr);

/// Evaluates the elastic bilinear form a(v, u) for two coefficient vectors
/// by direct quadrature of strain(v) : C : strain(u), without forming any
/// matrix.  Serves as an independent cross-check of v' * K * u.
double referenceBilinear(const ProblemSetup& setup, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& u, const AssemblyOptions& options = {});

} // namespace lamfast
