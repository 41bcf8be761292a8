#pragma once

// Element-level quadrature caches shared by the assemblers.  Frames and 1D
// basis evaluations are computed once per in-plane point / thickness point
// and reused (the geometry makes this exact: the Jacobian never depends on
// the thickness coordinate).

#include <cstdint>
#include <vector>

#include "lamfast/assembly.hpp"
#include "lamfast/geometry.hpp"
#include "lamfast/materials.hpp"
#include "lamfast/quadrature.hpp"
#include "lamfast/splines.hpp"

namespace lamfast::detail {

struct InplanePoint {
    double weight = 0.0; ///< product of the two 1D Gauss weights
    GeometryFrame frame;
    /// Active in-plane functions in local order (u index fastest).
    std::vector<double> value, du, dv;
};

struct InplaneElement {
    int first_u = 0, first_v = 0;
    std::vector<int> funcs; ///< global in-plane indices, local order
    std::vector<InplanePoint> points;
};

/// Quadrature data for one in-plane element; evaluates the geometry frame
/// once per point.
InplaneElement buildInplaneElement(const TensorProductSpace& space, const ExtrudedGeometry& geom,
                                   const Span& span_u, const Span& span_v,
                                   const QuadratureRule& ref_u, const QuadratureRule& ref_v,
                                   std::int64_t* frame_evals);

struct ThicknessPoint {
    double weight = 0.0;
    std::vector<double> value, deriv; ///< active thickness functions on the span
};

struct ThicknessCellData {
    int layer = 0;
    std::vector<ThicknessPoint> points;
};

struct ThicknessSpanData {
    int first_active = 0;
    std::vector<ThicknessCellData> cells; ///< cells of this span, masked layers removed
};

/// Layerwise thickness quadrature grouped by knot span.  Layers not listed
/// in a nonempty mask are skipped.
std::vector<ThicknessSpanData> buildThicknessData(const KnotVector& kt,
                                                  const std::vector<double>& interfaces,
                                                  int pts_per_cell,
                                                  const std::vector<int>& layer_mask);

/// Quadrature point counts per direction implied by the options.
int inplanePointCount(const AssemblyOptions& options, const KnotVector& kv);
int thicknessPointCount(const AssemblyOptions& options, const KnotVector& kv);

} // namespace lamfast::detail
