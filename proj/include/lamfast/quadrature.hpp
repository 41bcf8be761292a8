#pragma once

#include <vector>

#include "lamfast/splines.hpp"

namespace lamfast {

/// One-dimensional quadrature rule: points and weights on some interval.
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule with n points on [-1, 1].
/// Nodes are roots of the Legendre polynomial P_n, found by Newton iteration
/// from Chebyshev initial guesses; converges to ~1e-15 in a few steps.
QuadratureRule gaussLegendre(int n);

/// Gauss-Legendre rule with n points mapped to [a, b].
QuadratureRule gaussLegendre(int n, double a, double b);

/// A quadrature cell in the thickness direction: the (nonempty) intersection
/// of a knot span with a material layer.  Integration over the thickness is
/// the sum over cells of an n_points Gauss rule on [lo, hi].
struct ThicknessCell {
    double lo = 0.0;
    double hi = 0.0;
    int layer = 0; ///< index of the layer this cell lies in
    int span = 0;  ///< index into KnotVector::elementSpans()
    QuadratureRule rule; ///< Gauss rule on [lo, hi]
};

/// Subdivides [0,1] into cells given the spans of a thickness-direction knot
/// vector and the layer interfaces 0 = z_0 < z_1 < ... < z_m = 1.  Every cell
/// is the intersection of one span with one layer; zero-measure intersections
/// are dropped.  Each cell carries an n_points Gauss rule, which integrates
/// the piecewise-smooth thickness integrands exactly because material and
/// geometry are constant per layer and splines are polynomial per span.
std::vector<ThicknessCell> layerwiseThicknessRule(const KnotVector& kv,
                                                  const std::vector<double>& interfaces,
                                                  int n_points);

} // namespace lamfast
