#pragma once

#include <array>
#include <vector>

namespace lamfast {

/// Values and first derivatives of the p+1 basis functions that are
/// nonzero at a parametric point.
struct BasisEval1D {
    double point = 0.0;
    int first_active = 0;            ///< index of the first nonzero function
    std::vector<double> values;      ///< p+1 entries, sum to 1
    std::vector<double> derivs;      ///< p+1 entries, sum to 0
};

/// One nonempty knot span. Functions first_active .. first_active+p are
/// the ones supported on it.
struct Span {
    double begin = 0.0;
    double end = 0.0;
    int first_active = 0;
};

/// Open (clamped) B-spline knot vector on [0,1].
///
/// The first and last knots are repeated degree+1 times; interior knots may
/// carry arbitrary multiplicity up to the degree.
class KnotVector {
public:
    KnotVector(int degree, std::vector<double> knots);

    /// Clamped uniform knot vector with n_elements equal spans and maximal
    /// (C^{p-1}) interior continuity.
    static KnotVector uniform(int degree, int n_elements);

    int degree() const { return degree_; }
    int numFunctions() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    const std::vector<double>& knots() const { return knots_; }

    /// Index k of the span [knots[k], knots[k+1]) containing x. Spans are
    /// left-closed; x = 1 maps to the last nonempty span.
    int findSpan(double x) const;

    /// Values and first derivatives of the active functions at x in [0,1].
    BasisEval1D evaluate(double x) const;

    /// Nonempty spans in increasing order, covering [0,1].
    std::vector<Span> elementSpans() const;

    bool operator==(const KnotVector&) const = default;

private:
    int degree_;
    std::vector<double> knots_;
};

/// Trivariate tensor-product space: two in-plane factors and one thickness
/// factor. Global function index i = i_t * n_s + i_s with
/// i_s = i_v * n_u + i_u (all 0-based, u fastest).
class TensorProductSpace {
public:
    TensorProductSpace(KnotVector inplane_u, KnotVector inplane_v, KnotVector thickness);

    const KnotVector& inplaneU() const { return u_; }
    const KnotVector& inplaneV() const { return v_; }
    const KnotVector& thickness() const { return t_; }

    int numU() const { return u_.numFunctions(); }
    int numV() const { return v_.numFunctions(); }
    int numThickness() const { return t_.numFunctions(); }
    int numInplane() const { return numU() * numV(); }
    int numFunctions() const { return numInplane() * numThickness(); }

    int flattenInplane(int iu, int iv) const { return iv * numU() + iu; }
    int flatten(int iu, int iv, int it) const { return it * numInplane() + flattenInplane(iu, iv); }

    /// Inverse of flatten: returns {iu, iv, it}.
    std::array<int, 3> split(int i) const;

private:
    KnotVector u_, v_, t_;
};

} // namespace lamfast
