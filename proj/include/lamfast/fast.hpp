#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "lamfast/assembly.hpp"

namespace lamfast {

/// Banded storage of 3x3 blocks over in-plane basis-function pairs.  A block
/// (i_s, j_s) exists iff the two functions are active on a common in-plane
/// element, which keeps |iu - ju| <= p_u and |iv - jv| <= p_v.
class InPlaneOperator {
public:
    InPlaneOperator(int n_u, int n_v, int degree_u, int degree_v);

    int numInplane() const { return n_u_ * n_v_; }
    int bandU() const { return band_u_; }
    int bandV() const { return band_v_; }

    bool inBand(int is, int js) const;
    bool occupied(int is, int js) const;
    void markOccupied(int is, int js) { flags_[slot(is, js)] = 1; }

    Eigen::Matrix3d& block(int is, int js) { return blocks_[slot(is, js)]; }
    const Eigen::Matrix3d& block(int is, int js) const { return blocks_[slot(is, js)]; }

    /// Column indices j_s whose band slot relative to i_s exists, ascending.
    std::vector<int> bandColumns(int is) const;

private:
    std::size_t slot(int is, int js) const;

    int n_u_, n_v_, degree_u_, degree_v_;
    int band_u_, band_v_;
    std::vector<Eigen::Matrix3d> blocks_;
    std::vector<char> flags_;
};

/// The four in-plane operator families for one 6x6 material matrix, indexed
/// in the order (11, 12, 21, 22): 11 couples two in-plane strain parts, 22
/// couples two thickness parts, 12/21 are the mixed terms.
struct InPlaneOperatorSet {
    std::array<InPlaneOperator, 4> op;
};

/// One-dimensional thickness integrals per layer.  Family order matches the
/// in-plane operator order it pairs with in the stiffness combination:
///   [0] value-value      (pairs with the 11 operator)
///   [1] value-derivative (pairs with 12)
///   [2] derivative-value (pairs with 21)
///   [3] derivative-derivative (pairs with 22)
struct ThicknessOperators {
    std::vector<std::array<Eigen::MatrixXd, 4>> per_layer;
    /// (i_t, j_t) share a nonempty knot span.
    Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic> occupied;
};

/// Integrates the four split strain-displacement products against a 6x6
/// material matrix over every in-plane element: the expensive, per-material
/// part of fast assembly.  The matrix may be any symmetric 6x6 (angle
/// decomposition feeds non-definite combinations).
InPlaneOperatorSet computeInplaneOperators(const TensorProductSpace& space,
                                           const ExtrudedGeometry& geom,
                                           const VoigtMatrix& material,
                                           const AssemblyOptions& options = {},
                                           AssemblyStats* stats = nullptr);

/// Gauss integration of {T T, T T', T' T, T' T'} over every (span ∩ layer)
/// cell; exact, since the integrands are polynomial per cell.
ThicknessOperators computeThicknessOperators(const KnotVector& thickness,
                                             const std::vector<double>& interfaces,
                                             int pts_per_cell);

/// One summand of the stiffness combination: an in-plane operator set and
/// the (layer-reduced) thickness matrices it multiplies.
struct OperatorTerm {
    InPlaneOperatorSet inplane;
    std::array<Eigen::MatrixXd, 4> thickness;
};

/// K[i, j] = sum over terms and families of P[i_s, j_s] * q(i_t, j_t), over
/// all overlapping index pairs.  Shared by every fast backend.
StiffnessMatrix combineOperators(const TensorProductSpace& space,
                                 const std::vector<OperatorTerm>& terms,
                                 const Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic>&
                                     thickness_occupied,
                                 const AssemblyOptions& options = {});

/// Fast assembler: in-plane operators once per distinct material
/// configuration, thickness integrals per layer, then the separated
/// combination.  Produces the same matrix as assembleStandard.
StiffnessMatrix assembleFast(const ProblemSetup& setup, const AssemblyOptions& options = {},
                             AssemblyStats* stats = nullptr);

} // namespace lamfast
