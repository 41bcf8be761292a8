#pragma once

#include <array>

#include <Eigen/Dense>

#include "lamfast/assembly.hpp"
#include "lamfast/fast.hpp"
#include "lamfast/geometry.hpp"
#include "lamfast/materials.hpp"

namespace lamfast {

/// The nine scalar coefficients of the structural-tensor representation of
/// an orthotropic elasticity tensor: two Lame-type constants plus seven
/// anisotropy corrections attached to the in-plane direction pair.
struct BracketParameters {
    double lambda = 0.0;
    double mu = 0.0;
    std::array<double, 7> alpha = {0, 0, 0, 0, 0, 0, 0};
};

/// Fits (lambda, mu, alpha_1..7) so that the structural-tensor expansion
/// reproduces the dense orthotropic tensor of the given constants in
/// material axes.  The map from coefficients to the nine distinct tensor
/// entries is linear; it is inverted numerically.
BracketParameters bracketParameters(const OrthotropicConstants& constants);

/// The nine 3x3 matrices C{e_i, e_j} defined by
///     a . (C{b, d} c) = (a x b) : C : (c x d),
/// i.e. the second and fourth slots of the elasticity tensor contracted with
/// Cartesian directions.  Assembly can be written entirely in terms of these
/// matrices, without Voigt machinery.
class ContractionTable {
public:
    /// Isotropic closed form: lambda e_i x e_j + mu ((e_i . e_j) I + e_j x e_i).
    static Eigen::Matrix3d isotropicEntry(double lambda, double mu, int i, int j);

    /// Orthotropic table for in-plane material directions rotated by angle
    /// about the extrusion axis.
    ContractionTable(const BracketParameters& params, double angle);

    const Eigen::Matrix3d& entry(int i, int j) const {
        return entries_[static_cast<std::size_t>(3 * i + j)];
    }

private:
    std::array<Eigen::Matrix3d, 9> entries_;
};

/// Pulled-back contraction grid: C~_{ab} = sum_ij C{e_i, e_j} g^a_i g^b_j,
/// with g^a the contravariant basis vectors of the frame.  Index (a, b) is
/// stored at 3a + b.
std::array<Eigen::Matrix3d, 9> pullbackContractionTable(const ContractionTable& table,
                                                        const GeometryFrame& frame);

/// In-plane operators computed from bracket contractions instead of
/// strain-displacement and material matrices; block-for-block equal to
/// computeInplaneOperators on the same material.
InPlaneOperatorSet computeInplaneOperatorsBracket(const TensorProductSpace& space,
                                                  const ExtrudedGeometry& geom,
                                                  const ContractionTable& table,
                                                  const AssemblyOptions& options = {},
                                                  AssemblyStats* stats = nullptr);

/// Fast assembler variant that never forms a 6x6 material matrix or a
/// strain-displacement operator; produces the same matrix as assembleFast
/// and assembleStandard.
StiffnessMatrix assembleVoigtFree(const ProblemSetup& setup, const AssemblyOptions& options = {},
                                  AssemblyStats* stats = nullptr);

} // namespace lamfast
