#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace lamfast {

/// Symmetric 6x6 elasticity matrix in Voigt notation with component order
/// (11, 22, 33, 12, 13, 23).  Strain vectors pair with ENGINEERING shear
/// (gamma = 2*eps off-diagonal), so entries equal tensor components directly
/// (e.g. the (4,4) entry is C_1212) and eps:C:eps == eps_v' * D * eps_v.
using VoigtMatrix = Eigen::Matrix<double, 6, 6>;

/// The nine engineering constants of an orthotropic material.
struct OrthotropicConstants {
    double E1 = 1.0, E2 = 1.0, E3 = 1.0;
    double G12 = 0.5, G13 = 0.5, G23 = 0.5;
    double nu12 = 0.0, nu13 = 0.0, nu23 = 0.0;

    static OrthotropicConstants isotropic(double e, double nu);

    bool operator==(const OrthotropicConstants&) const = default;
};

/// Dense fourth-order elasticity tensor with minor and major symmetries.
class ElasticityTensor {
public:
    ElasticityTensor() { entries_.fill(0.0); }

    double& operator()(int i, int j, int k, int l) {
        return entries_[static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + l)];
    }
    double operator()(int i, int j, int k, int l) const {
        return entries_[static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + l)];
    }

    static ElasticityTensor fromVoigt(const VoigtMatrix& d);
    VoigtMatrix toVoigt() const;

    /// C'_ijkl = R_ia R_jb R_kc R_ld C_abcd.
    ElasticityTensor rotated(const Eigen::Matrix3d& r) const;

    /// eps : C : eps for a symmetric strain.
    double quadraticForm(const Eigen::Matrix3d& eps) const;

private:
    std::array<double, 81> entries_;
};

/// Stiffness matrix in material axes from the nine constants: assemble the
/// orthotropic compliance (reciprocity nu21/E2 = nu12/E1 etc.), invert.
/// Throws std::invalid_argument when the result is not positive definite.
VoigtMatrix voigtFromConstants(const OrthotropicConstants& c);

/// Engineering constants recovered from a stiffness matrix in material axes.
OrthotropicConstants constantsFromVoigt(const VoigtMatrix& d);

/// Stiffness transformed under an in-plane rotation by theta about the
/// extrusion (third) axis.
VoigtMatrix rotateInplane(const VoigtMatrix& d, double theta);

/// Decomposition D(theta) = A[0] + cos^4(t) A[1] + cos^3(t)sin(t) A[2]
///                        + cos^2(t) A[3] + cos(t)sin(t) A[4],
/// valid for every theta.  Obtained by sampling rotateInplane at five angles
/// and solving the resulting linear system entrywise.
std::array<VoigtMatrix, 5> angleDecomposition(const OrthotropicConstants& c);

/// One distinct (constants, angle) combination within a layup.  The rotated
/// stiffness is precomputed; id is the cache key used by the fast assembler.
struct MaterialConfig {
    OrthotropicConstants constants;
    double angle = 0.0;
    int id = 0;
    VoigtMatrix stiffness = VoigtMatrix::Zero();

    bool matches(const OrthotropicConstants& c, double theta) const {
        return constants == c && angle == theta;
    }
};

/// Material data for one layer before deduplication.
struct LayerSpec {
    OrthotropicConstants constants;
    double angle = 0.0;
};

/// A laminate: interfaces 0 = t0 < t1 < ... < tm = 1 in parametric thickness
/// and one material configuration per layer.  Identical (constants, angle)
/// pairs share a single MaterialConfig, so distinctConfigs().size() is the
/// number of distinct configurations, which may be much smaller than the
/// number of layers.
class Layup {
public:
    Layup(std::vector<double> interfaces, const std::vector<LayerSpec>& layers);

    /// Equal-thickness convenience constructor.
    static Layup equalLayers(const std::vector<LayerSpec>& layers);

    int numLayers() const { return static_cast<int>(layer_config_.size()); }
    const std::vector<double>& interfaces() const { return interfaces_; }

    /// Index of the layer whose half-open interval [t_{l}, t_{l+1}) contains
    /// xi3; xi3 = 1 belongs to the last layer.
    int layerAt(double xi3) const;

    int configIndexOf(int layer) const { return layer_config_[static_cast<std::size_t>(layer)]; }
    const MaterialConfig& configOf(int layer) const {
        return configs_[static_cast<std::size_t>(layer_config_[static_cast<std::size_t>(layer)])];
    }
    const MaterialConfig& materialAt(double xi3) const { return configOf(layerAt(xi3)); }

    const std::vector<MaterialConfig>& distinctConfigs() const { return configs_; }
    int numDistinctConfigs() const { return static_cast<int>(configs_.size()); }

private:
    std::vector<double> interfaces_;
    std::vector<int> layer_config_;
    std::vector<MaterialConfig> configs_;
};

} // namespace lamfast
