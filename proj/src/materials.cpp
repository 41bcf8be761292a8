#include "lamfast/materials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lamfast {

namespace {

// Voigt index of the tensor pair (i, j) under the (11,22,33,12,13,23) order.
constexpr int kVoigtIndex[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
// Inverse map: Voigt slot -> representative (i, j).
constexpr int kVoigtPair[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};

} // namespace

OrthotropicConstants OrthotropicConstants::isotropic(double e, double nu) {
    OrthotropicConstants c;
    c.E1 = c.E2 = c.E3 = e;
    c.G12 = c.G13 = c.G23 = e / (2.0 * (1.0 + nu));
    c.nu12 = c.nu13 = c.nu23 = nu;
    return c;
}

ElasticityTensor ElasticityTensor::fromVoigt(const VoigtMatrix& d) {
    ElasticityTensor t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t(i, j, k, l) = d(kVoigtIndex[i][j], kVoigtIndex[k][l]);
    return t;
}

VoigtMatrix ElasticityTensor::toVoigt() const {
    VoigtMatrix d;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            d(a, b) = (*this)(kVoigtPair[a][0], kVoigtPair[a][1], kVoigtPair[b][0],
                              kVoigtPair[b][1]);
    return d;
}

ElasticityTensor ElasticityTensor::rotated(const Eigen::Matrix3d& r) const {
    ElasticityTensor out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double sum = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            for (int c = 0; c < 3; ++c)
                                for (int e = 0; e < 3; ++e)
                                    sum += r(i, a) * r(j, b) * r(k, c) * r(l, e) *
                                           (*this)(a, b, c, e);
                    out(i, j, k, l) = sum;
                }
    return out;
}

double ElasticityTensor::quadraticForm(const Eigen::Matrix3d& eps) const {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    sum += eps(i, j) * (*this)(i, j, k, l) * eps(k, l);
    return sum;
}

VoigtMatrix voigtFromConstants(const OrthotropicConstants& c) {
    if (c.E1 <= 0 || c.E2 <= 0 || c.E3 <= 0 || c.G12 <= 0 || c.G13 <= 0 || c.G23 <= 0)
        throw std::invalid_argument("voigtFromConstants: moduli must be positive");

    VoigtMatrix s = VoigtMatrix::Zero();
    s(0, 0) = 1.0 / c.E1;
    s(1, 1) = 1.0 / c.E2;
    s(2, 2) = 1.0 / c.E3;
    s(0, 1) = s(1, 0) = -c.nu12 / c.E1; // reciprocity: nu21 / E2 = nu12 / E1
    s(0, 2) = s(2, 0) = -c.nu13 / c.E1;
    s(1, 2) = s(2, 1) = -c.nu23 / c.E2;
    s(3, 3) = 1.0 / c.G12;
    s(4, 4) = 1.0 / c.G13;
    s(5, 5) = 1.0 / c.G23;

    VoigtMatrix d = s.inverse();
    d = 0.5 * (d + d.transpose()).eval(); // remove inversion round-off skew

    Eigen::LLT<VoigtMatrix> llt(d);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("voigtFromConstants: constants give a non-SPD stiffness");
    return d;
}

OrthotropicConstants constantsFromVoigt(const VoigtMatrix& d) {
    const VoigtMatrix s = d.inverse();
    OrthotropicConstants c;
    c.E1 = 1.0 / s(0, 0);
    c.E2 = 1.0 / s(1, 1);
    c.E3 = 1.0 / s(2, 2);
    c.nu12 = -s(0, 1) * c.E1;
    c.nu13 = -s(0, 2) * c.E1;
    c.nu23 = -s(1, 2) * c.E2;
    c.G12 = 1.0 / s(3, 3);
    c.G13 = 1.0 / s(4, 4);
    c.G23 = 1.0 / s(5, 5);
    return c;
}

VoigtMatrix rotateInplane(const VoigtMatrix& d, double theta) {
    Eigen::Matrix3d r;
    const double cs = std::cos(theta), sn = std::sin(theta);
    r << cs, -sn, 0.0, sn, cs, 0.0, 0.0, 0.0, 1.0;
    return ElasticityTensor::fromVoigt(d).rotated(r).toVoigt();
}

std::array<VoigtMatrix, 5> angleDecomposition(const OrthotropicConstants& c) {
    const VoigtMatrix d = voigtFromConstants(c);

    // Sampling angles chosen so the 5x5 collocation matrix of the basis
    // {1, cos^4, cos^3 sin, cos^2, cos sin} is well conditioned (~1e2).
    const std::array<double, 5> angles = {0.12, 0.53, 0.97, 1.31, 1.49};
    Eigen::Matrix<double, 5, 5> m;
    Eigen::Matrix<double, 5, 36> rhs;
    for (int k = 0; k < 5; ++k) {
        const double cs = std::cos(angles[k]), sn = std::sin(angles[k]);
        m(k, 0) = 1.0;
        m(k, 1) = cs * cs * cs * cs;
        m(k, 2) = cs * cs * cs * sn;
        m(k, 3) = cs * cs;
        m(k, 4) = cs * sn;
        const VoigtMatrix rot = rotateInplane(d, angles[k]);
        for (int e = 0; e < 36; ++e)
            rhs(k, e) = rot(e / 6, e % 6);
    }

    const Eigen::PartialPivLU<Eigen::Matrix<double, 5, 5>> lu(m);
    if (std::abs(lu.determinant()) < 1e-12)
        throw std::runtime_error("angleDecomposition: singular sampling system");
    const Eigen::Matrix<double, 5, 36> coeffs = lu.solve(rhs);

    std::array<VoigtMatrix, 5> out;
    for (int j = 0; j < 5; ++j)
        for (int e = 0; e < 36; ++e)
            out[static_cast<std::size_t>(j)](e / 6, e % 6) = coeffs(j, e);
    return out;
}

Layup::Layup(std::vector<double> interfaces, const std::vector<LayerSpec>& layers)
    : interfaces_(std::move(interfaces)) {
    if (layers.empty())
        throw std::invalid_argument("Layup: need at least one layer");
    if (interfaces_.size() != layers.size() + 1)
        throw std::invalid_argument("Layup: need one more interface than layers");
    if (interfaces_.front() != 0.0 || interfaces_.back() != 1.0)
        throw std::invalid_argument("Layup: interfaces must run from 0 to 1");
    for (std::size_t i = 1; i < interfaces_.size(); ++i)
        if (!(interfaces_[i] > interfaces_[i - 1]))
            throw std::invalid_argument("Layup: interfaces must be strictly increasing");

    layer_config_.reserve(layers.size());
    for (const LayerSpec& spec : layers) {
        int id = -1;
        for (const MaterialConfig& cfg : configs_) {
            if (cfg.matches(spec.constants, spec.angle)) {
                id = cfg.id;
                break;
            }
        }
        if (id < 0) {
            MaterialConfig cfg;
            cfg.constants = spec.constants;
            cfg.angle = spec.angle;
            cfg.id = static_cast<int>(configs_.size());
            cfg.stiffness = rotateInplane(voigtFromConstants(spec.constants), spec.angle);
            id = cfg.id;
            configs_.push_back(std::move(cfg));
        }
        layer_config_.push_back(id);
    }
}

Layup Layup::equalLayers(const std::vector<LayerSpec>& layers) {
    const int m = static_cast<int>(layers.size());
    std::vector<double> interfaces(static_cast<std::size_t>(m) + 1);
    for (int l = 0; l <= m; ++l)
        interfaces[static_cast<std::size_t>(l)] = static_cast<double>(l) / m;
    return Layup(std::move(interfaces), layers);
}

int Layup::layerAt(double xi3) const {
    if (xi3 < 0.0 || xi3 > 1.0)
        throw std::domain_error("Layup: thickness coordinate outside [0,1]");
    // First interface strictly greater than xi3 bounds the layer from above.
    auto it = std::upper_bound(interfaces_.begin(), interfaces_.end(), xi3);
    if (it == interfaces_.end())
        return numLayers() - 1; // xi3 == 1
    return static_cast<int>(it - interfaces_.begin()) - 1;
}

} // namespace lamfast
