#include "lamfast/voigt_free.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "assembly_internal.hpp"
#include "lamfast/parallel.hpp"
#include "lamfast/quadrature.hpp"

namespace lamfast {

namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;

/// The nine basis tensors of the structural representation, as functions
/// returning C_ijkl for unit in-plane directions a1 = e1, a2 = e2:
///   0: I x I                          (coefficient lambda)
///   1: delta_ik delta_jl + delta_il delta_jk   (coefficient mu)
///   2: M1 x M1                        (alpha_1)
///   3: M2 x M2                        (alpha_2)
///   4: sym products of M1 and delta   (alpha_3)
///   5: sym products of M2 and delta   (alpha_4)
///   6: I x M1 + M1 x I               (alpha_5)
///   7: I x M2 + M2 x I               (alpha_6)
///   8: M1 x M2 + M2 x M1             (alpha_7)
double basisTensorEntry(int which, const Matrix3d& m1, const Matrix3d& m2, int i, int j, int k,
                        int l) {
    const Matrix3d id = Matrix3d::Identity();
    auto dyad = [&](const Matrix3d& a, const Matrix3d& b) { return a(i, j) * b(k, l); };
    auto symprod = [&](const Matrix3d& m) {
        return m(i, k) * id(j, l) + m(i, l) * id(j, k) + id(i, k) * m(j, l) +
               id(i, l) * m(j, k);
    };
    switch (which) {
    case 0: return dyad(id, id);
    case 1: return id(i, k) * id(j, l) + id(i, l) * id(j, k);
    case 2: return dyad(m1, m1);
    case 3: return dyad(m2, m2);
    case 4: return symprod(m1);
    case 5: return symprod(m2);
    case 6: return dyad(id, m1) + dyad(m1, id);
    case 7: return dyad(id, m2) + dyad(m2, id);
    default: return dyad(m1, m2) + dyad(m2, m1);
    }
}

} // namespace

BracketParameters bracketParameters(const OrthotropicConstants& constants) {
    const VoigtMatrix d = voigtFromConstants(constants);
    const ElasticityTensor target = ElasticityTensor::fromVoigt(d);

    // The nine distinct entries an orthotropic tensor has in material axes.
    constexpr int kEntries[9][4] = {{0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2},
                                    {0, 0, 1, 1}, {0, 0, 2, 2}, {1, 1, 2, 2},
                                    {0, 1, 0, 1}, {0, 2, 0, 2}, {1, 2, 1, 2}};

    const Matrix3d m1 = Vector3d(1, 0, 0).asDiagonal();
    const Matrix3d m2 = Vector3d(0, 1, 0).asDiagonal();

    Eigen::Matrix<double, 9, 9> system;
    Eigen::Matrix<double, 9, 1> rhs;
    for (int r = 0; r < 9; ++r) {
        const int i = kEntries[r][0], j = kEntries[r][1], k = kEntries[r][2], l = kEntries[r][3];
        for (int c = 0; c < 9; ++c)
            system(r, c) = basisTensorEntry(c, m1, m2, i, j, k, l);
        rhs[r] = target(i, j, k, l);
    }

    const Eigen::Matrix<double, 9, 1> coeffs = system.fullPivLu().solve(rhs);
    BracketParameters params;
    params.lambda = coeffs[0];
    params.mu = coeffs[1];
    for (int k = 0; k < 7; ++k)
        params.alpha[static_cast<std::size_t>(k)] = coeffs[k + 2];
    return params;
}

Eigen::Matrix3d ContractionTable::isotropicEntry(double lambda, double mu, int i, int j) {
    const Matrix3d id = Matrix3d::Identity();
    const Vector3d ei = id.col(i);
    const Vector3d ej = id.col(j);
    return lambda * ei * ej.transpose() + mu * ((i == j ? 1.0 : 0.0) * id + ej * ei.transpose());
}

ContractionTable::ContractionTable(const BracketParameters& params, double angle) {
    const Matrix3d id = Matrix3d::Identity();
    const Vector3d a1(std::cos(angle), std::sin(angle), 0.0);
    const Vector3d a2(-std::sin(angle), std::cos(angle), 0.0);
    const Matrix3d m1 = a1 * a1.transpose();
    const Matrix3d m2 = a2 * a2.transpose();

    for (int i = 0; i < 3; ++i) {
        const Vector3d ei = id.col(i);
        // abar_{b, i} = (a_b . e_i) a_b = M_b e_i.
        const Vector3d a1i = m1 * ei;
        const Vector3d a2i = m2 * ei;
        for (int j = 0; j < 3; ++j) {
            const Vector3d ej = id.col(j);
            const Vector3d a1j = m1 * ej;
            const Vector3d a2j = m2 * ej;
            const double dij = (i == j) ? 1.0 : 0.0;

            Matrix3d entry = isotropicEntry(params.lambda, params.mu, i, j);
            entry += params.alpha[0] * a1i * a1j.transpose();
            entry += params.alpha[1] * a2i * a2j.transpose();
            // Symmetrized structural products; the scalar in front of the
            // identity is (e_i . abar_{b,j}) and the mixed dyads carry the
            // remaining index placements.
            entry += params.alpha[2] * (ei.dot(a1j) * id + dij * m1 + ej * a1i.transpose() +
                                        a1j * ei.transpose());
            entry += params.alpha[3] * (ei.dot(a2j) * id + dij * m2 + ej * a2i.transpose() +
                                        a2j * ei.transpose());
            entry += params.alpha[4] * (ei * a1j.transpose() + a1i * ej.transpose());
            entry += params.alpha[5] * (ei * a2j.transpose() + a2i * ej.transpose());
            entry += params.alpha[6] * (a1i * a2j.transpose() + a2i * a1j.transpose());
            entries_[static_cast<std::size_t>(3 * i + j)] = entry;
        }
    }
}

std::array<Matrix3d, 9> pullbackContractionTable(const ContractionTable& table,
                                                 const GeometryFrame& frame) {
    std::array<Matrix3d, 9> out;
    for (int a = 0; a < 3; ++a) {
        const Vector3d ga = frame.contravariant(a);
        for (int b = 0; b < 3; ++b) {
            const Vector3d gb = frame.contravariant(b);
            Matrix3d sum = Matrix3d::Zero();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    sum += table.entry(i, j) * (ga[i] * gb[j]);
            out[static_cast<std::size_t>(3 * a + b)] = sum;
        }
    }
    return out;
}

InPlaneOperatorSet computeInplaneOperatorsBracket(const TensorProductSpace& space,
                                                  const ExtrudedGeometry& geom,
                                                  const ContractionTable& table,
                                                  const AssemblyOptions& options,
                                                  AssemblyStats* stats) {
    const int pu = space.inplaneU().degree();
    const int pv = space.inplaneV().degree();
    const int nu = space.inplaneU().numFunctions();
    const int nv = space.inplaneV().numFunctions();
    const int nloc_s = (pu + 1) * (pv + 1);

    const std::vector<Span> spans_u = space.inplaneU().elementSpans();
    const std::vector<Span> spans_v = space.inplaneV().elementSpans();
    const QuadratureRule ref_u = gaussLegendre(detail::inplanePointCount(options, space.inplaneU()));
    const QuadratureRule ref_v = gaussLegendre(detail::inplanePointCount(options, space.inplaneV()));
    const int n_elements = static_cast<int>(spans_u.size() * spans_v.size());

    InPlaneOperatorSet set{{InPlaneOperator(nu, nv, pu, pv), InPlaneOperator(nu, nv, pu, pv),
                            InPlaneOperator(nu, nv, pu, pv), InPlaneOperator(nu, nv, pu, pv)}};

    const int n_chunks = std::max(1, std::min(options.threads, n_elements));
    std::vector<InPlaneOperatorSet> partial;
    for (int c = 0; c < n_chunks - 1; ++c)
        partial.push_back(set);
    std::vector<AssemblyStats> chunk_stats(static_cast<std::size_t>(n_chunks));

    parallelChunks(n_elements, options.threads, [&](int chunk, int begin, int end) {
        InPlaneOperatorSet& target = chunk == 0 ? set : partial[static_cast<std::size_t>(chunk - 1)];
        AssemblyStats& st = chunk_stats[static_cast<std::size_t>(chunk)];

        // Element accumulators for the four operator families.
        std::array<Eigen::MatrixXd, 4> ploc;
        for (auto& p : ploc)
            p.resize(3 * nloc_s, 3 * nloc_s);

        for (int e = begin; e < end; ++e) {
            const int eu = e % static_cast<int>(spans_u.size());
            const int ev = e / static_cast<int>(spans_u.size());
            const detail::InplaneElement elem = detail::buildInplaneElement(
                space, geom, spans_u[static_cast<std::size_t>(eu)],
                spans_v[static_cast<std::size_t>(ev)], ref_u, ref_v, &st.frame_evaluations);

            for (auto& p : ploc)
                p.setZero();

            for (const detail::InplanePoint& pt2 : elem.points) {
                ++st.qpoint_visits;
                const std::array<Matrix3d, 9> c = pullbackContractionTable(table, pt2.frame);
                const double scale = pt2.weight * pt2.frame.det;
                for (int as = 0; as < nloc_s; ++as) {
                    const std::size_t ass = static_cast<std::size_t>(as);
                    const double dui = pt2.du[ass], dvi = pt2.dv[ass], si = pt2.value[ass];
                    for (int bs = 0; bs < nloc_s; ++bs) {
                        const std::size_t bss = static_cast<std::size_t>(bs);
                        const double duj = pt2.du[bss], dvj = pt2.dv[bss], sj = pt2.value[bss];
                        // (a, b) grid index 3a + b of the pulled-back table.
                        ploc[0].block<3, 3>(3 * as, 3 * bs) +=
                            scale * (c[0] * (dui * duj) + c[1] * (dui * dvj) +
                                     c[3] * (dvi * duj) + c[4] * (dvi * dvj));
                        ploc[1].block<3, 3>(3 * as, 3 * bs) +=
                            scale * ((c[2] * dui + c[5] * dvi) * sj);
                        ploc[2].block<3, 3>(3 * as, 3 * bs) +=
                            scale * (si * (c[6] * duj + c[7] * dvj));
                        ploc[3].block<3, 3>(3 * as, 3 * bs) += scale * (c[8] * (si * sj));
                    }
                }
            }

            for (int as = 0; as < nloc_s; ++as) {
                const int is = elem.funcs[static_cast<std::size_t>(as)];
                for (int bs = 0; bs < nloc_s; ++bs) {
                    const int js = elem.funcs[static_cast<std::size_t>(bs)];
                    for (int ab = 0; ab < 4; ++ab) {
                        InPlaneOperator& op = target.op[static_cast<std::size_t>(ab)];
                        op.block(is, js) +=
                            ploc[static_cast<std::size_t>(ab)].block<3, 3>(3 * as, 3 * bs);
                        op.markOccupied(is, js);
                    }
                }
            }
        }
    });

    for (std::size_t c = 0; c < partial.size(); ++c) {
        for (int ab = 0; ab < 4; ++ab) {
            InPlaneOperator& dst = set.op[static_cast<std::size_t>(ab)];
            const InPlaneOperator& src = partial[c].op[static_cast<std::size_t>(ab)];
            for (int is = 0; is < dst.numInplane(); ++is) {
                for (int js : dst.bandColumns(is)) {
                    if (!src.occupied(is, js))
                        continue;
                    dst.block(is, js) += src.block(is, js);
                    dst.markOccupied(is, js);
                }
            }
        }
    }

    if (stats) {
        for (const AssemblyStats& st : chunk_stats) {
            stats->qpoint_visits += st.qpoint_visits;
            stats->frame_evaluations += st.frame_evaluations;
        }
        ++stats->operator_builds;
    }
    return set;
}

StiffnessMatrix assembleVoigtFree(const ProblemSetup& setup, const AssemblyOptions& options,
                                  AssemblyStats* stats) {
    const TensorProductSpace& space = setup.space;
    const Layup& layup = setup.layup;
    if (layup.numLayers() < 1)
        throw std::invalid_argument("assembleVoigtFree: empty layup");

    const ThicknessOperators q = computeThicknessOperators(
        space.thickness(), layup.interfaces(),
        detail::thicknessPointCount(options, space.thickness()));
    const int n_t = space.numThickness();

    auto layerActive = [&](int l) {
        return options.active_layers.empty() ||
               std::find(options.active_layers.begin(), options.active_layers.end(), l) !=
                   options.active_layers.end();
    };

    // The coefficient fit depends only on the constants; share it across
    // configurations that differ only by angle.
    std::vector<OrthotropicConstants> fitted;
    std::vector<BracketParameters> fitted_params;
    auto paramsFor = [&](const OrthotropicConstants& constants) {
        for (std::size_t k = 0; k < fitted.size(); ++k)
            if (fitted[k] == constants)
                return fitted_params[k];
        fitted.push_back(constants);
        fitted_params.push_back(bracketParameters(constants));
        return fitted_params.back();
    };

    std::vector<OperatorTerm> terms;
    for (const MaterialConfig& cfg : layup.distinctConfigs()) {
        const ContractionTable table(paramsFor(cfg.constants), cfg.angle);
        OperatorTerm term{computeInplaneOperatorsBracket(space, setup.geom, table, options, stats),
                          {Eigen::MatrixXd::Zero(n_t, n_t), Eigen::MatrixXd::Zero(n_t, n_t),
                           Eigen::MatrixXd::Zero(n_t, n_t), Eigen::MatrixXd::Zero(n_t, n_t)}};
        for (int l = 0; l < layup.numLayers(); ++l) {
            if (layup.configIndexOf(l) != cfg.id || !layerActive(l))
                continue;
            for (int ab = 0; ab < 4; ++ab)
                term.thickness[static_cast<std::size_t>(ab)] +=
                    q.per_layer[static_cast<std::size_t>(l)][static_cast<std::size_t>(ab)];
        }
        terms.push_back(std::move(term));
    }

    return combineOperators(space, terms, q.occupied, options);
}

} // namespace lamfast
