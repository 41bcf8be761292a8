#include "lamfast/assembly.hpp"

#include <algorithm>
#include <stdexcept>

#include "assembly_internal.hpp"
#include "lamfast/parallel.hpp"
#include "lamfast/quadrature.hpp"

namespace lamfast {

namespace detail {

InplaneElement buildInplaneElement(const TensorProductSpace& space, const ExtrudedGeometry& geom,
                                   const Span& span_u, const Span& span_v,
                                   const QuadratureRule& ref_u, const QuadratureRule& ref_v,
                                   std::int64_t* frame_evals) {
    const int pu = space.inplaneU().degree();
    const int pv = space.inplaneV().degree();
    const int nloc = (pu + 1) * (pv + 1);

    InplaneElement elem;
    elem.first_u = span_u.first_active;
    elem.first_v = span_v.first_active;
    elem.funcs.reserve(static_cast<std::size_t>(nloc));
    for (int jv = 0; jv <= pv; ++jv)
        for (int ju = 0; ju <= pu; ++ju)
            elem.funcs.push_back(space.flattenInplane(elem.first_u + ju, elem.first_v + jv));

    const double mid_u = 0.5 * (span_u.begin + span_u.end);
    const double half_u = 0.5 * (span_u.end - span_u.begin);
    const double mid_v = 0.5 * (span_v.begin + span_v.end);
    const double half_v = 0.5 * (span_v.end - span_v.begin);

    elem.points.reserve(static_cast<std::size_t>(ref_u.size() * ref_v.size()));
    for (int qv = 0; qv < ref_v.size(); ++qv) {
        const double v = mid_v + half_v * ref_v.points[static_cast<std::size_t>(qv)];
        const BasisEval1D bv = space.inplaneV().evaluate(v);
        for (int qu = 0; qu < ref_u.size(); ++qu) {
            const double u = mid_u + half_u * ref_u.points[static_cast<std::size_t>(qu)];
            const BasisEval1D bu = space.inplaneU().evaluate(u);

            InplanePoint pt;
            pt.weight = ref_u.weights[static_cast<std::size_t>(qu)] * half_u *
                        ref_v.weights[static_cast<std::size_t>(qv)] * half_v;
            pt.frame = geom.frameAt(u, v);
            if (frame_evals)
                ++*frame_evals;
            pt.value.resize(static_cast<std::size_t>(nloc));
            pt.du.resize(static_cast<std::size_t>(nloc));
            pt.dv.resize(static_cast<std::size_t>(nloc));
            for (int jv = 0; jv <= pv; ++jv) {
                for (int ju = 0; ju <= pu; ++ju) {
                    const std::size_t a = static_cast<std::size_t>(jv * (pu + 1) + ju);
                    pt.value[a] = bu.values[static_cast<std::size_t>(ju)] *
                                  bv.values[static_cast<std::size_t>(jv)];
                    pt.du[a] = bu.derivs[static_cast<std::size_t>(ju)] *
                               bv.values[static_cast<std::size_t>(jv)];
                    pt.dv[a] = bu.values[static_cast<std::size_t>(ju)] *
                               bv.derivs[static_cast<std::size_t>(jv)];
                }
            }
            elem.points.push_back(std::move(pt));
        }
    }
    return elem;
}

std::vector<ThicknessSpanData> buildThicknessData(const KnotVector& kt,
                                                  const std::vector<double>& interfaces,
                                                  int pts_per_cell,
                                                  const std::vector<int>& layer_mask) {
    const std::vector<Span> spans = kt.elementSpans();
    const std::vector<ThicknessCell> cells =
        layerwiseThicknessRule(kt, interfaces, pts_per_cell);

    std::vector<ThicknessSpanData> data(spans.size());
    for (std::size_t s = 0; s < spans.size(); ++s)
        data[s].first_active = spans[s].first_active;

    for (const ThicknessCell& cell : cells) {
        if (!layer_mask.empty() &&
            std::find(layer_mask.begin(), layer_mask.end(), cell.layer) == layer_mask.end())
            continue;
        ThicknessCellData cd;
        cd.layer = cell.layer;
        const int pt = kt.degree();
        cd.points.reserve(static_cast<std::size_t>(cell.rule.size()));
        for (int q = 0; q < cell.rule.size(); ++q) {
            const BasisEval1D bt = kt.evaluate(cell.rule.points[static_cast<std::size_t>(q)]);
            ThicknessPoint tp;
            tp.weight = cell.rule.weights[static_cast<std::size_t>(q)];
            tp.value.resize(static_cast<std::size_t>(pt) + 1);
            tp.deriv.resize(static_cast<std::size_t>(pt) + 1);
            for (int j = 0; j <= pt; ++j) {
                tp.value[static_cast<std::size_t>(j)] = bt.values[static_cast<std::size_t>(j)];
                tp.deriv[static_cast<std::size_t>(j)] = bt.derivs[static_cast<std::size_t>(j)];
            }
            cd.points.push_back(std::move(tp));
        }
        data[static_cast<std::size_t>(cell.span)].cells.push_back(std::move(cd));
    }
    return data;
}

int inplanePointCount(const AssemblyOptions& options, const KnotVector& kv) {
    return options.inplane_points > 0 ? options.inplane_points : kv.degree() + 1;
}

int thicknessPointCount(const AssemblyOptions& options, const KnotVector& kv) {
    return options.thickness_points > 0 ? options.thickness_points : kv.degree() + 1;
}

} // namespace detail

namespace {

using detail::InplaneElement;
using detail::InplanePoint;
using detail::ThicknessSpanData;

/// 6x3 strain-displacement block for a physical gradient g, written into
/// three columns of W at column 3a.  Rows follow the Voigt strain order
/// (11, 22, 33, 12, 13, 23) with engineering shear.
void writeStrainColumns(Eigen::Matrix<double, 6, Eigen::Dynamic>& w, int a,
                        const Eigen::Vector3d& g) {
    w.col(3 * a) << g[0], 0, 0, g[1], g[2], 0;
    w.col(3 * a + 1) << 0, g[1], 0, g[0], 0, g[2];
    w.col(3 * a + 2) << 0, 0, g[2], 0, g[0], g[1];
}

} // namespace

StiffnessMatrix assembleStandard(const ProblemSetup& setup, const AssemblyOptions& options,
                                 AssemblyStats* stats) {
    const TensorProductSpace& space = setup.space;
    if (setup.layup.numLayers() < 1)
        throw std::invalid_argument("assembleStandard: empty layup");

    const std::vector<Span> spans_u = space.inplaneU().elementSpans();
    const std::vector<Span> spans_v = space.inplaneV().elementSpans();
    const QuadratureRule ref_u = gaussLegendre(detail::inplanePointCount(options, space.inplaneU()));
    const QuadratureRule ref_v = gaussLegendre(detail::inplanePointCount(options, space.inplaneV()));

    const std::vector<ThicknessSpanData> thickness = detail::buildThicknessData(
        space.thickness(), setup.layup.interfaces(),
        detail::thicknessPointCount(options, space.thickness()), options.active_layers);

    // Per-config stiffness matrices, indexed by config id.
    std::vector<VoigtMatrix> stiffness;
    for (const MaterialConfig& cfg : setup.layup.distinctConfigs())
        stiffness.push_back(cfg.stiffness);

    const int pu = space.inplaneU().degree();
    const int pv = space.inplaneV().degree();
    const int pt = space.thickness().degree();
    const int nloc_s = (pu + 1) * (pv + 1);
    const int nloc = nloc_s * (pt + 1);
    const int n_elements = static_cast<int>(spans_u.size() * spans_v.size());
    const int n_s = space.numInplane();

    std::vector<SparseMatrixBuilder> builders;
    const int n_chunks = std::max(1, std::min(options.threads, n_elements));
    for (int c = 0; c < n_chunks; ++c)
        builders.emplace_back(space.numFunctions());
    std::vector<AssemblyStats> chunk_stats(static_cast<std::size_t>(n_chunks));

    parallelChunks(n_elements, options.threads, [&](int chunk, int begin, int end) {
        SparseMatrixBuilder& builder = builders[static_cast<std::size_t>(chunk)];
        AssemblyStats& st = chunk_stats[static_cast<std::size_t>(chunk)];
        Eigen::Matrix<double, 6, Eigen::Dynamic> w(6, 3 * nloc);
        Eigen::Matrix<double, 6, Eigen::Dynamic> dw(6, 3 * nloc);
        Eigen::MatrixXd kloc(3 * nloc, 3 * nloc);
        w.setZero();

        for (int e = begin; e < end; ++e) {
            const int eu = e % static_cast<int>(spans_u.size());
            const int ev = e / static_cast<int>(spans_u.size());
            const InplaneElement elem =
                detail::buildInplaneElement(space, setup.geom, spans_u[static_cast<std::size_t>(eu)],
                                            spans_v[static_cast<std::size_t>(ev)], ref_u, ref_v,
                                            &st.frame_evaluations);

            for (const ThicknessSpanData& span : thickness) {
                if (span.cells.empty())
                    continue;
                kloc.setZero();
                for (const InplanePoint& pt2 : elem.points) {
                    const Eigen::Matrix3d& g_map = pt2.frame.df_inv_transpose;
                    for (const auto& cell : span.cells) {
                        const VoigtMatrix& d =
                            stiffness[static_cast<std::size_t>(
                                setup.layup.configIndexOf(cell.layer))];
                        for (const auto& pt3 : cell.points) {
                            ++st.qpoint_visits;
                            // Build the strain-displacement stack at this
                            // quadrature point (thickness index slowest, as
                            // in the global numbering).
                            for (int jt = 0; jt <= pt; ++jt) {
                                for (int js = 0; js < nloc_s; ++js) {
                                    const std::size_t jss = static_cast<std::size_t>(js);
                                    const std::size_t jts = static_cast<std::size_t>(jt);
                                    const Eigen::Vector3d grad_hat(
                                        pt2.du[jss] * pt3.value[jts],
                                        pt2.dv[jss] * pt3.value[jts],
                                        pt2.value[jss] * pt3.deriv[jts]);
                                    writeStrainColumns(w, jt * nloc_s + js, g_map * grad_hat);
                                }
                            }
                            const double scale = pt2.weight * pt3.weight * pt2.frame.det;
                            dw.noalias() = (scale * d) * w;
                            kloc.noalias() += w.transpose() * dw;
                        }
                    }
                }
                // Scatter the element-span block into the global matrix.
                for (int at = 0; at <= pt; ++at) {
                    for (int as = 0; as < nloc_s; ++as) {
                        const int gi = (span.first_active + at) * n_s +
                                       elem.funcs[static_cast<std::size_t>(as)];
                        for (int bt = 0; bt <= pt; ++bt) {
                            for (int bs = 0; bs < nloc_s; ++bs) {
                                const int gj = (span.first_active + bt) * n_s +
                                               elem.funcs[static_cast<std::size_t>(bs)];
                                builder.addBlock(gi, gj,
                                                 kloc.block<3, 3>(3 * (at * nloc_s + as),
                                                                  3 * (bt * nloc_s + bs)));
                            }
                        }
                    }
                }
            }
        }
    });

    for (int c = 1; c < n_chunks; ++c)
        builders[0].merge(std::move(builders[static_cast<std::size_t>(c)]));
    if (stats) {
        for (const AssemblyStats& st : chunk_stats) {
            stats->qpoint_visits += st.qpoint_visits;
            stats->frame_evaluations += st.frame_evaluations;
        }
    }
    return builders[0].finalize();
}

double referenceBilinear(const ProblemSetup& setup, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& u, const AssemblyOptions& options) {
    const TensorProductSpace& space = setup.space;
    if (v.size() != 3 * space.numFunctions() || u.size() != 3 * space.numFunctions())
        throw std::invalid_argument("referenceBilinear: coefficient length mismatch");

    const std::vector<Span> spans_u = space.inplaneU().elementSpans();
    const std::vector<Span> spans_v = space.inplaneV().elementSpans();
    const QuadratureRule ref_u = gaussLegendre(detail::inplanePointCount(options, space.inplaneU()));
    const QuadratureRule ref_v = gaussLegendre(detail::inplanePointCount(options, space.inplaneV()));
    const std::vector<ThicknessSpanData> thickness = detail::buildThicknessData(
        space.thickness(), setup.layup.interfaces(),
        detail::thicknessPointCount(options, space.thickness()), options.active_layers);

    std::vector<ElasticityTensor> tensors;
    for (const MaterialConfig& cfg : setup.layup.distinctConfigs())
        tensors.push_back(ElasticityTensor::fromVoigt(cfg.stiffness));

    const int pu = space.inplaneU().degree();
    const int pv = space.inplaneV().degree();
    const int pt = space.thickness().degree();
    const int nloc_s = (pu + 1) * (pv + 1);
    const int n_s = space.numInplane();

    double total = 0.0;
    for (std::size_t ev = 0; ev < spans_v.size(); ++ev) {
        for (std::size_t eu = 0; eu < spans_u.size(); ++eu) {
            const InplaneElement elem = detail::buildInplaneElement(
                space, setup.geom, spans_u[eu], spans_v[ev], ref_u, ref_v, nullptr);
            for (const ThicknessSpanData& span : thickness) {
                for (const InplanePoint& pt2 : elem.points) {
                    for (const auto& cell : span.cells) {
                        const ElasticityTensor& c =
                            tensors[static_cast<std::size_t>(
                                setup.layup.configIndexOf(cell.layer))];
                        for (const auto& pt3 : cell.points) {
                            // Displacement gradients of both fields at the point.
                            Eigen::Matrix3d grad_u = Eigen::Matrix3d::Zero();
                            Eigen::Matrix3d grad_v = Eigen::Matrix3d::Zero();
                            for (int jt = 0; jt <= pt; ++jt) {
                                for (int js = 0; js < nloc_s; ++js) {
                                    const std::size_t jss = static_cast<std::size_t>(js);
                                    const std::size_t jts = static_cast<std::size_t>(jt);
                                    const Eigen::Vector3d grad_hat(
                                        pt2.du[jss] * pt3.value[jts],
                                        pt2.dv[jss] * pt3.value[jts],
                                        pt2.value[jss] * pt3.deriv[jts]);
                                    const Eigen::Vector3d g =
                                        pt2.frame.df_inv_transpose * grad_hat;
                                    const int gi = (span.first_active + jt) * n_s +
                                                   elem.funcs[jss];
                                    grad_u += u.segment<3>(3 * gi) * g.transpose();
                                    grad_v += v.segment<3>(3 * gi) * g.transpose();
                                }
                            }
                            const Eigen::Matrix3d eps_u = 0.5 * (grad_u + grad_u.transpose());
                            const Eigen::Matrix3d eps_v = 0.5 * (grad_v + grad_v.transpose());
                            double form = 0.0;
                            for (int i = 0; i < 3; ++i)
                                for (int j = 0; j < 3; ++j)
                                    for (int k = 0; k < 3; ++k)
                                        for (int l = 0; l < 3; ++l)
                                            form += eps_v(i, j) * c(i, j, k, l) * eps_u(k, l);
                            total += form * pt2.weight * pt3.weight * pt2.frame.det;
                        }
                    }
                }
            }
        }
    }
    return total;
}

} // namespace lamfast
