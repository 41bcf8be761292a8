#include "lamfast/fast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "assembly_internal.hpp"
#include "lamfast/parallel.hpp"
#include "lamfast/quadrature.hpp"

namespace lamfast {

InPlaneOperator::InPlaneOperator(int n_u, int n_v, int degree_u, int degree_v)
    : n_u_(n_u), n_v_(n_v), degree_u_(degree_u), degree_v_(degree_v),
      band_u_(2 * degree_u + 1), band_v_(2 * degree_v + 1) {
    const std::size_t slots = static_cast<std::size_t>(n_u_) * static_cast<std::size_t>(n_v_) *
                              static_cast<std::size_t>(band_u_) *
                              static_cast<std::size_t>(band_v_);
    blocks_.assign(slots, Eigen::Matrix3d::Zero());
    flags_.assign(slots, 0);
}

std::size_t InPlaneOperator::slot(int is, int js) const {
    const int iu = is % n_u_, iv = is / n_u_;
    const int ju = js % n_u_, jv = js / n_u_;
    const int du = ju - iu + degree_u_;
    const int dv = jv - iv + degree_v_;
    return (static_cast<std::size_t>(is) * static_cast<std::size_t>(band_v_) +
            static_cast<std::size_t>(dv)) *
               static_cast<std::size_t>(band_u_) +
           static_cast<std::size_t>(du);
}

bool InPlaneOperator::inBand(int is, int js) const {
    const int iu = is % n_u_, iv = is / n_u_;
    const int ju = js % n_u_, jv = js / n_u_;
    return std::abs(iu - ju) <= degree_u_ && std::abs(iv - jv) <= degree_v_;
}

bool InPlaneOperator::occupied(int is, int js) const {
    return inBand(is, js) && flags_[slot(is, js)] != 0;
}

std::vector<int> InPlaneOperator::bandColumns(int is) const {
    const int iu = is % n_u_, iv = is / n_u_;
    std::vector<int> cols;
    cols.reserve(static_cast<std::size_t>(band_u_ * band_v_));
    for (int jv = std::max(0, iv - degree_v_); jv <= std::min(n_v_ - 1, iv + degree_v_); ++jv)
        for (int ju = std::max(0, iu - degree_u_); ju <= std::min(n_u_ - 1, iu + degree_u_); ++ju)
            cols.push_back(jv * n_u_ + ju);
    return cols;
}

InPlaneOperatorSet computeInplaneOperators(const TensorProductSpace& space,
                                           const ExtrudedGeometry& geom,
                                           const VoigtMatrix& material,
                                           const AssemblyOptions& options, AssemblyStats* stats) {
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

    // Per-element accumulators are disjoint only per quadrature loop; the
    // scatter into the shared band structure races across neighboring
    // elements, so parallel execution gives each worker private operators
    // and adds them at the end (block addition commutes exactly only when
    // each (element -> block) contribution is a single add; the merge below
    // adds chunk results in ascending order to keep runs reproducible).
    const int n_chunks = std::max(1, std::min(options.threads, n_elements));
    std::vector<InPlaneOperatorSet> partial;
    partial.reserve(static_cast<std::size_t>(n_chunks > 1 ? n_chunks : 0));
    for (int c = 0; c < n_chunks - 1; ++c)
        partial.push_back(set); // zero-initialized copies for extra workers
    std::vector<AssemblyStats> chunk_stats(static_cast<std::size_t>(n_chunks));

    parallelChunks(n_elements, options.threads, [&](int chunk, int begin, int end) {
        InPlaneOperatorSet& target = chunk == 0 ? set : partial[static_cast<std::size_t>(chunk - 1)];
        AssemblyStats& st = chunk_stats[static_cast<std::size_t>(chunk)];

        Eigen::Matrix<double, 6, Eigen::Dynamic> w(6, 6 * nloc_s);
        Eigen::Matrix<double, 6, Eigen::Dynamic> dw(6, 6 * nloc_s);
        Eigen::MatrixXd mloc(6 * nloc_s, 6 * nloc_s);
        w.setZero();

        for (int e = begin; e < end; ++e) {
            const int eu = e % static_cast<int>(spans_u.size());
            const int ev = e / static_cast<int>(spans_u.size());
            const detail::InplaneElement elem = detail::buildInplaneElement(
                space, geom, spans_u[static_cast<std::size_t>(eu)],
                spans_v[static_cast<std::size_t>(ev)], ref_u, ref_v, &st.frame_evaluations);

            mloc.setZero();
            for (const detail::InplanePoint& pt2 : elem.points) {
                ++st.qpoint_visits;
                const Eigen::Matrix3d& g_map = pt2.frame.df_inv_transpose;
                // First nloc_s column-triples: strain from the in-plane part
                // of the gradient; second nloc_s: from the thickness part.
                for (int js = 0; js < nloc_s; ++js) {
                    const std::size_t jss = static_cast<std::size_t>(js);
                    const Eigen::Vector3d g1 =
                        g_map * Eigen::Vector3d(pt2.du[jss], pt2.dv[jss], 0.0);
                    const Eigen::Vector3d g2 = pt2.value[jss] * g_map.col(2);
                    w.col(3 * js) << g1[0], 0, 0, g1[1], g1[2], 0;
                    w.col(3 * js + 1) << 0, g1[1], 0, g1[0], 0, g1[2];
                    w.col(3 * js + 2) << 0, 0, g1[2], 0, g1[0], g1[1];
                    const int o = 3 * (nloc_s + js);
                    w.col(o) << g2[0], 0, 0, g2[1], g2[2], 0;
                    w.col(o + 1) << 0, g2[1], 0, g2[0], 0, g2[2];
                    w.col(o + 2) << 0, 0, g2[2], 0, g2[0], g2[1];
                }
                const double scale = pt2.weight * pt2.frame.det;
                dw.noalias() = (scale * material) * w;
                mloc.noalias() += w.transpose() * dw;
            }

            // Scatter the four quadrants.
            for (int as = 0; as < nloc_s; ++as) {
                const int is = elem.funcs[static_cast<std::size_t>(as)];
                for (int bs = 0; bs < nloc_s; ++bs) {
                    const int js = elem.funcs[static_cast<std::size_t>(bs)];
                    const int a1 = 3 * as, a2 = 3 * (nloc_s + as);
                    const int b1 = 3 * bs, b2 = 3 * (nloc_s + bs);
                    for (int ab = 0; ab < 4; ++ab) {
                        InPlaneOperator& op = target.op[static_cast<std::size_t>(ab)];
                        const int ra = (ab < 2) ? a1 : a2;
                        const int cb = (ab % 2 == 0) ? b1 : b2;
                        op.block(is, js) += mloc.block<3, 3>(ra, cb);
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

ThicknessOperators computeThicknessOperators(const KnotVector& thickness,
                                             const std::vector<double>& interfaces,
                                             int pts_per_cell) {
    const int n_t = thickness.numFunctions();
    const int n_layers = static_cast<int>(interfaces.size()) - 1;

    ThicknessOperators out;
    out.per_layer.resize(static_cast<std::size_t>(n_layers));
    for (auto& family : out.per_layer)
        for (auto& q : family)
            q = Eigen::MatrixXd::Zero(n_t, n_t);
    out.occupied = Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_t, n_t);

    const std::vector<ThicknessCell> cells =
        layerwiseThicknessRule(thickness, interfaces, pts_per_cell);
    const int p = thickness.degree();
    for (const ThicknessCell& cell : cells) {
        auto& family = out.per_layer[static_cast<std::size_t>(cell.layer)];
        for (int q = 0; q < cell.rule.size(); ++q) {
            const double wq = cell.rule.weights[static_cast<std::size_t>(q)];
            const BasisEval1D bt = thickness.evaluate(cell.rule.points[static_cast<std::size_t>(q)]);
            for (int a = 0; a <= p; ++a) {
                const int it = bt.first_active + a;
                for (int b = 0; b <= p; ++b) {
                    const int jt = bt.first_active + b;
                    const double va = bt.values[static_cast<std::size_t>(a)];
                    const double da = bt.derivs[static_cast<std::size_t>(a)];
                    const double vb = bt.values[static_cast<std::size_t>(b)];
                    const double db = bt.derivs[static_cast<std::size_t>(b)];
                    family[0](it, jt) += wq * va * vb;
                    family[1](it, jt) += wq * va * db;
                    family[2](it, jt) += wq * da * vb;
                    family[3](it, jt) += wq * da * db;
                    out.occupied(it, jt) = 1;
                }
            }
        }
    }
    return out;
}

StiffnessMatrix combineOperators(const TensorProductSpace& space,
                                 const std::vector<OperatorTerm>& terms,
                                 const Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic>&
                                     thickness_occupied,
                                 const AssemblyOptions& options) {
    if (terms.empty())
        throw std::invalid_argument("combineOperators: no operator terms");
    const int n_s = space.numInplane();
    const int n_t = space.numThickness();

    const int n_chunks = std::max(1, std::min(options.threads, n_s));
    std::vector<SparseMatrixBuilder> builders;
    for (int c = 0; c < n_chunks; ++c)
        builders.emplace_back(space.numFunctions());

    std::int64_t thickness_pairs = 0;
    for (int it = 0; it < n_t; ++it)
        for (int jt = 0; jt < n_t; ++jt)
            if (thickness_occupied(it, jt))
                ++thickness_pairs;

    parallelChunks(n_s, options.threads, [&](int chunk, int begin, int end) {
        SparseMatrixBuilder& builder = builders[static_cast<std::size_t>(chunk)];
        const InPlaneOperator& pattern = terms[0].inplane.op[0];
        std::int64_t inplane_pairs = 0;
        for (int is = begin; is < end; ++is)
            for (int js : pattern.bandColumns(is))
                if (pattern.occupied(is, js))
                    ++inplane_pairs;
        builder.reserve(static_cast<std::size_t>(inplane_pairs * thickness_pairs * 9));
        for (int is = begin; is < end; ++is) {
            for (int js : pattern.bandColumns(is)) {
                if (!pattern.occupied(is, js))
                    continue;
                for (int it = 0; it < n_t; ++it) {
                    for (int jt = 0; jt < n_t; ++jt) {
                        if (!thickness_occupied(it, jt))
                            continue;
                        Eigen::Matrix3d block = Eigen::Matrix3d::Zero();
                        for (const OperatorTerm& term : terms)
                            for (int ab = 0; ab < 4; ++ab)
                                block += term.inplane.op[static_cast<std::size_t>(ab)].block(is, js) *
                                         term.thickness[static_cast<std::size_t>(ab)](it, jt);
                        builder.addBlock(it * n_s + is, jt * n_s + js, block);
                    }
                }
            }
        }
    });

    for (int c = 1; c < n_chunks; ++c)
        builders[0].merge(std::move(builders[static_cast<std::size_t>(c)]));
    return builders[0].finalize();
}

StiffnessMatrix assembleFast(const ProblemSetup& setup, const AssemblyOptions& options,
                             AssemblyStats* stats) {
    const TensorProductSpace& space = setup.space;
    const Layup& layup = setup.layup;
    if (layup.numLayers() < 1)
        throw std::invalid_argument("assembleFast: empty layup");

    const ThicknessOperators q = computeThicknessOperators(
        space.thickness(), layup.interfaces(),
        detail::thicknessPointCount(options, space.thickness()));
    const int n_t = space.numThickness();

    auto layerActive = [&](int l) {
        return options.active_layers.empty() ||
               std::find(options.active_layers.begin(), options.active_layers.end(), l) !=
                   options.active_layers.end();
    };

    std::vector<OperatorTerm> terms;
    if (!options.decompose_angles) {
        // One in-plane operator set per distinct material configuration;
        // thickness matrices of all layers sharing it are pre-summed, so the
        // combination cost does not grow with the layer count.
        for (const MaterialConfig& cfg : layup.distinctConfigs()) {
            OperatorTerm term{computeInplaneOperators(space, setup.geom, cfg.stiffness, options,
                                                      stats),
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
    } else {
        // Group layers by material constants; five angle-independent
        // operator sets per group, combined with per-layer trigonometric
        // weights.  Caps the number of operator computations at five per
        // distinct material, regardless of how many angles appear.
        std::vector<OrthotropicConstants> groups;
        for (const MaterialConfig& cfg : layup.distinctConfigs())
            if (std::find(groups.begin(), groups.end(), cfg.constants) == groups.end())
                groups.push_back(cfg.constants);

        for (const OrthotropicConstants& constants : groups) {
            const std::array<VoigtMatrix, 5> basis = angleDecomposition(constants);
            for (int k = 0; k < 5; ++k) {
                OperatorTerm term{computeInplaneOperators(space, setup.geom,
                                                          basis[static_cast<std::size_t>(k)],
                                                          options, stats),
                                  {Eigen::MatrixXd::Zero(n_t, n_t), Eigen::MatrixXd::Zero(n_t, n_t),
                                   Eigen::MatrixXd::Zero(n_t, n_t),
                                   Eigen::MatrixXd::Zero(n_t, n_t)}};
                for (int l = 0; l < layup.numLayers(); ++l) {
                    const MaterialConfig& cfg = layup.configOf(l);
                    if (!(cfg.constants == constants) || !layerActive(l))
                        continue;
                    const double c = std::cos(cfg.angle), s = std::sin(cfg.angle);
                    const double weight[5] = {1.0, c * c * c * c, c * c * c * s, c * c, c * s};
                    for (int ab = 0; ab < 4; ++ab)
                        term.thickness[static_cast<std::size_t>(ab)] +=
                            weight[k] *
                            q.per_layer[static_cast<std::size_t>(l)][static_cast<std::size_t>(ab)];
                }
                terms.push_back(std::move(term));
            }
        }
    }

    return combineOperators(space, terms, q.occupied, options);
}

} // namespace lamfast
