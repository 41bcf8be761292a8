#include <doctest.h>

#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lamfast/sparse.hpp"

using namespace lamfast;

namespace {

Eigen::Matrix3d randomBlock(std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Eigen::Matrix3d b;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            b(r, c) = dist(rng);
    return b;
}

/// Builds the same matrix densely and sparsely from a random block stream.
struct DensePair {
    Eigen::MatrixXd dense;
    StiffnessMatrix sparse;
};

DensePair randomAccumulation(int n_functions, int n_blocks, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, n_functions - 1);
    SparseMatrixBuilder builder(n_functions);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(3 * n_functions, 3 * n_functions);
    for (int k = 0; k < n_blocks; ++k) {
        const int i = pick(rng);
        const int j = pick(rng);
        const Eigen::Matrix3d b = randomBlock(rng);
        builder.addBlock(i, j, b);
        dense.block<3, 3>(3 * i, 3 * j) += b;
    }
    return {std::move(dense), builder.finalize()};
}

} // namespace

TEST_CASE("builder accumulation matches a dense oracle") {
    const DensePair pair = randomAccumulation(17, 400, 71u);
    REQUIRE(pair.sparse.dim() == 51);
    for (int r = 0; r < pair.dense.rows(); ++r)
        for (int c = 0; c < pair.dense.cols(); ++c)
            CHECK(pair.sparse.at(r, c) == doctest::Approx(pair.dense(r, c)).epsilon(1e-14));
}

TEST_CASE("duplicate blocks are summed and stored once") {
    SparseMatrixBuilder builder(2);
    Eigen::Matrix3d b1, b2;
    b1 << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    b2 << 9, 8, 7, 6, 5, 4, 3, 2, 1;
    builder.addBlock(0, 1, b1);
    builder.addBlock(0, 1, b2);
    CHECK(builder.numTriplets() == 18);
    const StiffnessMatrix m = builder.finalize();
    CHECK(m.nnz() == 9);
    CHECK(m.at(0, 3) == 10.0);
    CHECK(m.at(2, 5) == 10.0);
    CHECK(m.at(0, 0) == 0.0);
}

TEST_CASE("finalize on an empty builder throws") {
    SparseMatrixBuilder builder(4);
    CHECK_THROWS_AS((void)builder.finalize(), std::logic_error);
}

TEST_CASE("merge is equivalent to inserting into a single builder") {
    std::mt19937 rng(5u);
    SparseMatrixBuilder whole(6);
    SparseMatrixBuilder part_a(6);
    SparseMatrixBuilder part_b(6);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int k = 0; k < 60; ++k) {
        const int i = pick(rng);
        const int j = pick(rng);
        const Eigen::Matrix3d b = randomBlock(rng);
        whole.addBlock(i, j, b);
        (k < 30 ? part_a : part_b).addBlock(i, j, b);
    }
    part_a.merge(std::move(part_b));
    const StiffnessMatrix merged = part_a.finalize();
    const StiffnessMatrix direct = whole.finalize();
    REQUIRE(merged.nnz() == direct.nnz());
    // Same insertion order after the merge, so finalize sums in the same
    // order and the result is bit-identical.
    CHECK(merged.values() == direct.values());
    CHECK(merged.colIndices() == direct.colIndices());
    CHECK(merged.rowOffsets() == direct.rowOffsets());
}

TEST_CASE("matrix-vector product matches dense multiplication") {
    const DensePair pair = randomAccumulation(11, 250, 12u);
    std::mt19937 rng(3u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd x(pair.sparse.dim());
        for (int k = 0; k < x.size(); ++k)
            x[k] = dist(rng);
        const Eigen::VectorXd via_sparse = pair.sparse.apply(x);
        const Eigen::VectorXd via_dense = pair.dense * x;
        CHECK((via_sparse - via_dense).norm() <= 1e-12 * via_dense.norm());
    }
}

TEST_CASE("frobenius norm and symmetry error match dense formulas") {
    const DensePair pair = randomAccumulation(9, 150, 44u);
    CHECK(pair.sparse.frobeniusNorm() ==
          doctest::Approx(pair.dense.norm()).epsilon(1e-13));
    const double sym_dense =
        (pair.dense - pair.dense.transpose()).norm() / pair.dense.norm();
    CHECK(pair.sparse.symmetryRelError() == doctest::Approx(sym_dense).epsilon(1e-12));

    SparseMatrixBuilder sym_builder(3);
    std::mt19937 sym_rng(9u);
    Eigen::Matrix3d b = randomBlock(sym_rng);
    b = (b + b.transpose()).eval();
    sym_builder.addBlock(1, 1, b);
    sym_builder.addBlock(0, 2, b);
    sym_builder.addBlock(2, 0, b.transpose());
    CHECK(sym_builder.finalize().symmetryRelError() <= 1e-15);
}

TEST_CASE("relative difference of matrices") {
    SparseMatrixBuilder ba(2);
    SparseMatrixBuilder bb(2);
    Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
    ba.addBlock(0, 0, id);
    ba.addBlock(1, 1, id);
    bb.addBlock(0, 0, id);
    bb.addBlock(1, 1, id);
    const StiffnessMatrix a = ba.finalize();
    CHECK(frobeniusRelDiff(a, bb.finalize()) == 0.0);

    // ||A - B||_F = 1, ||A||_F = 2 for A = 2*E00, B = E00 + e(1,1).
    SparseMatrixBuilder bc(2);
    SparseMatrixBuilder bd(2);
    Eigen::Matrix3d two = Eigen::Matrix3d::Zero();
    two(0, 0) = 2.0;
    Eigen::Matrix3d one = Eigen::Matrix3d::Zero();
    one(0, 0) = 2.0;
    one(1, 1) = 1.0;
    bc.addBlock(0, 0, two);
    bd.addBlock(0, 0, one);
    CHECK(frobeniusRelDiff(bc.finalize(), bd.finalize()) ==
          doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));

    SparseMatrixBuilder wrong_dim(3);
    wrong_dim.addBlock(0, 0, id);
    CHECK_THROWS_AS((void)frobeniusRelDiff(a, wrong_dim.finalize()), std::invalid_argument);

    // Different sparsity patterns still compare correctly.
    SparseMatrixBuilder be(2);
    SparseMatrixBuilder bf(2);
    be.addBlock(0, 1, id);
    bf.addBlock(1, 0, id);
    CHECK(frobeniusRelDiff(be.finalize(), bf.finalize()) ==
          doctest::Approx(std::sqrt(6.0) / std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("matrix market export") {
    SparseMatrixBuilder builder(1);
    Eigen::Matrix3d b;
    b << 1.5, 0, 0, 0, -2.25, 0, 0, 0, 0.125;
    builder.addBlock(0, 0, b);
    std::ostringstream out;
    writeMatrixMarket(builder.finalize(), out);

    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real general");
    int rows = 0, cols = 0;
    long nnz = 0;
    in >> rows >> cols >> nnz;
    CHECK(rows == 3);
    CHECK(cols == 3);
    CHECK(nnz == 9);
    bool saw_center = false;
    for (long k = 0; k < nnz; ++k) {
        int r = 0, c = 0;
        double v = 0.0;
        in >> r >> c >> v;
        REQUIRE(in.good());
        CHECK(r >= 1);
        CHECK(c >= 1);
        if (r == 2 && c == 2) {
            saw_center = true;
            CHECK(v == -2.25);
        }
    }
    CHECK(saw_center);
}
