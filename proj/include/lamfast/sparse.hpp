#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace lamfast {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

class StiffnessMatrix;

/// Coordinate-format accumulator for a (3n x 3n) matrix built from 3x3
/// blocks per basis-function pair.  Duplicates are allowed and summed at
/// finalize time.  Builders are single-writer; parallel assembly uses one
/// builder per worker, merged in a deterministic order.
class SparseMatrixBuilder {
public:
    explicit SparseMatrixBuilder(int n_functions);

    int numFunctions() const { return n_; }
    int dim() const { return 3 * n_; }
    std::size_t numTriplets() const { return triplets_.size(); }

    /// Adds a 3x3 block at rows 3i..3i+2, cols 3j..3j+2.
    void addBlock(int i, int j, const Eigen::Matrix3d& block);

    /// Appends another builder's triplets (used to merge worker outputs;
    /// call in ascending worker order to keep results reproducible).
    void merge(SparseMatrixBuilder&& other);

    void reserve(std::size_t n) { triplets_.reserve(n); }

    /// Sorts triplets by (row, col) with a stable sort and sums runs, so the
    /// result is bit-reproducible for any fixed insertion order.  Throws
    /// std::logic_error on an empty builder.
    StiffnessMatrix finalize() const;

private:
    int n_;
    std::vector<Triplet> triplets_;
};

/// Compressed-sparse-row stiffness matrix.  Symmetry is asserted by tests,
/// not enforced here, so assembler bugs surface instead of being masked.
class StiffnessMatrix {
public:
    StiffnessMatrix() = default;

    int dim() const { return dim_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    /// Entry lookup; zero when the entry is not stored.
    double at(int row, int col) const;

    double frobeniusNorm() const;

    /// ||K - K^T||_F / ||K||_F.
    double symmetryRelError() const;

    /// Matrix-vector product.
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

    const std::vector<std::int64_t>& rowOffsets() const { return row_offsets_; }
    const std::vector<int>& colIndices() const { return cols_; }
    const std::vector<double>& values() const { return values_; }

private:
    friend class SparseMatrixBuilder;
    StiffnessMatrix(int dim, const std::vector<Triplet>& sorted);

    int dim_ = 0;
    std::vector<std::int64_t> row_offsets_;
    std::vector<int> cols_;
    std::vector<double> values_;
};

/// ||A - B||_F / max(||A||_F, ||B||_F); zero for two identical (or two zero)
/// matrices.  Throws std::invalid_argument on dimension mismatch.
double frobeniusRelDiff(const StiffnessMatrix& a, const StiffnessMatrix& b);

/// Matrix Market "coordinate real general" export with 1-based indices.
void writeMatrixMarket(const StiffnessMatrix& m, std::ostream& out);

} // namespace lamfast
