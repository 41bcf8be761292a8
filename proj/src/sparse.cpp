#include "lamfast/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lamfast {

SparseMatrixBuilder::SparseMatrixBuilder(int n_functions) : n_(n_functions) {
    if (n_functions < 1)
        throw std::invalid_argument("SparseMatrixBuilder: need at least one function");
}

void SparseMatrixBuilder::addBlock(int i, int j, const Eigen::Matrix3d& block) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::invalid_argument("SparseMatrixBuilder: block index out of range");
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            triplets_.push_back({3 * i + r, 3 * j + c, block(r, c)});
}

void SparseMatrixBuilder::merge(SparseMatrixBuilder&& other) {
    if (other.n_ != n_)
        throw std::invalid_argument("SparseMatrixBuilder: merging builders of different size");
    triplets_.insert(triplets_.end(), other.triplets_.begin(), other.triplets_.end());
    other.triplets_.clear();
}

StiffnessMatrix SparseMatrixBuilder::finalize() const {
    if (triplets_.empty())
        throw std::logic_error("SparseMatrixBuilder: nothing accumulated");
    std::vector<Triplet> sorted = triplets_;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return StiffnessMatrix(dim(), sorted);
}

StiffnessMatrix::StiffnessMatrix(int dim, const std::vector<Triplet>& sorted) : dim_(dim) {
    row_offsets_.assign(static_cast<std::size_t>(dim) + 1, 0);
    std::size_t k = 0;
    while (k < sorted.size()) {
        const int row = sorted[k].row;
        const int col = sorted[k].col;
        double sum = 0.0;
        while (k < sorted.size() && sorted[k].row == row && sorted[k].col == col)
            sum += sorted[k++].value;
        cols_.push_back(col);
        values_.push_back(sum);
        ++row_offsets_[static_cast<std::size_t>(row) + 1];
    }
    for (int r = 0; r < dim_; ++r)
        row_offsets_[static_cast<std::size_t>(r) + 1] += row_offsets_[static_cast<std::size_t>(r)];
}

double StiffnessMatrix::at(int row, int col) const {
    const auto begin = cols_.begin() + row_offsets_[static_cast<std::size_t>(row)];
    const auto end = cols_.begin() + row_offsets_[static_cast<std::size_t>(row) + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col)
        return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

double StiffnessMatrix::frobeniusNorm() const {
    double sum = 0.0;
    for (double v : values_)
        sum += v * v;
    return std::sqrt(sum);
}

double StiffnessMatrix::symmetryRelError() const {
    double diff = 0.0;
    for (int r = 0; r < dim_; ++r) {
        for (auto k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = cols_[static_cast<std::size_t>(k)];
            const auto begin = cols_.begin() + row_offsets_[static_cast<std::size_t>(c)];
            const auto end = cols_.begin() + row_offsets_[static_cast<std::size_t>(c) + 1];
            const auto it = std::lower_bound(begin, end, r);
            const bool mirrored = it != end && *it == r;
            const double mirror_value =
                mirrored ? values_[static_cast<std::size_t>(it - cols_.begin())] : 0.0;
            const double d = values_[static_cast<std::size_t>(k)] - mirror_value;
            diff += d * d;
            // A structurally absent mirror slot never gets visited, yet the
            // difference matrix is nonzero there as well.
            if (!mirrored)
                diff += d * d;
        }
    }
    const double norm = frobeniusNorm();
    return norm == 0.0 ? 0.0 : std::sqrt(diff) / norm;
}

Eigen::VectorXd StiffnessMatrix::apply(const Eigen::VectorXd& x) const {
    if (x.size() != dim_)
        throw std::invalid_argument("StiffnessMatrix: vector length mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(dim_);
    for (int r = 0; r < dim_; ++r)
        for (auto k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
            y[r] += values_[static_cast<std::size_t>(k)] * x[cols_[static_cast<std::size_t>(k)]];
    return y;
}

double frobeniusRelDiff(const StiffnessMatrix& a, const StiffnessMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("frobeniusRelDiff: dimension mismatch");
    double diff = 0.0;
    const auto& ra = a.rowOffsets();
    const auto& rb = b.rowOffsets();
    for (int r = 0; r < a.dim(); ++r) {
        auto ka = ra[static_cast<std::size_t>(r)];
        auto kb = rb[static_cast<std::size_t>(r)];
        const auto ea = ra[static_cast<std::size_t>(r) + 1];
        const auto eb = rb[static_cast<std::size_t>(r) + 1];
        while (ka < ea || kb < eb) {
            const int ca = ka < ea ? a.colIndices()[static_cast<std::size_t>(ka)] : a.dim();
            const int cb = kb < eb ? b.colIndices()[static_cast<std::size_t>(kb)] : b.dim();
            double d = 0.0;
            if (ca == cb) {
                d = a.values()[static_cast<std::size_t>(ka)] -
                    b.values()[static_cast<std::size_t>(kb)];
                ++ka, ++kb;
            } else if (ca < cb) {
                d = a.values()[static_cast<std::size_t>(ka)];
                ++ka;
            } else {
                d = -b.values()[static_cast<std::size_t>(kb)];
                ++kb;
            }
            diff += d * d;
        }
    }
    const double denom = std::max(a.frobeniusNorm(), b.frobeniusNorm());
    return denom == 0.0 ? 0.0 : std::sqrt(diff) / denom;
}

void writeMatrixMarket(const StiffnessMatrix& m, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.dim() << ' ' << m.dim() << ' ' << m.nnz() << '\n';
    out.precision(17);
    for (int r = 0; r < m.dim(); ++r)
        for (auto k = m.rowOffsets()[static_cast<std::size_t>(r)];
             k < m.rowOffsets()[static_cast<std::size_t>(r) + 1]; ++k)
            out << r + 1 << ' ' << m.colIndices()[static_cast<std::size_t>(k)] + 1 << ' '
                << m.values()[static_cast<std::size_t>(k)] << '\n';
}

} // namespace lamfast
