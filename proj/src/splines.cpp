#include "lamfast/splines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lamfast {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 1)
        throw std::invalid_argument("KnotVector: degree must be >= 1");
    const int p = degree_;
    if (static_cast<int>(knots_.size()) < 2 * (p + 1))
        throw std::invalid_argument("KnotVector: too few knots for degree " + std::to_string(p));
    if (!std::is_sorted(knots_.begin(), knots_.end()))
        throw std::invalid_argument("KnotVector: knots must be nondecreasing");
    for (int i = 0; i <= p; ++i) {
        if (knots_[i] != 0.0)
            throw std::invalid_argument("KnotVector: first degree+1 knots must equal 0");
        if (knots_[knots_.size() - 1 - i] != 1.0)
            throw std::invalid_argument("KnotVector: last degree+1 knots must equal 1");
    }
}

KnotVector KnotVector::uniform(int degree, int n_elements) {
    if (n_elements < 1)
        throw std::invalid_argument("KnotVector::uniform: n_elements must be >= 1");
    std::vector<double> knots(degree + 1, 0.0);
    for (int k = 1; k < n_elements; ++k)
        knots.push_back(static_cast<double>(k) / n_elements);
    knots.insert(knots.end(), degree + 1, 1.0);
    return KnotVector(degree, std::move(knots));
}

int KnotVector::findSpan(double x) const {
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("KnotVector: point outside [0,1]");
    const int p = degree_;
    const int n = numFunctions();
    if (x >= 1.0) {
        int k = n - 1;
        while (k > p && knots_[k] >= 1.0)
            --k;
        return k;
    }
    // binary search for k with knots[k] <= x < knots[k+1]
    auto it = std::upper_bound(knots_.begin() + p, knots_.begin() + n + 1, x);
    return static_cast<int>(it - knots_.begin()) - 1;
}

BasisEval1D KnotVector::evaluate(double x) const {
    const int p = degree_;
    const int span = findSpan(x);
    const auto& t = knots_;

    // Triangular Cox-de Boor recursion; `low[]` holds the degree p-1 values
    // needed for the derivative formula.
    std::vector<double> vals(p + 1, 0.0), low(p + 1, 0.0);
    std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
    vals[0] = 1.0;
    for (int level = 1; level <= p; ++level) {
        if (level == p)
            std::copy(vals.begin(), vals.end(), low.begin());
        left[level] = x - t[span + 1 - level];
        right[level] = t[span + level] - x;
        double saved = 0.0;
        for (int r = 0; r < level; ++r) {
            const double denom = right[r + 1] + left[level - r];
            const double tmp = denom > 0.0 ? vals[r] / denom : 0.0;
            vals[r] = saved + right[r + 1] * tmp;
            saved = left[level - r] * tmp;
        }
        vals[level] = saved;
    }

    BasisEval1D out;
    out.point = x;
    out.first_active = span - p;
    out.values = std::move(vals);
    out.derivs.assign(p + 1, 0.0);
    if (p >= 1) {
        // N'_{i,p} = p * ( N_{i,p-1}/(t_{i+p}-t_i) - N_{i+1,p-1}/(t_{i+p+1}-t_{i+1}) )
        // where low[r] = N_{span-p+1+r, p-1}, r = 0..p-1.
        for (int r = 0; r <= p; ++r) {
            const int i = out.first_active + r;
            double d = 0.0;
            if (r >= 1) { // N_{i,p-1} = low[r-1]
                const double den = t[i + p] - t[i];
                if (den > 0.0) d += low[r - 1] / den;
            }
            if (r <= p - 1) { // N_{i+1,p-1} = low[r]
                const double den = t[i + p + 1] - t[i + 1];
                if (den > 0.0) d -= low[r] / den;
            }
            out.derivs[r] = p * d;
        }
    }
    return out;
}

std::vector<Span> KnotVector::elementSpans() const {
    std::vector<Span> spans;
    const int p = degree_;
    const int n = numFunctions();
    for (int k = p; k <= n - 1; ++k) {
        if (knots_[k + 1] > knots_[k])
            spans.push_back({knots_[k], knots_[k + 1], k - p});
    }
    return spans;
}

TensorProductSpace::TensorProductSpace(KnotVector inplane_u, KnotVector inplane_v, KnotVector thickness)
    : u_(std::move(inplane_u)), v_(std::move(inplane_v)), t_(std::move(thickness)) {}

std::array<int, 3> TensorProductSpace::split(int i) const {
    const int ns = numInplane();
    const int it = i / ns;
    const int is = i % ns;
    return {is % numU(), is / numU(), it};
}

} // namespace lamfast
