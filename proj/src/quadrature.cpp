#include "lamfast/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lamfast {

QuadratureRule gaussLegendre(int n) {
    if (n < 1)
        throw std::invalid_argument("gaussLegendre: need at least one point");

    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);

    // Roots of P_n come in +/- pairs; solve for the first half and mirror.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess for the i-th root (descending order).
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x; // ascending order
        rule.points[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.points[half - 1] = 0.0; // middle root is exactly zero
    return rule;
}

QuadratureRule gaussLegendre(int n, double a, double b) {
    QuadratureRule rule = gaussLegendre(n);
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.points[i] = mid + halfwidth * rule.points[i];
        rule.weights[i] *= halfwidth;
    }
    return rule;
}

std::vector<ThicknessCell> layerwiseThicknessRule(const KnotVector& kv,
                                                  const std::vector<double>& interfaces,
                                                  int n_points) {
    if (interfaces.size() < 2 || interfaces.front() != 0.0 || interfaces.back() != 1.0)
        throw std::invalid_argument("layerwiseThicknessRule: interfaces must run from 0 to 1");
    for (std::size_t i = 1; i < interfaces.size(); ++i)
        if (!(interfaces[i] > interfaces[i - 1]))
            throw std::invalid_argument("layerwiseThicknessRule: interfaces must be strictly increasing");

    const std::vector<Span> spans = kv.elementSpans();
    std::vector<ThicknessCell> cells;
    const int n_layers = static_cast<int>(interfaces.size()) - 1;
    for (int s = 0; s < static_cast<int>(spans.size()); ++s) {
        for (int l = 0; l < n_layers; ++l) {
            const double lo = std::max(spans[s].begin, interfaces[l]);
            const double hi = std::min(spans[s].end, interfaces[l + 1]);
            if (hi <= lo)
                continue; // zero-measure intersection
            ThicknessCell cell;
            cell.lo = lo;
            cell.hi = hi;
            cell.layer = l;
            cell.span = s;
            cell.rule = gaussLegendre(n_points, lo, hi);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

} // namespace lamfast
