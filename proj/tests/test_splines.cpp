#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "lamfast/splines.hpp"

using namespace lamfast;

namespace {

// Reference Cox-de Boor evaluation by direct recursion from the definition.
// Intentionally naive (exponential in p): used only as a test oracle.
double naiveBasis(const std::vector<double>& t, int i, int p, double x) {
    if (p == 0) {
        // Left-closed spans; the point x = 1 belongs to the last nonempty span.
        if (t[i] <= x && x < t[i + 1])
            return 1.0;
        if (x == t[i + 1] && t[i + 1] == t.back() && t[i] < t[i + 1])
            return 1.0;
        return 0.0;
    }
    double left = 0.0, right = 0.0;
    if (t[i + p] > t[i])
        left = (x - t[i]) / (t[i + p] - t[i]) * naiveBasis(t, i, p - 1, x);
    if (t[i + p + 1] > t[i + 1])
        right = (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * naiveBasis(t, i + 1, p - 1, x);
    return left + right;
}

double naiveBasisDeriv(const std::vector<double>& t, int i, int p, double x) {
    double left = 0.0, right = 0.0;
    if (t[i + p] > t[i])
        left = p / (t[i + p] - t[i]) * naiveBasis(t, i, p - 1, x);
    if (t[i + p + 1] > t[i + 1])
        right = p / (t[i + p + 1] - t[i + 1]) * naiveBasis(t, i + 1, p - 1, x);
    return left - right;
}

} // namespace

TEST_SUITE("splines") {

TEST_CASE("linear hat functions at midpoint") {
    KnotVector kv(1, {0.0, 0.0, 1.0, 1.0});
    BasisEval1D e = kv.evaluate(0.5);
    CHECK(e.first_active == 0);
    CHECK(e.values[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.values[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.derivs[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(e.derivs[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("clamped endpoint interpolation") {
    KnotVector kv(2, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0});
    BasisEval1D e = kv.evaluate(0.0);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.values[1] == 0.0);
    CHECK(e.values[2] == 0.0);
}

TEST_CASE("cubic two-element evaluation matches direct recursion") {
    const std::vector<double> knots = {0, 0, 0, 0, 0.5, 1, 1, 1, 1};
    KnotVector kv(3, knots);
    BasisEval1D e = kv.evaluate(0.3);
    CHECK(e.first_active == 0);

    // Frozen reference values from an independent direct-recursion evaluation.
    const double ref_vals[4] = {0.064000000000000015, 0.55799999999999994,
                                0.32399999999999995, 0.053999999999999999};
    const double ref_ders[4] = {-0.96000000000000019, -1.0199999999999996,
                                1.4399999999999997, 0.54000000000000004};
    for (int r = 0; r < 4; ++r) {
        CHECK(e.values[r] == doctest::Approx(ref_vals[r]).epsilon(1e-14));
        CHECK(e.derivs[r] == doctest::Approx(ref_ders[r]).epsilon(1e-13));
        // The live oracle agrees with the frozen constants.
        CHECK(naiveBasis(knots, e.first_active + r, 3, 0.3) ==
              doctest::Approx(ref_vals[r]).epsilon(1e-14));
        CHECK(naiveBasisDeriv(knots, e.first_active + r, 3, 0.3) ==
              doctest::Approx(ref_ders[r]).epsilon(1e-13));
    }
}

TEST_CASE("evaluation matches direct recursion on random spaces") {
    std::mt19937 rng(20240831);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int p = 1 + static_cast<int>(rng() % 5);
        const int nel = 1 + static_cast<int>(rng() % 6);
        KnotVector kv = KnotVector::uniform(p, nel);
        for (int k = 0; k < 5; ++k) {
            const double x = unif(rng);
            BasisEval1D e = kv.evaluate(x);
            for (int r = 0; r <= p; ++r) {
                const int i = e.first_active + r;
                CHECK(e.values[r] ==
                      doctest::Approx(naiveBasis(kv.knots(), i, p, x)).epsilon(1e-12));
                CHECK(e.derivs[r] ==
                      doctest::Approx(naiveBasisDeriv(kv.knots(), i, p, x)).epsilon(1e-10));
            }
            // Functions outside the active window vanish at x.
            for (int i = 0; i < kv.numFunctions(); ++i) {
                if (i >= e.first_active && i <= e.first_active + p)
                    continue;
                CHECK(std::abs(naiveBasis(kv.knots(), i, p, x)) < 1e-14);
            }
        }
    }
}

TEST_CASE("partition of unity and derivative sum on random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 1 + static_cast<int>(rng() % 5);
        const int nel = 1 + static_cast<int>(rng() % 8);
        KnotVector kv = KnotVector::uniform(p, nel);
        const double x = unif(rng);
        BasisEval1D e = kv.evaluate(x);
        double sv = 0.0, sd = 0.0;
        for (int r = 0; r <= p; ++r) {
            sv += e.values[r];
            sd += e.derivs[r];
        }
        CHECK(sv == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(sd) < 1e-12 * (1 << p) * nel);
    }
}

TEST_CASE("derivatives match central finite differences") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const double h = 1e-7;
    for (int trial = 0; trial < 50; ++trial) {
        const int p = 1 + static_cast<int>(rng() % 5);
        KnotVector kv = KnotVector::uniform(p, 3);
        const double x = unif(rng);
        BasisEval1D e = kv.evaluate(x);
        BasisEval1D ep = kv.evaluate(x + h);
        BasisEval1D em = kv.evaluate(x - h);
        if (ep.first_active != e.first_active || em.first_active != e.first_active)
            continue; // straddles a span boundary; skip
        for (int r = 0; r <= p; ++r) {
            const double fd = (ep.values[r] - em.values[r]) / (2 * h);
            CHECK(e.derivs[r] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("element spans") {
    SUBCASE("two linear spans") {
        KnotVector kv(1, {0.0, 0.0, 0.5, 1.0, 1.0});
        auto spans = kv.elementSpans();
        REQUIRE(spans.size() == 2);
        CHECK(spans[0].begin == 0.0);
        CHECK(spans[0].end == 0.5);
        CHECK(spans[0].first_active == 0);
        CHECK(spans[1].begin == 0.5);
        CHECK(spans[1].end == 1.0);
        CHECK(spans[1].first_active == 1);
    }
    SUBCASE("single quadratic span") {
        KnotVector kv(2, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0});
        auto spans = kv.elementSpans();
        REQUIRE(spans.size() == 1);
        CHECK(spans[0].begin == 0.0);
        CHECK(spans[0].end == 1.0);
        CHECK(spans[0].first_active == 0);
    }
    SUBCASE("uniform quadratic spans list p+1 active functions each") {
        KnotVector kv(2, {0.0, 0.0, 0.0, 0.25, 0.5, 0.75, 1.0, 1.0, 1.0});
        auto spans = kv.elementSpans();
        REQUIRE(spans.size() == 4);
        for (int s = 0; s < 4; ++s) {
            CHECK(spans[s].begin == doctest::Approx(0.25 * s));
            CHECK(spans[s].end == doctest::Approx(0.25 * (s + 1)));
            CHECK(spans[s].first_active == s);
            CHECK(spans[s].first_active + 2 < kv.numFunctions());
        }
    }
}

TEST_CASE("uniform knot vectors") {
    SUBCASE("p=2, two elements") {
        KnotVector kv = KnotVector::uniform(2, 2);
        const std::vector<double> expect = {0, 0, 0, 0.5, 1, 1, 1};
        CHECK(kv.knots() == expect);
    }
    SUBCASE("p=1, four elements") {
        KnotVector kv = KnotVector::uniform(1, 4);
        const std::vector<double> expect = {0, 0, 0.25, 0.5, 0.75, 1, 1};
        CHECK(kv.knots() == expect);
    }
    SUBCASE("dimension is elements + degree") {
        CHECK(KnotVector::uniform(4, 8).numFunctions() == 12);
        CHECK(KnotVector::uniform(3, 1).numFunctions() == 4);
    }
    SUBCASE("invalid arguments throw") {
        CHECK_THROWS_AS(KnotVector::uniform(2, 0), std::invalid_argument);
        CHECK_THROWS_AS(KnotVector::uniform(0, 3), std::invalid_argument);
    }
}

TEST_CASE("knot vector validation") {
    CHECK_THROWS_AS(KnotVector(1, {0.0, 0.5, 1.0, 1.0}), std::invalid_argument); // not clamped
    CHECK_THROWS_AS(KnotVector(1, {0.0, 0.0, 1.0}), std::invalid_argument);      // too short
    CHECK_THROWS_AS(KnotVector(2, {0.0, 0.0, 0.0, 0.6, 0.4, 1.0, 1.0, 1.0}),
                    std::invalid_argument); // decreasing
    CHECK_THROWS_AS(KnotVector::uniform(1, 2).evaluate(-0.1), std::domain_error);
    CHECK_THROWS_AS(KnotVector::uniform(1, 2).evaluate(1.1), std::domain_error);
}

TEST_CASE("point at one belongs to the last span") {
    KnotVector kv = KnotVector::uniform(2, 4);
    BasisEval1D e = kv.evaluate(1.0);
    CHECK(e.first_active == kv.numFunctions() - 3);
    CHECK(e.values[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tensor product index round-trip") {
    TensorProductSpace space(KnotVector::uniform(2, 3), KnotVector::uniform(3, 2),
                             KnotVector::uniform(1, 4));
    CHECK(space.numInplane() == 5 * 5);
    CHECK(space.numThickness() == 5);
    CHECK(space.numFunctions() == 125);
    for (int i = 0; i < space.numFunctions(); ++i) {
        auto [iu, iv, it] = space.split(i);
        CHECK(space.flatten(iu, iv, it) == i);
    }
    // Thickness index is the slowest-varying one.
    CHECK(space.flatten(0, 0, 1) == space.numInplane());
    CHECK(space.flatten(1, 0, 0) == 1);
    CHECK(space.flatten(0, 1, 0) == space.inplaneU().numFunctions());
}

} // TEST_SUITE
