#include <doctest.h>

#include <cmath>
#include <vector>

#include "pipeflow/growth.hpp"

using namespace pipeflow;

namespace {

// closed form of the minimal-growth ODE: Y^((m-1)/m) is affine in zeta
double envelope_exact(const GrowthSpec& s, double Y0, double zeta) {
    const double p = (s.m - 1.0) / s.m;
    return std::pow(std::pow(Y0, p) + p * std::pow(s.C, -1.0 / s.m) * zeta, 1.0 / p);
}

std::vector<GrowthSample> sampled(double (*f)(double), double lo, double hi, int n) {
    std::vector<GrowthSample> s;
    for (int i = 0; i < n; ++i) {
        const double z = lo + (hi - lo) * i / (n - 1);
        s.push_back({z, f(z)});
    }
    return s;
}

} // namespace

TEST_CASE("envelope matches the closed form for m = 2") {
    const GrowthSpec spec{1.0, 2.0, 0.0};
    const EnvelopeCurve c = envelope(spec, 1.0, 100.0, 2000);
    for (std::size_t i = 0; i < c.zeta.size(); i += 100) {
        const double want = envelope_exact(spec, 1.0, c.zeta[i]);
        CHECK(c.Y[i] == doctest::Approx(want).epsilon(1e-3));
    }
    // spec form: Y = (sqrt(Y0) + zeta/(2 sqrt(C)))^2
    const double z = c.zeta.back();
    CHECK(c.Y.back() == doctest::Approx(std::pow(1.0 + z / 2.0, 2.0)).epsilon(1e-3));
}

TEST_CASE("envelope exponent m/(m-1) is recovered within 2%") {
    for (double m : {4.0 / 3.0, 1.5, 2.0, 3.0}) {
        const GrowthSpec spec{1.0, m, 0.0};
        const EnvelopeCurve c = envelope(spec, 1.0, 2000.0, 20000);
        const double slope = loglog_tail_slope(c);
        const double want = m / (m - 1.0);
        CHECK(std::abs(slope - want) / want < 0.02);
        // cross-check the endpoint against the exact solution
        CHECK(c.Y.back() ==
              doctest::Approx(envelope_exact(spec, 1.0, 2000.0)).epsilon(1e-3));
    }
}

TEST_CASE("envelope from Y0 = 0 stays at the zero fixed point") {
    const EnvelopeCurve c = envelope({1.0, 1.5, 0.0}, 0.0, 50.0, 100);
    for (double y : c.Y) CHECK(y == 0.0);
}

TEST_CASE("envelope is monotone and convex once positive") {
    const EnvelopeCurve c = envelope({2.0, 1.5, 0.0}, 0.5, 500.0, 5000);
    double prev_diff = 0.0;
    for (std::size_t i = 1; i < c.Y.size(); ++i) {
        const double diff = c.Y[i] - c.Y[i - 1];
        CHECK(diff >= 0.0);
        CHECK(diff >= prev_diff - 1e-12);
        prev_diff = diff;
    }
}

TEST_CASE("too coarse a step is rejected") {
    // exponent 21 blows up fast; 3 RK4 steps over a long range cannot track it
    CHECK_THROWS_AS(envelope({1.0, 1.05, 0.0}, 1.0, 200.0, 3), StepTooCoarse);
}

TEST_CASE("classifier: consistent cubic growth") {
    const auto cubic = sampled([](double z) { return z * z * z; }, 1.0, 40.0, 40);
    const GrowthVerdict v = classify(cubic, {1.0, 1.5, 0.0});
    CHECK(v.classification == GrowthClass::ForcedSuperlinearGrowth);
    CHECK(v.exponent == doctest::Approx(3.0));
    CHECK(!std::isfinite(v.witness));
}

TEST_CASE("classifier: identically zero samples") {
    const auto zero = sampled([](double) { return 0.0; }, 1.0, 40.0, 20);
    const GrowthVerdict v = classify(zero, {1.0, 1.5, 0.0});
    CHECK(v.classification == GrowthClass::MustBeIdenticallyZero);
}

TEST_CASE("classifier: linear samples violate the inequality") {
    const auto linear = sampled([](double z) { return z; }, 1.0, 40.0, 40);
    const GrowthVerdict v = classify(linear, {1.0, 1.5, 0.0});
    CHECK(v.classification == GrowthClass::Inconclusive);
    CHECK(std::isfinite(v.witness));
    CHECK(v.witness >= 1.0);
}

TEST_CASE("classifier: consistent sub-critical tail forces zero") {
    // quadratic growth passes Y <= C Y'^(3/2) for large C but its slope 2
    // sits below the forced exponent 3
    const auto quad = sampled([](double z) { return z * z; }, 1.0, 50.0, 50);
    const GrowthVerdict v = classify(quad, {50.0, 1.5, 0.0});
    CHECK(v.classification == GrowthClass::MustBeIdenticallyZero);
}

TEST_CASE("enlarging C preserves a consistent verdict") {
    const auto cubic = sampled([](double z) { return z * z * z; }, 1.0, 40.0, 40);
    const GrowthVerdict v1 = classify(cubic, {1.0, 1.5, 0.0});
    const GrowthVerdict v2 = classify(cubic, {25.0, 1.5, 0.0});
    CHECK(v1.classification == v2.classification);
}

TEST_CASE("tau1 leaves small slopes unchecked") {
    // flat spot violates Y <= C tau^m at tau ~ 0 unless tau1 masks it
    std::vector<GrowthSample> s{{1.0, 8.0}, {2.0, 8.0 + 1e-9}, {3.0, 64.0}, {4.0, 260.0}};
    CHECK(classify(s, {1.0, 1.5, 0.0}).classification == GrowthClass::Inconclusive);
    CHECK(classify(s, {1.0, 1.5, 0.5}).classification !=
          GrowthClass::Inconclusive);
}

TEST_CASE("malformed samples are rejected") {
    CHECK_THROWS_AS(classify({{1.0, 1.0}}, {1.0, 2.0, 0.0}), MalformedSamples);
    CHECK_THROWS_AS(classify({{1.0, 1.0}, {1.0, 2.0}}, {1.0, 2.0, 0.0}),
                    MalformedSamples);
    CHECK_THROWS_AS(classify({{1.0, 1.0}, {2.0, 0.5}}, {1.0, 2.0, 0.0}),
                    MalformedSamples);
    CHECK_THROWS_AS(classify({{1.0, -1.0}, {2.0, 0.5}}, {1.0, 2.0, 0.0}),
                    MalformedSamples);
}

TEST_CASE("spec parameters are validated") {
    CHECK_THROWS_AS(envelope({0.0, 2.0, 0.0}, 1.0, 10.0, 10), ConfigError);
    CHECK_THROWS_AS(envelope({1.0, 1.0, 0.0}, 1.0, 10.0, 10), ConfigError);
    CHECK_THROWS_AS(envelope({1.0, 2.0, -1.0}, 1.0, 10.0, 10), ConfigError);
}
