#include "filmhomog/errors.hpp"
#include "filmhomog/quadrature.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace filmhomog;

TEST_SUITE("quadrature") {

TEST_CASE("rule matches the Newton-iteration oracle") {
    const oracle::Rule r = oracle::gauss_legendre(kGaussOrder);
    for (int i = 0; i < kGaussOrder; ++i) {
        CHECK(std::abs(gauss_nodes()[i] - r.x[i]) <= 1e-15);
        CHECK(std::abs(gauss_weights()[i] - r.w[i]) <= 1e-14);
    }
}

TEST_CASE("fixed rule integrates polynomials up to degree 19 exactly") {
    for (int d = 0; d <= 19; ++d) {
        const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
        const double got = gauss_interval([d](double x) { return std::pow(x, d); }, -1.0, 2.0);
        CHECK(std::abs(got - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
    const double got2 = gauss_rect([](const Vec2& x) { return std::pow(x.x(), 9) * std::pow(x.y(), 19); },
                                   Rect{{0.0, 0.0}, {1.0, 1.0}});
    CHECK(std::abs(got2 - 1.0 / 200.0) <= 1e-15);
}

TEST_CASE("adaptive integration against oracles") {
    const QuadratureOptions opt{1e-11, 14};
    const double a = integrate_interval([](double x) { return 1.0 / (1e-2 + x * x); }, -1.0, 1.0, opt);
    CHECK(std::abs(a - 2.0 * std::atan(10.0) * 10.0) <= 1e-9);

    auto peaked = [](const Vec2& x) { return 1.0 / std::sqrt(0.01 + (x - Vec2(0.3, 0.4)).squaredNorm()); };
    const double b = integrate_rect(peaked, Rect{}, opt);
    const double ref = oracle::tensor(peaked, Vec2(0, 0), Vec2(1, 1), 24, 48);
    CHECK(std::abs(b - ref) <= 1e-9);
}

TEST_CASE("refinement that cannot meet the tolerance throws") {
    const QuadratureOptions opt{1e-14, 3};
    auto kink = [](const Vec2& x) { return std::sqrt(std::abs(x.x() - 1.0 / 3.0)); };
    CHECK_THROWS_AS(integrate_rect(kink, Rect{}, opt), QuadratureNotConverged);
    CHECK_THROWS_AS(integrate_interval([](double x) { return std::sqrt(std::abs(x - 0.1)); }, 0.0, 1.0, opt),
                    QuadratureNotConverged);
}

}  // TEST_SUITE
