#pragma once

#include "filmhomog/errors.hpp"
#include "filmhomog/geometry.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace filmhomog {

struct QuadratureOptions {
    double tolerance = 1e-9;  ///< absolute, per integral
    int max_depth = 12;
};

/// 10-point Gauss-Legendre rule on [-1, 1].
inline constexpr int kGaussOrder = 10;
const std::array<double, kGaussOrder>& gauss_nodes();
const std::array<double, kGaussOrder>& gauss_weights();

template <class F>
double gauss_interval(F&& f, double a, double b) {
    const auto& x = gauss_nodes();
    const auto& w = gauss_weights();
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGaussOrder; ++i) s += w[i] * f(c + r * x[i]);
    return r * s;
}

template <class F>
double gauss_rect(F&& f, const Rect& rect) {
    const auto& x = gauss_nodes();
    const auto& w = gauss_weights();
    const Vec2 c = 0.5 * (rect.lower + rect.upper);
    const Vec2 r = 0.5 * (rect.upper - rect.lower);
    double s = 0.0;
    for (int i = 0; i < kGaussOrder; ++i) {
        double row = 0.0;
        for (int j = 0; j < kGaussOrder; ++j) row += w[j] * f(Vec2(c.x() + r.x() * x[i], c.y() + r.y() * x[j]));
        s += w[i] * row;
    }
    return r.x() * r.y() * s;
}

namespace detail {

template <class F>
double adapt_interval(F& f, double a, double b, double whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss_interval(f, a, m);
    const double right = gauss_interval(f, m, b);
    const double refined = left + right;
    if (std::abs(refined - whole) <= tol) return refined;
    if (depth >= max_depth) {
        throw QuadratureNotConverged("interval [" + std::to_string(a) + ", " + std::to_string(b) +
                                     "] error estimate " + std::to_string(std::abs(refined - whole)) +
                                     " above " + std::to_string(tol) + " at depth " + std::to_string(depth));
    }
    return adapt_interval(f, a, m, left, 0.5 * tol, depth + 1, max_depth) +
           adapt_interval(f, m, b, right, 0.5 * tol, depth + 1, max_depth);
}

template <class F>
double adapt_rect(F& f, const Rect& r, double whole, double tol, int depth, int max_depth) {
    const Vec2 m = 0.5 * (r.lower + r.upper);
    const std::array<Rect, 4> kids{Rect{r.lower, m}, Rect{{m.x(), r.lower.y()}, {r.upper.x(), m.y()}},
                                   Rect{{r.lower.x(), m.y()}, {m.x(), r.upper.y()}}, Rect{m, r.upper}};
    std::array<double, 4> parts{};
    double refined = 0.0;
    for (int i = 0; i < 4; ++i) {
        parts[i] = gauss_rect(f, kids[i]);
        refined += parts[i];
    }
    if (std::abs(refined - whole) <= tol) return refined;
    if (depth >= max_depth) {
        throw QuadratureNotConverged("cell at (" + std::to_string(r.lower.x()) + ", " +
                                     std::to_string(r.lower.y()) + ") error estimate " +
                                     std::to_string(std::abs(refined - whole)) + " above " +
                                     std::to_string(tol) + " at depth " + std::to_string(depth));
    }
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += adapt_rect(f, kids[i], parts[i], 0.25 * tol, depth + 1, max_depth);
    return s;
}

}  // namespace detail

/// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when its two
/// halves agree with it to the panel's share of the tolerance.
template <class F>
double integrate_interval(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    const double whole = gauss_interval(f, a, b);
    return detail::adapt_interval(f, a, b, whole, opt.tolerance, 0, opt.max_depth);
}

/// Adaptive tensor Gauss-Legendre on a rectangle, quadtree refinement.
template <class F>
double integrate_rect(F&& f, const Rect& rect, const QuadratureOptions& opt = {}) {
    const double whole = gauss_rect(f, rect);
    return detail::adapt_rect(f, rect, whole, opt.tolerance, 0, opt.max_depth);
}

}  // namespace filmhomog
