#include "filmhomog/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace filmhomog {

namespace {

struct Rule {
    std::array<double, kGaussOrder> x{};
    std::array<double, kGaussOrder> w{};
};

// Boost stores the nonnegative half of a symmetric rule; mirror it.
Rule build_rule() {
    using G = boost::math::quadrature::gauss<double, kGaussOrder>;
    const auto& a = G::abscissa();
    const auto& b = G::weights();
    static_assert(kGaussOrder % 2 == 0);
    constexpr int half = kGaussOrder / 2;
    Rule r;
    for (int i = 0; i < half; ++i) {
        r.x[half - 1 - i] = -a[i];
        r.w[half - 1 - i] = b[i];
        r.x[half + i] = a[i];
        r.w[half + i] = b[i];
    }
    return r;
}

const Rule& rule() {
    static const Rule r = build_rule();
    return r;
}

}  // namespace

const std::array<double, kGaussOrder>& gauss_nodes() { return rule().x; }
const std::array<double, kGaussOrder>& gauss_weights() { return rule().w; }

}  // namespace filmhomog
