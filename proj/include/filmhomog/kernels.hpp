#pragma once

#include "filmhomog/charge.hpp"
#include "filmhomog/geometry.hpp"

#include <cmath>
#include <vector>

namespace filmhomog {

/// Below this separation the Green's function is treated as singular.
inline constexpr double kSingularDistance = 1e-12;

/// Running Neumaier-compensated sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

/// scale * sum_i q_i / |r - r_i| for each observation point, charges
/// accumulated in storage order. Throws SingularEvaluation.
std::vector<double> direct_sum_serial(const ChargeSet& charges, const std::vector<Vec3>& points,
                                      double scale = 1.0);

/// Same sums, observation points split across OpenMP threads. Each point
/// is reduced by one thread in the same order, so results match the
/// serial kernel bit for bit.
std::vector<double> direct_sum_parallel(const ChargeSet& charges, const std::vector<Vec3>& points,
                                        double scale = 1.0);

}  // namespace filmhomog
