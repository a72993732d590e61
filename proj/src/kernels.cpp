#include "filmhomog/kernels.hpp"

#include "filmhomog/errors.hpp"

#include <cstdint>
#include <sstream>

namespace filmhomog {

namespace {

/// Returns false on a near-coincident charge instead of throwing, so the
/// parallel kernel can defer the exception past the OpenMP region.
bool point_sum(const ChargeSet& c, const Vec3& r, double& out) {
    CompensatedSum acc;
    const std::size_t n = c.size();
    const double* xs = c.x.data();
    const double* ys = c.y.data();
    const double* zs = c.z.data();
    const double* qs = c.q.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = r.x() - xs[i];
        const double dy = r.y() - ys[i];
        const double dz = r.z() - zs[i];
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (d < kSingularDistance) return false;
        acc.add(qs[i] / d);
    }
    out = acc.value();
    return true;
}

[[noreturn]] void singular(const Vec3& r) {
    std::ostringstream os;
    os << "observation point (" << r.x() << ", " << r.y() << ", " << r.z() << ") coincides with a charge";
    throw SingularEvaluation(os.str());
}

}  // namespace

std::vector<double> direct_sum_serial(const ChargeSet& charges, const std::vector<Vec3>& points, double scale) {
    std::vector<double> out(points.size(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (!point_sum(charges, points[j], out[j])) singular(points[j]);
        out[j] *= scale;
    }
    return out;
}

std::vector<double> direct_sum_parallel(const ChargeSet& charges, const std::vector<Vec3>& points,
                                        double scale) {
    std::vector<double> out(points.size(), 0.0);
    std::int64_t bad = -1;
    const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (!point_sum(charges, points[uj], out[uj])) {
#pragma omp critical(filmhomog_singular)
            if (bad < 0 || j < bad) bad = j;
        }
        out[uj] *= scale;
    }
    if (bad >= 0) singular(points[static_cast<std::size_t>(bad)]);
    return out;
}

}  // namespace filmhomog
