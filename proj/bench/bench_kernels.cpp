#include "filmhomog/charge.hpp"
#include "filmhomog/kernels.hpp"
#include "filmhomog/lattice.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace filmhomog;

ChargeSet dipole_lattice(double l) {
    Motif m;
    m.neutral = true;
    m.points = {MotifPoint{1.0, {0.75, 0.5}, 0.0}, MotifPoint{-1.0, {0.25, 0.5}, 0.0}};
    const ParametricMap map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), l, UnitCellChoice{});
    return realize(m, t, map, Scales{l, l}, Regime::R2).charges();
}

std::vector<Vec3> plane_points(int n) {
    std::vector<Vec3> pts;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) pts.emplace_back(double(i) / (n - 1), double(j) / (n - 1), 1.0);
    return pts;
}

void BM_DirectSerial(benchmark::State& st) {
    const ChargeSet c = dipole_lattice(1.0 / static_cast<double>(st.range(0)));
    const auto pts = plane_points(16);
    for (auto _ : st) benchmark::DoNotOptimize(direct_sum_serial(c, pts));
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(c.size() * pts.size()));
}

void BM_DirectParallel(benchmark::State& st) {
    const ChargeSet c = dipole_lattice(1.0 / static_cast<double>(st.range(0)));
    const auto pts = plane_points(16);
    for (auto _ : st) benchmark::DoNotOptimize(direct_sum_parallel(c, pts));
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(c.size() * pts.size()));
}

}  // namespace

BENCHMARK(BM_DirectSerial)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_DirectParallel)->Arg(32)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
