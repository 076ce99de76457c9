#include "qcs/analysis.hpp"
#include "qcs/eigensolve.hpp"
#include "qcs/operators.hpp"
#include "qcs/symmetry.hpp"

#include <benchmark/benchmark.h>

namespace {

qcs::SparseOperator planar(std::size_t n, double mu = 0.00027) {
  const auto grid = qcs::make_box_grid({{qcs::Coord::R, -15.0, 15.0, n}, {qcs::Coord::x, -15.0, 15.0, n}});
  qcs::HamiltonianOptions h;
  h.form = qcs::Form::planar_2var;
  h.mu = mu;
  return qcs::build_hamiltonian(grid, h);
}

void BM_Matvec(benchmark::State &state) {
  const auto op = planar(static_cast<std::size_t>(state.range(0)));
  qcs::Vector x = qcs::Vector::Ones(static_cast<Eigen::Index>(op.dimension()));
  qcs::Vector y(x.size());
  for (auto _ : state) {
    op.apply(x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(op.nonzeros()));
}
BENCHMARK(BM_Matvec)->Arg(40)->Arg(148);

void BM_Assemble(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(planar(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Assemble)->Arg(148)->Unit(benchmark::kMillisecond);

void BM_LowestStates(benchmark::State &state) {
  const auto op = planar(60, 0.1);
  const qcs::SymmetryReduction red(op, qcs::symmetric_axes(op.grid()));
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    std::size_t got = 0;
    qcs::solve_lowest_streaming(op, k, {}, &red, [&](const qcs::EigenSolution &s) { got += s.k(); });
    benchmark::DoNotOptimize(got);
  }
}
BENCHMARK(BM_LowestStates)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ObserveState(benchmark::State &state) {
  const auto op = planar(148);
  qcs::Vector v = qcs::Vector::Ones(static_cast<Eigen::Index>(op.dimension()));
  v.normalize();
  for (auto _ : state) benchmark::DoNotOptimize(qcs::observe_state(v, 0.0, op));
}
BENCHMARK(BM_ObserveState);

} // namespace

BENCHMARK_MAIN();
