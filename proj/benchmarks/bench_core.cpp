#include "l2ext/bergman.hpp"
#include "l2ext/multiplier.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace l2ext;

namespace {

RealPolynomial shifted_gaussian() {
    // |z - 1/2|^2
    RealPolynomial p;
    p.variables = 2;
    p.terms = {{1.0, {2, 0}}, {-1.0, {1, 0}}, {0.25, {0, 0}}, {1.0, {0, 2}}};
    return p;
}

void BM_GramToricDisc(benchmark::State& state) {
    const auto dom = DomainSpec::polydisc(1);
    RealPolynomial g;
    g.variables = 1;
    g.terms = {{1.0, {1}}};
    const auto w = WeightSpec::plain(BaseWeight::radial(g));
    const auto rule = QuadratureRule::defaults_for(1);
    for (auto _ : state) benchmark::DoNotOptimize(build_space(dom, w, static_cast<int>(state.range(0)), rule));
}
BENCHMARK(BM_GramToricDisc)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_GramNonToricDisc(benchmark::State& state) {
    const auto dom = DomainSpec::polydisc(1);
    const auto w = WeightSpec::plain(BaseWeight::pointwise(shifted_gaussian()));
    const auto rule = QuadratureRule::defaults_for(1);
    for (auto _ : state) benchmark::DoNotOptimize(build_space(dom, w, static_cast<int>(state.range(0)), rule));
}
BENCHMARK(BM_GramNonToricDisc)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GramBidiscFlat(benchmark::State& state) {
    const auto dom = DomainSpec::polydisc(2);
    const auto w = WeightSpec::plain(BaseWeight::zero());
    const auto rule = QuadratureRule::defaults_for(2);
    for (auto _ : state) benchmark::DoNotOptimize(build_space(dom, w, static_cast<int>(state.range(0)), rule));
}
BENCHMARK(BM_GramBidiscFlat)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_HermitianCholesky(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {gauss(rng), gauss(rng)};
    const Eigen::MatrixXcd h = a.adjoint() * a + Eigen::MatrixXcd::Identity(n, n);
    for (auto _ : state) benchmark::DoNotOptimize(HermitianCholesky(h));
}
BENCHMARK(BM_HermitianCholesky)->Arg(17)->Arg(66)->Arg(153);

void BM_OracleBatchBlowup(benchmark::State& state) {
    const auto dom = DomainSpec::polydisc(2);
    const auto psi = SingularWeight::make(Rational(1), {{1, 0}, {0, 1}}, dom);
    std::vector<OracleInstance> batch;
    for (const auto& beta : graded_lex_basis(2, 4))
        for (int j = 1; j <= 7; ++j) batch.emplace_back(beta, Rational(2 * j + 1, 4));
    const QuadratureRule rule(20, 16);
    for (auto _ : state) benchmark::DoNotOptimize(membership_oracle_batch(batch, psi, dom, rule));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_OracleBatchBlowup)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
