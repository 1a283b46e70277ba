#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "conefoliate/glued.hpp"
#include "conefoliate/nonlinear.hpp"
#include "conefoliate/profile.hpp"
#include "conefoliate/radial.hpp"

using namespace conefoliate;

namespace {

const ConeParams kCone = ConeParams::make(3, 3);

struct Glued {
    GlueConfig gc;
    GluedSurface S;
    std::unique_ptr<GluedLinearSystem> sys;
    explicit Glued(int N) {
        gc.N = N;
        S = build_approx_surface(kCone, 1e-3, gc);
        sys = std::make_unique<GluedLinearSystem>(S, gc);
    }
};

const Glued& glued(int N) {
    static std::map<int, std::unique_ptr<Glued>> cache;
    auto& g = cache[N];
    if (!g) g = std::make_unique<Glued>(N);
    return *g;
}

}  // namespace

static void BM_ShootProfile(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(shoot_profile(kCone, Side::E_plus, double(st.range(0))));
}
BENCHMARK(BM_ShootProfile)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ConeDirichletSolve(benchmark::State& st) {
    const RadialGrid grid = RadialGrid::make(int(st.range(0)));
    const Mode m = make_mode(3, 1, kCone);
    Eigen::VectorXd f = grid.rvec();
    for (auto _ : st)
        benchmark::DoNotOptimize(linear_dirichlet_solve(ModeField{kCone, grid, {{m, f}}, 1.3}, {{m, 1.0}}, 1.3));
}
BENCHMARK(BM_ConeDirichletSolve)->Arg(513)->Arg(4097)->Unit(benchmark::kMicrosecond);

static void BM_ApproximateInverse(benchmark::State& st) {
    const Glued& g = glued(int(st.range(0)));
    const LinearData d = random_linear_data(*g.sys, 1);
    for (auto _ : st) benchmark::DoNotOptimize(g.sys->P(d));
}
BENCHMARK(BM_ApproximateInverse)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_GluedOperator(benchmark::State& st) {
    const Glued& g = glued(int(st.range(0)));
    const AxisymField u = g.sys->P(random_linear_data(*g.sys, 2));
    for (auto _ : st) benchmark::DoNotOptimize(g.sys->LL(u));
}
BENCHMARK(BM_GluedOperator)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

static void BM_MeanCurvature(benchmark::State& st) {
    const Glued& g = glued(400);
    const AxisymField u = g.sys->P(random_linear_data(*g.sys, 3));
    AxisymField small(u.grid, 1e-3 * u.v);
    for (auto _ : st) benchmark::DoNotOptimize(g.sys->op().M(small));
}
BENCHMARK(BM_MeanCurvature)->Unit(benchmark::kMicrosecond);

static void BM_PicardSolve(benchmark::State& st) {
    const Glued& g = glued(int(st.range(0)));
    SolveConfig cfg;
    Eigen::VectorXd gv = Eigen::VectorXd::Zero(g.sys->modes());
    gv(2) = 2e-3;
    for (auto _ : st) benchmark::DoNotOptimize(picard_iterate(*g.sys, gv, cfg));
}
BENCHMARK(BM_PicardSolve)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ThetaEvaluation(benchmark::State& st) {
    static const ThetaContext ctx(ThetaConfig{});
    Eigen::VectorXd g = Eigen::VectorXd::Zero(ctx.zonal().size());
    g(2) = 1e-6;
    for (auto _ : st) benchmark::DoNotOptimize(theta_map(ctx, g, ThetaParams{1e-6, 1e-6}));
}
BENCHMARK(BM_ThetaEvaluation)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
