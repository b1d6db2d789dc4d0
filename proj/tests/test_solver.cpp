#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "floatbody/solver.hpp"
#include "helpers.hpp"

using namespace floatbody;

namespace {

double tube_deviation(const Solution& s) {
    double dev = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        dev = std::max(dev, std::abs(s.Y[k][0] - s.R * s.chi[k]));
        dev = std::max(dev, std::abs(s.Y[k][1] + s.R * s.chi[k]));
    }
    return dev;
}

// Trivial prefix on a uniform grid, for standalone rhs evaluation.
Solution trivial_prefix(const KernelContext& ctx, int n) {
    Solution s;
    s.R = ctx.R;
    s.chi.resize(n + 1);
    s.Y.resize(n + 1);
    s.Yp.resize(n + 1);
    s.detA.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        s.chi[k] = double(k) / n;
        s.Y[k] = {ctx.R * s.chi[k], -ctx.R * s.chi[k]};
        s.Yp[k] = {ctx.R, -ctx.R};
    }
    return s;
}

}  // namespace

TEST_CASE("rhs: the trivial solution is a fixed point (zero envelope)") {
    for (double R : {1.0, 2.0}) {
        const auto env = Envelope::build(CurvatureProfile::zero());
        KernelContext ctx(env, R);
        const auto hist = trivial_prefix(ctx, 512);
        for (double chi : {0.25, 0.5, 0.9}) {
            const std::size_t m = std::size_t(chi * 512 + 0.5);
            const Vec2 yp = rhs(ctx, chi, {R * chi, -R * chi}, hist, m);
            CHECK(std::abs(yp[0] - R) < 2e-4 * R);
            CHECK(std::abs(yp[1] + R) < 2e-4 * R);
        }
    }
}

TEST_CASE("solve: sphere round-trip with exact trivial emplacement") {
    const auto env = Envelope::build(CurvatureProfile::zero());
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 256;
    const Solution s = solve(ctx, cfg);
    CHECK(tube_deviation(s) < 1e-12);
    CHECK(s.condition_i);
    CHECK(s.Y[0][0] == 0.0);
    CHECK(s.Yp[0][0] == 1.0);
}

TEST_CASE("solve: forced-march sphere converges at second order") {
    // fixed start away from the degenerate chi = 0 corner; the trivial
    // prefix below it plays the role of condition (i)
    const auto env = Envelope::build(CurvatureProfile::zero());
    KernelContext ctx(env);
    std::vector<double> errs;
    for (int N : {64, 128, 256}) {
        SolveConfig cfg;
        cfg.n_grid = N;
        cfg.force_march = true;
        cfg.chi_start = 0.25;
        cfg.tail_refine = 0;
        errs.push_back(tube_deviation(solve(ctx, cfg)));
    }
    CHECK(errs[0] / errs[1] > 3.5);
    CHECK(errs[0] / errs[1] < 4.5);
    CHECK(errs[1] / errs[2] > 3.5);
    CHECK(errs[1] / errs[2] < 4.5);
}

TEST_CASE("solve: determinism (bit-identical repeat)") {
    const auto env = Envelope::build(CurvatureProfile::piecewise_quartic(0.5));
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 64;
    const Solution s1 = solve(ctx, cfg);
    const Solution s2 = solve(ctx, cfg);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t k = 0; k < s1.size(); ++k) {
        CHECK(s1.Y[k][0] == s2.Y[k][0]);
        CHECK(s1.Y[k][1] == s2.Y[k][1]);
        CHECK(s1.Yp[k][0] == s2.Yp[k][0]);
        CHECK(s1.Yp[k][1] == s2.Yp[k][1]);
    }
}

TEST_CASE("solve: quartic c=0.5 yields a nontrivial solution") {
    const auto env = Envelope::build(CurvatureProfile::piecewise_quartic(0.5));
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 256;
    const Solution s = solve(ctx, cfg);
    CHECK(s.condition_i);
    CHECK(s.chi[s.start_index] <= env.alpha1() + 1e-14);
    CHECK(tube_deviation(s) > 0.01);  // visibly non-spherical
    CHECK(s.endpoint_flagged);
}

TEST_CASE("solve: branch monotonicity holds in the small-c tube") {
    // the strict-monotonicity invariant is an epsilon-small statement;
    // c = 0.5 genuinely loses it near the pole while still satisfying the
    // original integral equations, so it is asserted for small c only
    // excluded: the refined pole cap chi > 1 - 1/N, where Y' genuinely
    // diverges for this family (its b'' is unbounded at phi = 1)
    const auto env = Envelope::build(CurvatureProfile::piecewise_quartic(0.125));
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 256;
    const Solution s = solve(ctx, cfg);
    bool mono = true;
    for (std::size_t k = 1; k < s.size() && s.chi[k] <= 1.0 - 1.0 / cfg.n_grid; ++k)
        mono = mono && s.Y[k][0] > s.Y[k - 1][0] && s.Y[k][1] < s.Y[k - 1][1];
    CHECK(mono);
}

TEST_CASE("solve: cosine n=1 regularized start") {
    const auto env = Envelope::build(CurvatureProfile::cosine_odd(1, 0.5));
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 256;
    const Solution s = solve(ctx, cfg);
    CHECK_FALSE(s.condition_i);
    CHECK(s.chi[s.start_index] <= 3.0 / 256 + 1e-12);
    CHECK(tube_deviation(s) > 0.01);
    CHECK(std::isfinite(s.Y.back()[0]));
}

TEST_CASE("residual: trivial solution and fault injection") {
    const auto env = Envelope::build(CurvatureProfile::zero());
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 256;
    Solution s = solve(ctx, cfg);
    for (double phi : {0.3, 0.7, 1.0}) {
        const Vec2 r = residual(ctx, s, phi);
        CHECK(std::abs(r[0]) < 1e-8);
        CHECK(std::abs(r[1]) < 1e-8);
    }
    // corrupt branch 1 by +0.01: residuals must blow past 10x the gate
    for (auto& y : s.Y) y[0] += 0.01;
    double worst = 0.0;
    for (double phi : {0.5, 0.75, 1.0}) {
        const Vec2 r = residual(ctx, s, phi);
        worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
    }
    CHECK(worst > 10.0 * 1e-4 * ctx.I);
}

TEST_CASE("residual: converged quartic run stays within the gate (interior)") {
    const auto env = Envelope::build(CurvatureProfile::piecewise_quartic(0.5));
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 256;
    const Solution s = solve(ctx, cfg);
    for (double phi : {0.25, 0.5, 0.75, 0.9}) {
        const Vec2 r = residual(ctx, s, phi);
        CHECK(std::abs(r[0]) < 1e-4 * ctx.I);
        CHECK(std::abs(r[1]) < 1e-4 * ctx.I);
    }
}

TEST_CASE("rhs is consistent with the FD slope of a converged run") {
    const auto env = Envelope::build(CurvatureProfile::piecewise_quartic(0.5));
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 256;
    const Solution s = solve(ctx, cfg);
    const double chi = 0.9;
    const std::size_t m = s.locate(chi);
    const double fd = (s.Y[m + 1][0] - s.Y[m - 1][0]) / (s.chi[m + 1] - s.chi[m - 1]);
    CHECK(fbtest::rel_err(s.Yp[m][0], fd) < 5e-3);
}

TEST_CASE("tube deviation responds linearly to c (quartic family)") {
    double dev[2];
    int idx = 0;
    for (double c : {0.125, 0.25}) {
        const auto env = Envelope::build(CurvatureProfile::piecewise_quartic(c));
        KernelContext ctx(env);
        SolveConfig cfg;
        cfg.n_grid = 128;
        dev[idx++] = tube_deviation(solve(ctx, cfg));
    }
    CHECK(dev[1] / dev[0] > 1.7);
    CHECK(dev[1] / dev[0] < 2.3);
}

TEST_CASE("solution csv dump shape") {
    const auto env = Envelope::build(CurvatureProfile::zero());
    KernelContext ctx(env);
    SolveConfig cfg;
    cfg.n_grid = 64;
    const Solution s = solve(ctx, cfg);
    std::vector<Vec2> res(s.size(), Vec2{0.0, 0.0});
    std::ostringstream os;
    s.dump_csv(os, res);
    CHECK(os.str().substr(0, 30) == "chi,Y1,Y2,dY1,dY2,detA,r1,r2\n0");
}
