#include <doctest.h>

#include <cmath>

#include "bklab/extremal.hpp"
#include "bklab/rng.hpp"

using namespace bklab;

namespace {

CVec zpt(double a, double b) { return {Cplx(a, 0), Cplx(b, 0)}; }

// closed form of V for the unit square with p = 2 (three branches)
double v_square_closed_form(const CVec& z) {
    const double w1 = std::norm(z[0]), w2 = std::norm(z[1]);
    if (w2 >= w1 + 1) return 0.5 * std::log(w2) + 0.5 * std::log1p(w1) + std::log(2.0);
    if (w1 >= w2 + 1) return 0.5 * std::log(w1) + 0.5 * std::log1p(w2) + std::log(2.0);
    return std::log1p(w1 + w2);
}

std::vector<CVec> allowed_grid_square(int n) {
    // points with |t1 - t2| < 1, spread over moduli in [0.3, 2.2]
    std::vector<CVec> grid;
    RngStream rng(8686, 0);
    uint64_t i = 0;
    while (int(grid.size()) < n) {
        const double r1 = 0.3 + 1.9 * rng.uniform(4 * i);
        const double r2 = 0.3 + 1.9 * rng.uniform(4 * i + 1);
        const double a1 = 2 * M_PI * rng.uniform(4 * i + 2);
        const double a2 = 2 * M_PI * rng.uniform(4 * i + 3);
        ++i;
        if (std::abs(r1 * r1 - r2 * r2) >= 0.95) continue;
        grid.push_back({std::polar(r1, a1), std::polar(r2, a2)});
    }
    return grid;
}

}  // namespace

TEST_CASE("moment map formula") {
    const auto mu = moment_map(zpt(1, 1), 2);
    CHECK(mu[0] == doctest::Approx(2.0 / 3.0));
    CHECK(mu[1] == doctest::Approx(2.0 / 3.0));
    const auto tiny = moment_map(zpt(1e-9, 1e-9), 2);
    CHECK(tiny[0] == doctest::Approx(0.0));
    CHECK(tiny[1] == doctest::Approx(0.0));
}

TEST_CASE("moment map crosses the allowed-region boundary consistently") {
    // A_P for the square example is |z1|^2 - 1 < |z2|^2 < |z1|^2 + 1
    const auto Q = named_polytope("square");
    for (double d : {-0.2, -0.05, 0.05, 0.2}) {
        const CVec z = zpt(1.0, std::sqrt(2.0 + d));  // w2 = 2 + d vs w1 + 1 = 2
        CHECK(allowed_region(Q, 2, z) == (d < 0));
    }
}

TEST_CASE("allowed region examples for the square") {
    const auto Q = named_polytope("square");
    CHECK(allowed_region(Q, 2, zpt(1, 1)));
    CHECK_FALSE(allowed_region(Q, 2, zpt(10, 0.1)));
    // exact boundary |z2|^2 = |z1|^2 + 1 is not interior
    CHECK_FALSE(allowed_region(Q, 2, zpt(1, std::sqrt(2.0))));
}

TEST_CASE("moment fit: interior fixed point") {
    const auto Q = named_polytope("square");
    const auto fit = moment_fit(Q, 2, zpt(1, 1));
    CHECK(fit.face_dim == 2);
    CHECK(fit.tau[0] == 0.0);
    CHECK(fit.tau[1] == 0.0);
    CHECK(fit.r[0] == doctest::Approx(2.0 / 3.0));
    CHECK(fit.residual < 1e-8);
}

TEST_CASE("moment fit lands on the top edge for the outer branch") {
    const auto Q = named_polytope("square");
    const CVec z = zpt(1, 2);  // |z2|^2 = 4 >= |z1|^2 + 1 = 2
    const auto fit = moment_fit(Q, 2, z);
    CHECK(fit.face_dim == 1);
    CHECK(fit.r[1] == doctest::Approx(1.0).epsilon(1e-9));   // on {x2 = 1}
    CHECK(fit.r[0] == doctest::Approx(0.5).epsilon(1e-9));   // w1/(1+w1)
    CHECK(fit.tau[0] == doctest::Approx(0.0));
    CHECK(fit.tau[1] == doctest::Approx(std::log(2.0)).epsilon(1e-9));  // log(w2/(1+w1))
    CHECK(fit.residual < 1e-8);
    CHECK(in_normal_cone(Q, fit.r, fit.tau));
}

TEST_CASE("moment fit in one variable") {
    const auto I = named_polytope("interval");
    SUBCASE("p = 1: every point is allowed and r tends to 1") {
        for (double r : {10.0, 1e3}) {
            const auto fit = moment_fit(I, 1, {Cplx(r, 0)});
            CHECK(fit.face_dim == 1);
            CHECK(fit.tau[0] == 0.0);
            CHECK(fit.r[0] == doctest::Approx(r * r / (1 + r * r)));
        }
        // at |z| = 1e6 the moment map sits within 1e-12 of the boundary, so
        // the face representation may be returned; r -> 1 and V is unharmed
        // because <r,tau> compensates the saturated log term
        const auto fit = moment_fit(I, 1, {Cplx(1e6, 0)});
        CHECK(fit.r[0] == doctest::Approx(1.0));
        const auto ev = ExtremalEvaluator::fs_moment(I, 1);
        CHECK(v_extremal(ev, {Cplx(1e6, 0)}) ==
              doctest::Approx(0.5 * std::log1p(1e12)).epsilon(1e-12));
    }
    SUBCASE("p = 2: the endpoint fit gives tau = 2 log|z| exactly") {
        for (double r : {2.0, 10.0, 1e4}) {
            const auto fit = moment_fit(I, 2, {Cplx(r, 0)});
            CHECK(fit.face_dim == 0);
            CHECK(fit.r[0] == doctest::Approx(1.0));
            CHECK(fit.tau[0] == doctest::Approx(2 * std::log(r)).epsilon(1e-8));
        }
    }
}

TEST_CASE("v_extremal closed forms") {
    const auto Q = named_polytope("square");
    const auto ev = ExtremalEvaluator::fs_moment(Q, 2);
    // z = (1,2): outer branch value (5/2) log 2
    CHECK(v_extremal(ev, zpt(1, 2)) == doctest::Approx(2.5 * std::log(2.0)).epsilon(1e-10));
    // z = (1,1) in the allowed region: q = log(1+|z|^2) = log 3
    CHECK(v_extremal(ev, zpt(1, 1)) == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    // torus closed form
    const auto tor = ExtremalEvaluator::torus(Q);
    CHECK(v_extremal(tor, zpt(2, 3)) == doctest::Approx(std::log(6.0)));
}

TEST_CASE("moment-map and Legendre-dual routes agree") {
    const auto Q = named_polytope("square");
    const auto evm = ExtremalEvaluator::fs_moment(Q, 2);
    const auto evd = ExtremalEvaluator::fs_dual(Q, 2);
    // 400-point grid spanning both the allowed region and the outer branches
    RngStream rng(515, 0);
    for (uint64_t i = 0; i < 400; ++i) {
        const double r1 = std::exp(2.5 * (rng.uniform(3 * i) - 0.5));
        const double r2 = std::exp(2.5 * (rng.uniform(3 * i + 1) - 0.5));
        const CVec z{std::polar(r1, 2 * M_PI * rng.uniform(3 * i + 2)), std::polar(r2, 1.0)};
        const double vm = v_extremal(evm, z);
        const double vd = v_extremal(evd, z);
        CHECK(std::abs(vm - vd) < 1e-6);
        // both must match the published closed form
        CHECK(vm == doctest::Approx(v_square_closed_form(z)).epsilon(1e-8));
    }
}

TEST_CASE("v_extremal is dominated by q and by H_P plus a constant") {
    const auto Q = named_polytope("square");
    const auto ev = ExtremalEvaluator::fs_moment(Q, 2);
    RngStream rng(616, 0);
    double worst_gap = -1e300;
    for (int i = 0; i < 300; ++i) {
        const double r1 = std::exp(3.0 * (rng.uniform(2 * i) - 0.5));
        const double r2 = std::exp(3.0 * (rng.uniform(2 * i + 1) - 0.5));
        const CVec z = zpt(r1, r2);
        const double v = v_extremal(ev, z);
        const double q = std::log1p(r1 * r1 + r2 * r2);
        CHECK(v <= q + 1e-8);
        worst_gap = std::max(worst_gap, v - h_p(Q, z));
    }
    CHECK(worst_gap < std::log(4.0) + 1e-9);  // V <= H_P + p log 2 for the square
}

TEST_CASE("torus V equals q = 0 on the torus itself") {
    const auto Q = named_polytope("square");
    const auto tor = ExtremalEvaluator::torus(Q);
    for (double th : {0.0, 0.7, 2.9})
        CHECK(v_extremal(tor, {std::polar(1.0, th), std::polar(1.0, 2 * th)}) ==
              doctest::Approx(0.0));
}

TEST_CASE("monotonicity of V in the polytope") {
    SUBCASE("two variables: simplex inside square") {
        const auto S = ExtremalEvaluator::fs_moment(named_polytope("simplex2"), 1);
        const auto Q = ExtremalEvaluator::fs_moment(named_polytope("square"), 2);
        const auto Sd = ExtremalEvaluator::fs_dual(named_polytope("simplex2"), 1);
        const auto Qd = ExtremalEvaluator::fs_dual(named_polytope("square"), 2);
        RngStream rng(717, 0);
        for (int i = 0; i < 60; ++i) {
            const double r1 = std::exp(2.0 * (rng.uniform(2 * i) - 0.5));
            const double r2 = std::exp(2.0 * (rng.uniform(2 * i + 1) - 0.5));
            const CVec z = zpt(r1, r2);
            CHECK(v_extremal(S, z) <= v_extremal(Q, z) + 1e-8);
            CHECK(v_extremal(Sd, z) <= v_extremal(Qd, z) + 1e-8);
        }
    }
    SUBCASE("one variable: [0,1] inside [0,2]") {
        const auto A = ExtremalEvaluator::fs_moment(named_polytope("interval"), 2);
        const auto B = ExtremalEvaluator::fs_moment(hull({{0}, {2}}), 2);
        for (double r : {0.2, 0.7, 1.0, 2.0, 9.0})
            CHECK(v_extremal(A, {Cplx(r, 0)}) <= v_extremal(B, {Cplx(r, 0)}) + 1e-9);
    }
}

TEST_CASE("limit density values") {
    // the allowed-region density carries the factor p^2 = 4 so that its
    // total mass is the mixed volume; the mass identity pins the constant
    CHECK(ma_density_fssquare(zpt(1, 1)) ==
          doctest::Approx(8.0 / (27.0 * M_PI * M_PI)).epsilon(1e-12));
    CHECK(ma_density_fssquare(zpt(10, 0.1)) == 0.0);
    const auto Q = named_polytope("square");
    CHECK(ma_density_torus_angular({Q, Q}) == doctest::Approx(2.0 / std::pow(2 * M_PI, 2)));
    const auto S = named_polytope("simplex2");
    CHECK(ma_density_torus_angular({S, S}) == doctest::Approx(1.0 / std::pow(2 * M_PI, 2)));
}

TEST_CASE("support localization: positive density implies V = q") {
    const auto Q = named_polytope("square");
    const auto ev = ExtremalEvaluator::fs_moment(Q, 2);
    int positive = 0;
    RngStream rng(808, 0);
    for (int i = 0; i < 1000; ++i) {
        const double r1 = std::exp(2.0 * (rng.uniform(2 * i) - 0.5));
        const double r2 = std::exp(2.0 * (rng.uniform(2 * i + 1) - 0.5));
        const CVec z = zpt(r1, r2);
        if (ma_density_fssquare(z) > 0) {
            ++positive;
            const double q = std::log1p(r1 * r1 + r2 * r2);
            CHECK(std::abs(v_extremal(ev, z) - q) < 1e-8);
        }
    }
    CHECK(positive > 100);  // the grid hits the allowed region
}

TEST_CASE("bergman convergence on the torus matches the geometric series") {
    const auto P = named_polytope("interval");
    auto family = [&](long long N) { return torus_basis(P, N); };
    const std::vector<CVec> grid{{Cplx(2, 0)}};
    auto V = [&](const CVec& z) { return h_p(P, z); };
    const auto rep = bergman_convergence(family, V, grid, {5, 10, 20, 40}, "|z| = 2");
    for (size_t i = 0; i < rep.Ns.size(); ++i) {
        const long long N = rep.Ns[i];
        double s = 0;
        for (long long j = 0; j <= N; ++j) s += std::pow(4.0, double(j));
        const double analytic = std::abs(std::log(s) / (2.0 * N) - std::log(2.0));
        CHECK(rep.errors[i] == doctest::Approx(analytic).epsilon(1e-12));
        if (i) CHECK(rep.errors[i] < rep.errors[i - 1]);
    }
    CHECK(rep.monotone_trend);
    CHECK(rep.fitted_rate < -0.8);  // ~ 1/N decay
}

TEST_CASE("bergman convergence on the unit torus gives log(d_N)/(2N)") {
    const auto P = named_polytope("square");
    auto family = [&](long long N) { return torus_basis(P, N); };
    std::vector<CVec> grid{{std::polar(1.0, 0.3), std::polar(1.0, 1.8)}};
    auto V = [&](const CVec& z) { return h_p(P, z); };
    const auto rep = bergman_convergence(family, V, grid, {2, 4, 8}, "unit torus");
    for (size_t i = 0; i < rep.Ns.size(); ++i) {
        const long long N = rep.Ns[i];
        const double want = std::log(double((N + 1) * (N + 1))) / (2.0 * N);
        CHECK(rep.errors[i] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("bergman convergence for the FS square on an allowed grid") {
    const auto Q = named_polytope("square");
    const auto evm = ExtremalEvaluator::fs_moment(Q, 2);
    auto family = [&](long long N) { return fs_basis(Q, N, 2); };
    const auto grid = allowed_grid_square(15);
    auto V = [&](const CVec& z) { return v_extremal(evm, z); };
    const auto rep = bergman_convergence(family, V, grid, {2, 4, 8}, "allowed grid");
    CHECK(rep.errors[1] < rep.errors[0]);
    CHECK(rep.errors[2] < rep.errors[1]);
}
