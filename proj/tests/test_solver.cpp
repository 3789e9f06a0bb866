#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bklab/solver.hpp"

using namespace bklab;

namespace {

bool contains_root(const ZeroSet& zeros, std::initializer_list<Cplx> want, double tol = 1e-7) {
    const CVec w(want);
    for (const auto& z : zeros.points) {
        double d = 0;
        for (size_t i = 0; i < w.size(); ++i)
            d = std::max(d, std::abs(z[i] - w[i]) / (1 + std::abs(w[i])));
        if (d < tol) return true;
    }
    return false;
}

std::shared_ptr<const OrthoBasis> square_torus_basis(long long N) {
    return std::make_shared<const OrthoBasis>(torus_basis(named_polytope("square"), N));
}

}  // namespace

TEST_CASE("univariate: z^2 - 1") {
    const auto f = make_laurent({{{2}, 1.0}, {{0}, -1.0}});
    const auto zeros = roots_univariate(f);
    REQUIRE(zeros.points.size() == 2);
    CHECK(contains_root(zeros, {Cplx(1, 0)}));
    CHECK(contains_root(zeros, {Cplx(-1, 0)}));
}

TEST_CASE("univariate: z - 1/z clears the pole and drops the origin") {
    const auto f = make_laurent({{{1}, 1.0}, {{-1}, -1.0}});
    const auto zeros = roots_univariate(f);
    REQUIRE(zeros.points.size() == 2);
    CHECK(contains_root(zeros, {Cplx(1, 0)}));
    CHECK(contains_root(zeros, {Cplx(-1, 0)}));
}

TEST_CASE("univariate error paths") {
    auto zero = make_laurent({{{0}, 0.0}, {{3}, 0.0}});
    CHECK_THROWS_AS(roots_univariate(zero), std::invalid_argument);
    auto tiny_lead = make_laurent({{{0}, 1.0}, {{2}, 1e-305}});
    CHECK_THROWS_AS(roots_univariate(tiny_lead), std::invalid_argument);
}

TEST_CASE("univariate: random Kac polynomial concentrates near the circle") {
    const auto basis =
        std::make_shared<const OrthoBasis>(torus_basis(named_polytope("interval"), 50));
    int total = 0, near = 0;
    for (uint64_t trial = 0; trial < 10; ++trial) {
        const auto f = sample_polynomial(basis, CoefficientLaw::gaussian(), 314, trial);
        const auto zeros = roots_univariate(f);
        CHECK(zeros.points.size() == 50);  // degree = length(NP) = 50
        for (size_t i = 0; i < zeros.points.size(); ++i) {
            CHECK(zeros.residuals[i] < 1e-8);
            ++total;
            if (std::abs(std::abs(zeros.points[i][0]) - 1.0) < 0.2) ++near;
        }
    }
    CHECK(double(near) / total >= 0.9);
}

TEST_CASE("univariate: roots of a product are the union of roots") {
    RngStream rng(5150, 0);
    for (int rep = 0; rep < 10; ++rep) {
        // two random cubics, product formed by convolution
        std::vector<Cplx> a(4), b(4);
        for (int i = 0; i < 4; ++i) {
            a[i] = rng.complex_gaussian(8 * rep + i);
            b[i] = rng.complex_gaussian(8 * rep + 4 + i);
        }
        std::vector<Cplx> prod(7, Cplx(0));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) prod[i + j] += a[i] * b[j];
        auto terms = [](const std::vector<Cplx>& c) {
            std::vector<std::pair<LatticePoint, Cplx>> t;
            for (long long k = 0; k < (long long)c.size(); ++k) t.push_back({{k}, c[k]});
            return t;
        };
        const auto roots_f = roots_univariate(make_laurent(terms(a)));
        const auto roots_g = roots_univariate(make_laurent(terms(b)));
        const auto roots_fg = roots_univariate(make_laurent(terms(prod)));
        CHECK(roots_fg.points.size() == roots_f.points.size() + roots_g.points.size());
        for (const auto& z : roots_f.points) CHECK(contains_root(roots_fg, {z[0]}, 1e-5));
        for (const auto& z : roots_g.points) CHECK(contains_root(roots_fg, {z[0]}, 1e-5));
    }
}

TEST_CASE("bivariate: z1 z2 = 1, z1 = 2") {
    const auto f = make_laurent({{{1, 1}, 1.0}, {{0, 0}, -1.0}});
    const auto g = make_laurent({{{1, 0}, 1.0}, {{0, 0}, -2.0}});
    const auto zeros = solve_bivariate(f, g);
    REQUIRE(zeros.points.size() == 1);
    CHECK(contains_root(zeros, {Cplx(2, 0), Cplx(0.5, 0)}));
}

TEST_CASE("bivariate: symmetric quadratic pair") {
    const auto f = make_laurent({{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, -3.0}});
    const auto g = make_laurent({{{1, 1}, 1.0}, {{0, 0}, -2.0}});
    const auto zeros = solve_bivariate(f, g);
    REQUIRE(zeros.points.size() == 2);
    CHECK(contains_root(zeros, {Cplx(1, 0), Cplx(2, 0)}));
    CHECK(contains_root(zeros, {Cplx(2, 0), Cplx(1, 0)}));
}

TEST_CASE("bivariate: generic gaussian square system at N = 1") {
    const auto basis = square_torus_basis(1);
    const auto f = sample_polynomial(basis, CoefficientLaw::gaussian(), 11, 1);
    const auto g = sample_polynomial(basis, CoefficientLaw::gaussian(), 11, 2);
    const auto zeros = solve_bivariate(f, g);
    const auto rep = verify_count(zeros, {basis->P, basis->P}, 1);
    CHECK(rep.expected == 2);
    CHECK(rep.match);
    for (double r : zeros.residuals) CHECK(r < 1e-8);
}

TEST_CASE("bivariate: count reproduction over random square systems") {
    int exact = 0;
    const int trials = 30;
    for (long long N : {1LL, 2LL, 3LL}) {
        const auto basis = square_torus_basis(N);
        for (int trial = 0; trial < trials; ++trial) {
            const auto f =
                sample_polynomial(basis, CoefficientLaw::gaussian(), 1000 + N, 2 * trial);
            const auto g =
                sample_polynomial(basis, CoefficientLaw::gaussian(), 1000 + N, 2 * trial + 1);
            const auto zeros = solve_bivariate(f, g);
            const auto rep = verify_count(zeros, {basis->P, basis->P}, N);
            CHECK(rep.expected == 2 * N * N);
            if (rep.match) ++exact;
            else CHECK((rep.discarded > 0 || rep.suspects > 0));  // honest diagnostics
            for (double r : zeros.residuals) CHECK(r < 1e-8);
        }
    }
    CHECK(exact >= int(0.95 * 3 * trials));
}

TEST_CASE("verify_count expected values") {
    ZeroSet empty;
    const auto S = named_polytope("simplex2");
    const auto Q = named_polytope("square");
    const auto T = named_polytope("trapezoid5");
    CHECK(verify_count(empty, {Q, Q}, 3).expected == 18);
    CHECK(verify_count(empty, {S, S}, 2).expected == 4);
    CHECK(verify_count(empty, {T, T}, 1).expected == 6);
    CHECK_FALSE(verify_count(empty, {Q, Q}, 3).match);
}

TEST_CASE("bivariate: torus rotation equivariance") {
    // zeros of f(lambda z1, z2) are the zeros of f(z1, z2) with z1 -> z1/lambda
    const auto basis = square_torus_basis(2);
    const auto f = sample_polynomial(basis, CoefficientLaw::gaussian(), 77, 0);
    const auto g = sample_polynomial(basis, CoefficientLaw::gaussian(), 77, 1);
    const Cplx lam = std::polar(1.0, 1.234567);
    auto rotate = [&](const RandomPolynomial& h) {
        RandomPolynomial r = h;
        for (int j = 0; j < r.a.size(); ++j)
            r.a[j] *= std::pow(lam, double(h.basis->exponents[j][0]));
        return r;
    };
    const auto base = solve_bivariate(f, g);
    const auto rot = solve_bivariate(rotate(f), rotate(g));
    REQUIRE(base.points.size() == rot.points.size());
    for (const auto& z : base.points) {
        bool found = false;
        for (const auto& w : rot.points)
            if (std::abs(w[0] - z[0] / lam) < 1e-8 * (1 + std::abs(z[0])) &&
                std::abs(w[1] - z[1]) < 1e-8 * (1 + std::abs(z[1]))) {
                found = true;
                break;
            }
        CHECK(found);
    }
}

TEST_CASE("bivariate: degenerate system is flagged for resampling") {
    const auto basis = square_torus_basis(1);
    const auto f = sample_polynomial(basis, CoefficientLaw::gaussian(), 3, 0);
    CHECK_THROWS_AS(solve_bivariate(f, f), ResultantDegenerate);
}

TEST_CASE("amoeba samples") {
    SUBCASE("line z1 + z2 = 1") {
        const auto f = make_laurent({{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, -1.0}});
        const auto pts = amoeba_sample(f, {0.5}, 8);
        bool found = false;
        for (const auto& p : pts)
            if (std::abs(p[0] - std::log(0.5)) < 1e-12 && std::abs(p[1] - std::log(0.5)) < 1e-9)
                found = true;
        CHECK(found);  // z1 = 1/2 gives z2 = 1/2 at angle 0
    }
    SUBCASE("hyperbola z1 z2 = 1 lies on the anti-diagonal") {
        const auto f = make_laurent({{{1, 1}, 1.0}, {{0, 0}, -1.0}});
        for (const auto& p : amoeba_sample(f, {0.25, 1.0, 4.0}, 16))
            CHECK(p[0] + p[1] == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("random square-polytope curve has a bounded amoeba sample") {
        const auto basis = square_torus_basis(3);
        const auto f = sample_polynomial(basis, CoefficientLaw::gaussian(), 2718, 0);
        std::vector<double> moduli;
        for (int k = -12; k <= 12; ++k) moduli.push_back(std::exp(0.25 * k));
        const auto pts = amoeba_sample(f, moduli, 32);
        CHECK(pts.size() > 100);
        for (const auto& p : pts) {
            CHECK(std::abs(p[0]) < 12);
            CHECK(std::abs(p[1]) < 12);
        }
    }
}

TEST_CASE("poly_roots agreement between companion and Aberth paths") {
    // same polynomial solved at degree 40 (companion) and embedded at degree
    // 80 (Aberth) via squaring: root sets must agree
    RngStream rng(13, 99);
    std::vector<Cplx> c(41);
    for (int i = 0; i <= 40; ++i) c[i] = rng.complex_gaussian(i);
    std::vector<Cplx> c2(81, Cplx(0));
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) c2[i + j] += c[i] * c[j];
    auto r1 = poly_roots(c);   // degree 40 -> companion
    auto r2 = poly_roots(c2);  // degree 80 -> Aberth, every root doubled
    CHECK(r1.size() == 40);
    CHECK(r2.size() == 80);
    for (const auto& z : r1) {
        int close = 0;
        for (const auto& w : r2)
            if (std::abs(w - z) < 1e-5 * (1 + std::abs(z))) ++close;
        CHECK(close >= 2);
    }
}
