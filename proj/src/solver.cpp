#include "bklab/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <limits>
#include <numeric>

namespace bklab {

namespace {

constexpr double kToricLow = 1e-10;
constexpr double kToricHigh = 1e10;
constexpr double kDedupTol = 1e-6;
constexpr double kResidualGate = 1e-8;

// ---------- univariate machinery ----------
// templated on the real type so the resultant pipeline can run in long
// double when the reconstruction needs the extra mantissa

template <typename Real>
struct StrippedT {
    std::vector<std::complex<Real>> c;
    int zeros_at_origin = 0;
};

using Stripped = StrippedT<double>;

template <typename Real>
StrippedT<Real> strip_poly_t(const std::vector<std::complex<Real>>& c, Real rel_tol) {
    Real mx = 0;
    for (const auto& v : c) mx = std::max(mx, std::abs(v));
    StrippedT<Real> s;
    if (mx == Real(0)) return s;
    size_t lo = 0, hi = c.size();
    while (lo < hi && std::abs(c[lo]) <= rel_tol * mx) ++lo;
    while (hi > lo && std::abs(c[hi - 1]) <= rel_tol * mx) --hi;
    s.c.assign(c.begin() + lo, c.begin() + hi);
    s.zeros_at_origin = int(lo);
    return s;
}

Stripped strip_poly(const std::vector<Cplx>& c, double rel_tol) {
    return strip_poly_t<double>(c, rel_tol);
}

// p(z)/p'(z) evaluated stably: for |z| > 1 the reversed polynomial at 1/z,
// so Horner never overflows
template <typename Real>
std::complex<Real> newton_ratio_t(const std::vector<std::complex<Real>>& c,
                                  const std::complex<Real>& z) {
    using C = std::complex<Real>;
    const int d = int(c.size()) - 1;
    if (std::abs(z) <= Real(1)) {
        C p = c[d], dp = 0;
        for (int k = d - 1; k >= 0; --k) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        return p / dp;
    }
    const C u = Real(1) / z;
    C q = c[0], dq = 0;  // q(u) = sum c[d-k] u^k
    for (int k = 1; k <= d; ++k) {
        dq = dq * u + q;
        q = q * u + c[k];
    }
    // p = z^d q(u); p' = z^{d-1} (d q - u q')
    return z * q / (Real(d) * q - u * dq);
}

Cplx newton_ratio(const std::vector<Cplx>& c, const Cplx& z) {
    return newton_ratio_t<double>(c, z);
}

// Aberth-Ehrlich with Bini-style initial radii from the upper convex hull
// of (k, log|c_k|)
template <typename Real>
std::vector<std::complex<Real>> aberth_roots_t(const std::vector<std::complex<Real>>& c) {
    using C = std::complex<Real>;
    const Real eps = std::numeric_limits<Real>::epsilon();
    const int d = int(c.size()) - 1;
    std::vector<Real> lc(d + 1);
    for (int k = 0; k <= d; ++k)
        lc[k] = std::abs(c[k]) > Real(0) ? std::log(std::abs(c[k])) : Real(-1e30);
    std::vector<int> hullk;
    for (int k = 0; k <= d; ++k) {
        while (hullk.size() >= 2) {
            int a = hullk[hullk.size() - 2], b = hullk.back();
            if ((lc[b] - lc[a]) * (k - a) <= (lc[k] - lc[a]) * (b - a))
                hullk.pop_back();
            else
                break;
        }
        hullk.push_back(k);
    }
    std::vector<C> z;
    z.reserve(d);
    int placed = 0;
    for (size_t s = 0; s + 1 < hullk.size(); ++s) {
        const int k1 = hullk[s], k2 = hullk[s + 1];
        const Real r =
            std::exp(std::clamp((lc[k1] - lc[k2]) / Real(k2 - k1), Real(-27.6), Real(27.6)));
        for (int i = 0; i < k2 - k1; ++i) {
            const Real th = Real(2.0 * M_PI) * Real(placed + 0.5) / Real(d) + Real(0.6180339887);
            z.push_back(r * C{std::cos(th), std::sin(th)});
            ++placed;
        }
    }
    std::vector<char> frozen(d, 0);
    for (int sweep = 0; sweep < 240; ++sweep) {
        Real worst = 0;
        for (int k = 0; k < d; ++k) {
            if (frozen[k]) continue;
            const C w = newton_ratio_t<Real>(c, z[k]);
            C s = 0;
            for (int j = 0; j < d; ++j)
                if (j != k) s += Real(1) / (z[k] - z[j]);
            C corr = w / (Real(1) - w * s);
            if (!std::isfinite(double(corr.real())) || !std::isfinite(double(corr.imag())))
                corr = w;
            z[k] -= corr;
            const Real az = std::abs(z[k]);
            if (az > Real(1e13)) z[k] *= Real(1e13) / az;
            if (az < Real(1e-13) && az > Real(0)) z[k] *= Real(1e-13) / az;
            const Real rel = std::abs(corr) / (Real(1) + std::abs(z[k]));
            if (rel < Real(8) * eps) frozen[k] = 1;
            worst = std::max(worst, rel);
        }
        if (worst < Real(8) * eps) break;
    }
    return z;
}

std::vector<Cplx> aberth_roots(const std::vector<Cplx>& c) { return aberth_roots_t<double>(c); }

void balance_matrix(Eigen::MatrixXcd& A) {
    const int n = int(A.rows());
    for (int pass = 0; pass < 20; ++pass) {
        bool converged = true;
        for (int i = 0; i < n; ++i) {
            double r = 0, col = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                r += std::abs(A(i, j));
                col += std::abs(A(j, i));
            }
            if (r == 0 || col == 0) continue;
            double f = 1;
            while (col < r / 2) { col *= 2; r /= 2; f *= 2; }
            while (col > 2 * r) { col /= 2; r *= 2; f /= 2; }
            if (f != 1) {
                A.row(i) /= f;
                A.col(i) *= f;
                converged = false;
            }
        }
        if (converged) break;
    }
}

std::vector<Cplx> companion_roots(const std::vector<Cplx>& c) {
    const int d = int(c.size()) - 1;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) A(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) A(i, d - 1) = -c[i] / c[d];
    balance_matrix(A);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    std::vector<Cplx> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

}  // namespace

std::vector<Cplx> poly_roots(const std::vector<Cplx>& coeffs) {
    const Stripped s = strip_poly(coeffs, 1e-14);
    const int d = int(s.c.size()) - 1;
    std::vector<Cplx> roots;
    if (d < 1) return roots;
    if (d == 1) {
        roots.push_back(-s.c[0] / s.c[1]);
    } else {
        roots = d <= 64 ? companion_roots(s.c) : aberth_roots(s.c);
        for (auto& z : roots)  // Newton polish on the stripped polynomial
            for (int it = 0; it < 3; ++it) {
                const Cplx w = newton_ratio(s.c, z);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) break;
                z -= w;
            }
    }
    return roots;
}

RandomPolynomial make_laurent(const std::vector<std::pair<LatticePoint, Cplx>>& terms) {
    if (terms.empty()) throw std::invalid_argument("make_laurent: no terms");
    std::vector<LatticePoint> exps;
    for (const auto& t : terms) exps.push_back(t.first);
    auto basis = std::make_shared<OrthoBasis>(torus_basis(hull(exps), 1));
    RandomPolynomial f;
    f.basis = basis;
    f.a = Eigen::VectorXcd::Zero(basis->d());
    for (const auto& [J, coef] : terms) {
        const auto it = std::lower_bound(basis->exponents.begin(), basis->exponents.end(), J);
        f.a[it - basis->exponents.begin()] += coef;
    }
    return f;
}

// ---------- univariate solve ----------

ZeroSet roots_univariate(const RandomPolynomial& f) {
    if (f.m() != 1) throw std::invalid_argument("roots_univariate: requires m = 1");
    const Eigen::VectorXcd b = dense_coefficients(f);
    const auto& exps = f.basis->exponents;
    const int d = int(exps.size());
    if (b.cwiseAbs().maxCoeff() == 0) throw std::invalid_argument("roots_univariate: zero polynomial");

    // clear z^{-minexp}: coefficient array indexed by exponent - minexp
    const long long minexp = exps.front()[0];
    const long long maxexp = exps.back()[0];
    std::vector<Cplx> c(size_t(maxexp - minexp + 1), Cplx(0));
    for (int j = 0; j < d; ++j) c[size_t(exps[j][0] - minexp)] = b[j];
    if (std::abs(c.back()) < 1e-300)
        throw std::invalid_argument("roots_univariate: leading coefficient below 1e-300");

    ZeroSet out;
    std::vector<Cplx> roots = poly_roots(c);
    double cmax = 0;
    for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
    for (const auto& z : roots) {
        const double az = std::abs(z);
        if (az < kToricLow || az > kToricHigh) {
            ++out.discarded;
            continue;
        }
        // relative residual against the positive envelope
        const ScaledValue sv = evaluate_scaled(f, {z});
        const double res = std::abs(sv.value) / (sv.envelope + 1e-300);
        if (res < kResidualGate) {
            out.points.push_back({z});
            out.residuals.push_back(res);
        } else {
            ++out.discarded;
        }
    }
    // dedup flags for near-coincident roots
    out.multiplicity_suspect.assign(out.points.size(), 0);
    for (size_t i = 0; i < out.points.size(); ++i)
        for (size_t j = i + 1; j < out.points.size(); ++j) {
            const double dist = std::abs(out.points[i][0] - out.points[j][0]) /
                                (1.0 + std::abs(out.points[i][0]) + std::abs(out.points[j][0]));
            if (dist < 10 * kDedupTol) out.multiplicity_suspect[i] = out.multiplicity_suspect[j] = 1;
        }
    return out;
}

// ---------- bivariate solve ----------

namespace {

// dense coefficient grid c(i,j) for z1^i z2^j after clearing z^{-min}
struct BivGrid {
    Eigen::MatrixXcd c;  // (deg1+1) x (deg2+1)
    long long min1 = 0, min2 = 0;

    int deg1() const { return int(c.rows()) - 1; }
    int deg2() const { return int(c.cols()) - 1; }
};

BivGrid to_grid(const RandomPolynomial& f) {
    const Eigen::VectorXcd b = dense_coefficients(f);
    const auto& exps = f.basis->exponents;
    long long lo1 = exps[0][0], hi1 = exps[0][0], lo2 = exps[0][1], hi2 = exps[0][1];
    for (const auto& J : exps) {
        lo1 = std::min(lo1, J[0]); hi1 = std::max(hi1, J[0]);
        lo2 = std::min(lo2, J[1]); hi2 = std::max(hi2, J[1]);
    }
    BivGrid g;
    g.min1 = lo1;
    g.min2 = lo2;
    g.c = Eigen::MatrixXcd::Zero(hi1 - lo1 + 1, hi2 - lo2 + 1);
    for (int j = 0; j < int(exps.size()); ++j) g.c(exps[j][0] - lo1, exps[j][1] - lo2) += b[j];
    const double mx = g.c.cwiseAbs().maxCoeff();
    if (mx == 0) throw std::invalid_argument("solve_bivariate: zero polynomial");
    g.c /= mx;  // zeros in (C*)^2 unchanged
    return g;
}

// trim rows/cols that are numerically zero so degrees are honest
void trim_grid(BivGrid& g) {
    const double tol = 1e-14 * g.c.cwiseAbs().maxCoeff();
    int r0 = 0, r1 = g.deg1(), c0 = 0, c1 = g.deg2();
    auto row_mag = [&](int r) { return g.c.row(r).cwiseAbs().maxCoeff(); };
    auto col_mag = [&](int c) { return g.c.col(c).cwiseAbs().maxCoeff(); };
    while (r1 > r0 && row_mag(r1) <= tol) --r1;
    while (r0 < r1 && row_mag(r0) <= tol) ++r0;
    while (c1 > c0 && col_mag(c1) <= tol) --c1;
    while (c0 < c1 && col_mag(c0) <= tol) ++c0;
    g.min1 += r0;
    g.min2 += c0;
    g.c = g.c.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1).eval();
}

// scaled evaluation of the grid polynomial and its partials at z in (C*)^2
struct GridEval {
    Cplx f, f1, f2;     // values scaled by e^{-M}
    double envelope;    // sum |c_ij z1^i z2^j| e^{-M}
    double log_scale;
};

GridEval eval_grid(const BivGrid& g, const Cplx& z1, const Cplx& z2) {
    const Cplx l1 = std::log(z1), l2 = std::log(z2);
    const int d1 = g.deg1(), d2 = g.deg2();
    double M = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= d1; ++i)
        for (int j = 0; j <= d2; ++j) {
            const double a = std::abs(g.c(i, j));
            if (a == 0) continue;
            M = std::max(M, std::log(a) + i * l1.real() + j * l2.real());
        }
    GridEval e{};
    e.log_scale = M;
    for (int i = 0; i <= d1; ++i)
        for (int j = 0; j <= d2; ++j) {
            if (g.c(i, j) == Cplx(0)) continue;
            const double la = std::log(std::abs(g.c(i, j)));
            const Cplx ph = g.c(i, j) / std::abs(g.c(i, j));
            const Cplx t = ph * std::exp(Cplx(la, 0) + double(i) * l1 + double(j) * l2 - M);
            e.f += t;
            e.envelope += std::abs(t);
            e.f1 += double(i) * t;  // z1 * df/dz1, scaled
            e.f2 += double(j) * t;  // z2 * df/dz2, scaled
        }
    e.f1 /= z1;
    e.f2 /= z2;
    return e;
}

double rel_residual(const BivGrid& g, const Cplx& z1, const Cplx& z2) {
    const GridEval e = eval_grid(g, z1, z2);
    return std::abs(e.f) / (e.envelope + 1e-300);
}

// damped 2x2 Newton on (f,g); returns the refined point
std::array<Cplx, 2> newton_refine(const BivGrid& F, const BivGrid& G, Cplx z1, Cplx z2) {
    for (int it = 0; it < 20; ++it) {
        const GridEval ef = eval_grid(F, z1, z2);
        const GridEval eg = eval_grid(G, z1, z2);
        const Cplx det = ef.f1 * eg.f2 - ef.f2 * eg.f1;
        if (std::abs(det) < 1e-280) break;
        Cplx d1 = (ef.f * eg.f2 - ef.f2 * eg.f) / det;
        Cplx d2 = (ef.f1 * eg.f - ef.f * eg.f1) / det;
        const double r0 = std::abs(ef.f) / (ef.envelope + 1e-300) +
                          std::abs(eg.f) / (eg.envelope + 1e-300);
        double step = 1.0;
        Cplx n1 = z1, n2 = z2;
        for (int bt = 0; bt < 8; ++bt) {
            n1 = z1 - step * d1;
            n2 = z2 - step * d2;
            if (n1 != Cplx(0) && n2 != Cplx(0)) {
                const double r1 = rel_residual(F, n1, n2) + rel_residual(G, n1, n2);
                if (r1 <= r0 || r1 < 1e-14) break;
            }
            step *= 0.5;
        }
        const double move = std::abs(n1 - z1) / (1 + std::abs(z1)) +
                            std::abs(n2 - z2) / (1 + std::abs(z2));
        z1 = n1;
        z2 = n2;
        if (move < 1e-15) break;
    }
    return {z1, z2};
}

// coefficients of f(z1fixed, .) as a polynomial in z2, in long double to
// survive |z1|^deg1 at the toric extremes
std::vector<Cplx> slice_z2(const BivGrid& g, const Cplx& z1) {
    using CLD = std::complex<long double>;
    const int d1 = g.deg1(), d2 = g.deg2();
    const CLD z(z1.real(), z1.imag());
    std::vector<CLD> acc(d2 + 1, CLD(0));
    CLD p(1);
    for (int i = 0; i <= d1; ++i) {
        for (int j = 0; j <= d2; ++j)
            acc[j] += CLD(g.c(i, j).real(), g.c(i, j).imag()) * p;
        p *= z;
    }
    long double mx = 0;
    for (const auto& v : acc) mx = std::max(mx, std::abs(v));
    std::vector<Cplx> out(d2 + 1);
    if (mx == 0) return out;
    for (int j = 0; j <= d2; ++j)
        out[j] = Cplx(double(acc[j].real() / mx), double(acc[j].imag() / mx));
    return out;
}

bool on_torus_side(const Cplx& z) {
    const double a = std::abs(z);
    return a >= kToricLow && a <= kToricHigh;
}

// Sylvester determinant of (f, g) in z2 sampled on a circle of radius r in
// the scaled variable w = z1 / r, interpolated by inverse DFT.  One radius
// resolves the roots with |z1| near r; the winding number of the determinant
// around the circle counts all resultant roots inside exactly, which steers
// the radius refinement in solve_bivariate.
struct RadiusScan {
    std::vector<Cplx> roots;  // back in z1 scale
    long long inside = 0;     // winding number = resultant roots with |z1| < r
    int top_degree = -1;      // highest coefficient surviving the noise strip
    bool degenerate = false;
};

template <typename Real>
RadiusScan scan_radius(const BivGrid& F, const BivGrid& G, int M, double radius) {
    using C = std::complex<Real>;
    using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
    const Real eps = std::numeric_limits<Real>::epsilon();
    const int p = F.deg2(), q = G.deg2();
    const Real r = Real(radius);
    const Real two_pi = Real(2) * Real(M_PI);
    Mat S(p + q, p + q);
    std::vector<C> dets(M);
    Real det_max = 0;
    std::vector<C> fr(p + 1), gr(q + 1);
    for (int s = 0; s < M; ++s) {
        const C z1 = std::polar(r, two_pi * Real(s) / Real(M));
        for (int j = 0; j <= p; ++j) {
            C acc = 0;
            for (int i = F.deg1(); i >= 0; --i)
                acc = acc * z1 + C(Real(F.c(i, j).real()), Real(F.c(i, j).imag()));
            fr[j] = acc;
        }
        for (int j = 0; j <= q; ++j) {
            C acc = 0;
            for (int i = G.deg1(); i >= 0; --i)
                acc = acc * z1 + C(Real(G.c(i, j).real()), Real(G.c(i, j).imag()));
            gr[j] = acc;
        }
        S.setZero();
        for (int row = 0; row < q; ++row)
            for (int j = 0; j <= p; ++j) S(row, row + j) = fr[p - j];
        for (int row = 0; row < p; ++row)
            for (int j = 0; j <= q; ++j) S(q + row, row + j) = gr[q - j];
        dets[s] = Eigen::PartialPivLU<Mat>(S).determinant();
        det_max = std::max(det_max, std::abs(dets[s]));
    }
    RadiusScan scan;
    if (det_max < Real(1e-280)) {
        scan.degenerate = true;
        return scan;
    }
    Real winding = 0;
    for (int s = 0; s < M; ++s) {
        const C a = dets[s], b = dets[(s + 1) % M];
        if (a != C(0) && b != C(0)) winding += std::arg(b / a);
    }
    scan.inside = std::llround(double(winding / two_pi));
    const int K = (M - 1) / 2 + 1;  // coefficient count: M oversamples 2x
    std::vector<C> coeff(K);        // coefficients in w; roots scale back by r
    for (int k = 0; k < K; ++k) {
        C acc = 0;
        for (int s = 0; s < M; ++s)
            acc += dets[s] * std::polar(Real(1), -two_pi * Real(k) * Real(s) / Real(M));
        coeff[k] = acc / Real(M);
    }
    // a single radius resolves only the annulus its coefficient dynamic
    // range can express: drop the noise tails before the Aberth stage
    const auto st = strip_poly_t<Real>(coeff, Real(1e3) * eps);
    scan.top_degree = st.zeros_at_origin + int(st.c.size()) - 1;
    if (int(st.c.size()) < 2) return scan;
    std::vector<C> roots = aberth_roots_t<Real>(st.c);
    for (const C& w : roots) scan.roots.push_back(Cplx(double(w.real()), double(w.imag())) *
                                                  radius);
    return scan;
}

uint64_t coeff_hash(const BivGrid& g) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
        uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        h = (h ^ bits) * 1099511628211ull;
    };
    for (int i = 0; i <= g.deg1(); ++i)
        for (int j = 0; j <= g.deg2(); ++j) {
            mix(g.c(i, j).real());
            mix(g.c(i, j).imag());
        }
    return h;
}

}  // namespace

ZeroSet solve_bivariate(const RandomPolynomial& f, const RandomPolynomial& g) {
    if (f.m() != 2 || g.m() != 2) throw std::invalid_argument("solve_bivariate: requires m = 2");
    BivGrid F0 = to_grid(f), G0 = to_grid(g);
    trim_grid(F0);
    trim_grid(G0);

    // random diagonal torus rotation, derived deterministically from the
    // coefficients; avoids accidental root alignment for structured inputs
    const uint64_t h = coeff_hash(F0) ^ (coeff_hash(G0) << 1);
    RngStream rot_rng(h, 0x0707);
    const double th1 = 2 * M_PI * rot_rng.uniform(0), th2 = 2 * M_PI * rot_rng.uniform(1);
    const Cplx lam1{std::cos(th1), std::sin(th1)}, lam2{std::cos(th2), std::sin(th2)};
    BivGrid F = F0, G = G0;
    for (int i = 0; i <= F.deg1(); ++i)
        for (int j = 0; j <= F.deg2(); ++j)
            F.c(i, j) *= std::pow(lam1, i) * std::pow(lam2, j);
    for (int i = 0; i <= G.deg1(); ++i)
        for (int j = 0; j <= G.deg2(); ++j)
            G.c(i, j) *= std::pow(lam1, i) * std::pow(lam2, j);

    const int p = F.deg2(), q = G.deg2();
    if (p + q == 0)
        throw ResultantDegenerate("solve_bivariate: neither component depends on z2");

    // Bernstein-Kouchnirenko bound from the actual supports: the sweep over
    // sampling radii stops once this many zeros have been certified
    long long expected = -1;
    {
        std::vector<LatticePoint> sf, sg;
        for (int i = 0; i <= F.deg1(); ++i)
            for (int j = 0; j <= F.deg2(); ++j)
                if (F.c(i, j) != Cplx(0)) sf.push_back({i, j});
        for (int i = 0; i <= G.deg1(); ++i)
            for (int j = 0; j <= G.deg2(); ++j)
                if (G.c(i, j) != Cplx(0)) sg.push_back({i, j});
        const Rat mv = mixed_volume({hull(sf), hull(sg)}).value;
        if (mv.denominator() == 1) expected = mv.numerator();
    }

    const int dres = p * G.deg1() + q * F.deg1();
    // 2x oversampling keeps the per-sample phase increment of the winding
    // below pi (Nyquist for up to dres roots) and averages sampling noise
    const int M = 2 * dres + 3;
    // the reconstruction runs in long double once coefficient noise in a
    // plain double pipeline would start to swallow roots
    const bool extended = dres > 160;

    ZeroSet out;
    std::vector<CVec> pts;
    std::vector<double> rs;
    std::vector<Cplx> z1_pool;
    auto rel_dist = [](const CVec& a, const CVec& b) {
        double d = 0;
        for (int i = 0; i < 2; ++i)
            d = std::max(d, std::abs(a[i] - b[i]) / (1 + std::abs(a[i]) + std::abs(b[i])));
        return d;
    };

    auto certify_z1 = [&](const Cplx& z1) {
        if (!on_torus_side(z1)) return;
        for (const Cplx& w : z1_pool)
            if (std::abs(z1 - w) < 1e-8 * (1 + std::abs(w))) return;
        z1_pool.push_back(z1);
        // z2 candidates from the component of higher z2-degree, filtered by
        // the other's residual, then Newton against both
        const BivGrid& A = p >= q ? F : G;
        const BivGrid& B = p >= q ? G : F;
        bool any = false;
        for (const Cplx& z2 : poly_roots(slice_z2(A, z1))) {
            if (!on_torus_side(z2)) continue;
            if (rel_residual(B, z1, z2) > 1e-2) continue;
            auto [w1, w2] = newton_refine(F, G, z1, z2);
            const Cplx y1 = w1 * lam1, y2 = w2 * lam2;  // undo the rotation
            if (!on_torus_side(y1) || !on_torus_side(y2)) {
                ++out.discarded;
                continue;
            }
            const double res = std::max(rel_residual(F0, y1, y2), rel_residual(G0, y1, y2));
            if (res >= kResidualGate) {
                ++out.discarded;
                continue;
            }
            any = true;
            const CVec pt{y1, y2};
            bool dup = false;
            for (size_t j = 0; j < pts.size(); ++j)
                if (rel_dist(pt, pts[j]) < kDedupTol) {
                    dup = true;
                    rs[j] = std::min(rs[j], res);
                    break;
                }
            if (!dup) {
                pts.push_back(pt);
                rs.push_back(res);
            }
        }
        if (!any) ++out.discarded;
    };

    // the rotated z1 coordinate of every certified zero, for the census
    auto certified_in = [&](double lo, double hi) {
        long long n = 0;
        for (const auto& z : pts) {
            const double a = std::abs(z[0]);
            if (a > lo && a <= hi) ++n;
        }
        return n;
    };

    std::map<double, long long> winding_at;  // radius -> roots strictly inside
    int deg_est = 0;                         // actual resultant degree estimate
    auto process = [&](double r, bool first, bool precise) {
        const RadiusScan scan = (extended && precise) ? scan_radius<long double>(F, G, M, r)
                                                      : scan_radius<double>(F, G, M, r);
        // a structurally dependent pair cancels exactly in the elimination;
        // near-degenerate inputs instead fail the residual gates downstream
        // and surface as count mismatches
        if (first && scan.degenerate)
            throw ResultantDegenerate("solve_bivariate: resultant vanishes identically "
                                      "(system not in general position)");
        winding_at[r] = scan.inside;
        deg_est = std::max(deg_est, scan.top_degree);
        for (const Cplx& z1 : scan.roots) certify_z1(z1);
    };

    // cheap double-precision ladder first: its windings are already exact
    // and it certifies the bulk; the census refinement below rescans the
    // deficient annuli with the extended pipeline
    process(1.0, true, false);
    for (double r : {0.4, 2.2, 0.15, 5.0, 0.05})
        if (expected < 0 || (long long)pts.size() < expected) process(r, false, false);

    // annulus census: wherever the winding says more roots live than were
    // certified, insert a radius splitting the widest such gap; at the ends,
    // extend while extensions keep paying off.  Deficits that survive the
    // finest splits come from extraneous resultant roots (z2 partners on the
    // toric boundary), so the gap-width floor bounds the chase.
    int barren_extensions = 0;
    for (int round = 0; round < 40; ++round) {
        if (expected >= 0 && (long long)pts.size() >= expected) break;
        std::vector<std::pair<double, long long>> scans(winding_at.begin(), winding_at.end());
        double next = 0, widest = 1.03;
        for (size_t i = 0; i + 1 < scans.size(); ++i) {
            const auto [ra, wa] = scans[i];
            const auto [rb, wb] = scans[i + 1];
            if (wb - wa > certified_in(ra, rb) && rb / ra > widest) {
                widest = rb / ra;
                next = std::sqrt(ra * rb);
            }
        }
        if (next == 0 && scans.front().second > certified_in(0, scans.front().first) &&
            scans.front().first > 1e-7)
            next = scans.front().first / 3;
        if (next == 0 && scans.back().first < 1e3 && barren_extensions < 2) {
            const long long outside = deg_est - scans.back().second;
            if (outside > certified_in(scans.back().first, kToricHigh)) {
                next = scans.back().first * 3;
                const size_t before = pts.size();
                if (winding_at.count(next)) break;
                process(next, false, true);
                if (pts.size() == before) ++barren_extensions;
                continue;
            }
        }
        if (next == 0 || winding_at.count(next)) break;
        process(next, false, true);
    }

    if (std::getenv("BKLAB_DEBUG_CENSUS")) {
        std::fprintf(stderr, "census: certified=%zu pool=%zu\n", pts.size(), z1_pool.size());
        for (const auto& [r, w] : winding_at)
            std::fprintf(stderr, "  r=%-8g inside=%lld certified_below=%lld\n", r, w,
                         certified_in(0, r));
    }

    std::vector<char> flags(pts.size(), 0);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (rel_dist(pts[i], pts[j]) < 10 * kDedupTol) flags[i] = flags[j] = 1;
    out.points = std::move(pts);
    out.residuals = std::move(rs);
    out.multiplicity_suspect = std::move(flags);
    return out;
}

CountReport verify_count(const ZeroSet& zeros, const std::vector<IntegralPolytope>& Ps,
                         long long N) {
    const auto mv = mixed_volume(Ps);
    Rat expected = mv.value;
    for (size_t i = 0; i < Ps.size(); ++i) expected *= Rat(N);
    CountReport rep;
    rep.found = (long long)zeros.points.size();
    if (expected.denominator() != 1)
        throw std::runtime_error("verify_count: non-integer Bernstein-Kouchnirenko count");
    rep.expected = expected.numerator();
    rep.discarded = zeros.discarded;
    rep.suspects = zeros.suspects();
    rep.match = rep.found == rep.expected;
    return rep;
}

std::vector<std::array<double, 2>> amoeba_sample(const RandomPolynomial& f,
                                                 const std::vector<double>& moduli,
                                                 int angle_count) {
    if (f.m() != 2) throw std::invalid_argument("amoeba_sample: requires m = 2");
    BivGrid F = to_grid(f);
    trim_grid(F);
    std::vector<std::array<double, 2>> out;
    for (double rho : moduli)
        for (int k = 0; k < angle_count; ++k) {
            const double th = 2 * M_PI * k / angle_count;
            const Cplx z1 = rho * Cplx{std::cos(th), std::sin(th)};
            for (const Cplx& z2 : poly_roots(slice_z2(F, z1))) {
                if (!on_torus_side(z2)) continue;
                if (rel_residual(F, z1, z2) < 1e-7)
                    out.push_back({std::log(rho), std::log(std::abs(z2))});
            }
        }
    return out;
}

}  // namespace bklab
