#ifndef BKLAB_SOLVER_HPP
#define BKLAB_SOLVER_HPP

#include <vector>

#include "bklab/ensembles.hpp"

namespace bklab {

/// Simultaneous zeros in (C*)^m with per-point relative residuals.
/// Every retained point has relative residual < 1e-8 for all components;
/// candidates on the toric boundary (any |coordinate| outside
/// [1e-10, 1e10]) or failing the residual gate are counted in `discarded`.
struct ZeroSet {
    std::vector<CVec> points;
    std::vector<double> residuals;          // max over components
    std::vector<char> multiplicity_suspect; // clustered within 10x dedup radius
    long long discarded = 0;

    long long suspects() const {
        long long s = 0;
        for (char f : multiplicity_suspect) s += f != 0;
        return s;
    }
};

struct CountReport {
    long long found = 0;
    long long expected = 0;
    bool match = false;
    long long discarded = 0;
    long long suspects = 0;
};

/// Thrown when the Sylvester resultant vanishes identically: the system is
/// not in general position (a positive-codimension event for random draws);
/// callers resample.
struct ResultantDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Laurent polynomial from explicit exponent/coefficient pairs (testing and
/// deterministic inputs); represented against a monomial basis on hull(exps).
RandomPolynomial make_laurent(const std::vector<std::pair<LatticePoint, Cplx>>& terms);

/// All roots in C* of a univariate Laurent polynomial: negative powers are
/// cleared by z^{-minexp}, roots via balanced companion-matrix eigenvalues,
/// candidates at 0 discarded.
ZeroSet roots_univariate(const RandomPolynomial& f);

/// All simultaneous zeros in (C*)^2 of two Laurent polynomials by
/// hidden-variable elimination: the Sylvester resultant in z2 is evaluated
/// at scaled roots of unity and interpolated, z1 roots feed univariate
/// back-substitution, and every candidate is Newton-refined and gated on
/// relative residuals.
ZeroSet solve_bivariate(const RandomPolynomial& f, const RandomPolynomial& g);

/// Compares found count against the Bernstein-Kouchnirenko prediction
/// MV(P_1,...,P_m) N^m.  Mismatches are reported, never corrected.
CountReport verify_count(const ZeroSet& zeros, const std::vector<IntegralPolytope>& Ps,
                         long long N);

/// Log-image samples of the zero curve of a bivariate f: for each modulus in
/// `moduli` and each of `angle_count` phases of z1, the (log|z1|, log|z2|)
/// pairs over the torus roots of f(z1, .).
std::vector<std::array<double, 2>> amoeba_sample(const RandomPolynomial& f,
                                                 const std::vector<double>& moduli,
                                                 int angle_count);

/// Roots of sum_k c[k] z^k (internal helper, exposed for tests): balanced
/// companion matrix for moderate degrees, Aberth-Ehrlich iteration above.
std::vector<Cplx> poly_roots(const std::vector<Cplx>& coeffs);

}  // namespace bklab

#endif
