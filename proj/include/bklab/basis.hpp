#ifndef BKLAB_BASIS_HPP
#define BKLAB_BASIS_HPP

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>

#include "bklab/polytope.hpp"
#include "bklab/quadrature.hpp"

namespace bklab {

enum class WeightedSetKind { TorusK, Sphere3, FubiniStudy, CustomQuadrature };

/// (K, q, tau) for the concrete weighted sets: the real torus with Haar
/// measure, the unit sphere S^3 with surface area, the Fubini-Study weight
/// q = (p/2) log(1+|z|^2) on (C*)^m, or a user-supplied rule and weight.
struct WeightedSetSpec {
    WeightedSetKind kind = WeightedSetKind::TorusK;
    int p = 0;  // FubiniStudy only
    std::shared_ptr<QuadratureRule> custom_rule;
    std::function<double(const CVec&)> custom_q;

    double q(const CVec& z) const;

    static WeightedSetSpec torus() { return {WeightedSetKind::TorusK, 0, nullptr, nullptr}; }
    static WeightedSetSpec sphere3() { return {WeightedSetKind::Sphere3, 0, nullptr, nullptr}; }
    static WeightedSetSpec fubini_study(int p) { return {WeightedSetKind::FubiniStudy, p, nullptr, nullptr}; }
};

/// Orthonormal basis {F_j} of Poly(NP): exponents of NP cap Z^m in
/// lexicographic order plus a coefficient matrix, diagonal for the three
/// closed-form specs and lower-triangular for the Gram-Schmidt path.
/// F_j(z) = sum_k coeff(j,k) z^{exponents[k]}.
struct OrthoBasis {
    IntegralPolytope P;
    long long N = 1;
    WeightedSetSpec spec;
    std::vector<LatticePoint> exponents;
    bool diagonal = true;
    Eigen::VectorXd coeff_diag;
    Eigen::MatrixXcd coeff_dense;

    int d() const { return int(exponents.size()); }
    int m() const { return P.m; }
};

OrthoBasis torus_basis(const IntegralPolytope& P, long long N);
OrthoBasis sphere3_basis(const IntegralPolytope& P, long long N);
OrthoBasis fs_basis(const IntegralPolytope& P, long long N, int p);

/// Numerical path realizing the weighted inner product on an arbitrary rule:
/// forms the monomial Gram matrix and inverts its lower Cholesky factor.
/// Throws if the Gram matrix is not positive definite (degenerate rule).
OrthoBasis gram_schmidt_basis(const IntegralPolytope& P, long long N,
                              const QuadratureRule& rule,
                              const std::function<double(const CVec&)>& q);

/// Basis values scaled by e^{-M}: fills out[j] = F_j(z) e^{-M} and returns
/// M = max_J Re<J, log z>.  Keeps |z^J| representable for large N.
double evaluate_basis_scaled(const OrthoBasis& basis, const CVec& z, Eigen::VectorXcd& out);

/// log S_N(z,z) = log sum_j |F_j(z)|^2, evaluated in log space.
double log_bergman_diag(const OrthoBasis& basis, const CVec& z);

/// S_N(z,z); may overflow to +inf for extreme inputs, use rho_n then.
double bergman_diag(const OrthoBasis& basis, const CVec& z);

/// rho_N(z) = log S_N(z,z) / (2N).
double rho_n(const OrthoBasis& basis, const CVec& z);

/// Gram matrix of the basis under `rule` with the spec weight applied.
Eigen::MatrixXcd gram_matrix(const OrthoBasis& basis, const QuadratureRule& rule);

enum class GramStatus { Accept, Warn, Reject };

struct GramCheck {
    double max_error = 0;  // max |Gram - I|
    GramStatus status = GramStatus::Reject;
};

/// Accept below 1e-8, warn below 1e-6, reject otherwise.
GramCheck check_gram(const OrthoBasis& basis, const QuadratureRule& rule);

}  // namespace bklab

#endif
