#ifndef BKLAB_ENSEMBLES_HPP
#define BKLAB_ENSEMBLES_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "bklab/basis.hpp"
#include "bklab/rng.hpp"

namespace bklab {

enum class LawKind { ComplexGaussianStd, RealGaussianStd, ParetoModulus, SphereUniform };

struct CoefficientLaw {
    LawKind kind = LawKind::ComplexGaussianStd;
    double alpha = 3.0;  // ParetoModulus tail exponent

    static CoefficientLaw gaussian() { return {LawKind::ComplexGaussianStd, 0}; }
    static CoefficientLaw real_gaussian() { return {LawKind::RealGaussianStd, 0}; }
    static CoefficientLaw pareto(double a) { return {LawKind::ParetoModulus, a}; }
    static CoefficientLaw sphere_uniform() { return {LawKind::SphereUniform, 0}; }
};

CoefficientLaw law_from_name(const std::string& name, double alpha);
std::string law_name(const CoefficientLaw& law);

/// Identifies where a coefficient vector came from: any draw is addressable
/// as (seed, stream, index) without replay.
struct SeedLineage {
    uint64_t seed = 0;
    uint64_t stream = 0;
    uint64_t draw = 0;
};

/// f_N = sum_j a_j F_j against a fixed orthonormal basis.
struct RandomPolynomial {
    std::shared_ptr<const OrthoBasis> basis;
    Eigen::VectorXcd a;
    SeedLineage lineage;

    int m() const { return basis->m(); }
};

/// k independent polynomials sharing ambient dimension and dilation.
struct PolynomialSystem {
    std::vector<RandomPolynomial> components;
};

RandomPolynomial sample_polynomial(std::shared_ptr<const OrthoBasis> basis,
                                   const CoefficientLaw& law, uint64_t seed,
                                   uint64_t stream, uint64_t draw = 0);

PolynomialSystem sample_system(
    const std::vector<std::pair<std::shared_ptr<const OrthoBasis>, CoefficientLaw>>& specs,
    uint64_t seed, uint64_t stream_base, uint64_t draw = 0);

/// f(z) scaled by e^{-M}: returns M and fills value and the positive
/// envelope sum_j |a_j F_j(z)| e^{-M} used for relative residuals.
struct ScaledValue {
    Cplx value;       // f(z) e^{-M}
    double envelope;  // sum |a_j F_j(z)| e^{-M}
    double log_scale; // M
};
ScaledValue evaluate_scaled(const RandomPolynomial& f, const CVec& z);

/// f(z); may over/underflow for extreme z, prefer evaluate_scaled.
Cplx evaluate(const RandomPolynomial& f, const CVec& z);

/// Dense coefficients b_J on the exponent list of the basis, so that
/// f(z) = sum_J b_J z^J.
Eigen::VectorXcd dense_coefficients(const RandomPolynomial& f);

/// Monte Carlo proxies for the tail conditions: the report carries estimates
/// and confidence intervals only, no pass/fail claim.
struct DiagnosticsReport {
    int d_N = 0;
    int trials = 0;
    double mean_log_inner_max = 0;    // sup_u |E log|<a,u>|| over sampled u
    double mean_log_inner_spread = 0; // max-min of E log|<a,u>| across u
    double a2_probability = 0;        // P{log||a|| > N eps}
    double a2_sigma = 0;
    double a3_probability = 0;        // P{log|<a,u>| < -N t}
    double a3_sigma = 0;
    double n = 0, eps = 0, t = 0;
};

DiagnosticsReport tail_diagnostics(const CoefficientLaw& law, int d_N, int trials,
                                   double N, double eps, double t, uint64_t seed,
                                   int directions = 20);

}  // namespace bklab

#endif
