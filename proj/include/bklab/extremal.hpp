#ifndef BKLAB_EXTREMAL_HPP
#define BKLAB_EXTREMAL_HPP

#include <functional>
#include <string>

#include "bklab/basis.hpp"
#include "bklab/polytope.hpp"

namespace bklab {

/// Moment map mu_p(z) = (p|z_i|^2 / (1+|z|^2))_i.
std::vector<double> moment_map(const CVec& z, int p);

/// True iff mu_p(z) lies in the interior of P (strict half-plane tests).
bool allowed_region(const IntegralPolytope& P, int p, const CVec& z);

/// The unique pair (tau_z, r(z)) with mu_p(e^{-tau/2} . z) = r and tau in the
/// normal cone of P at r; solved over the face lattice, highest dimension
/// first.
struct MomentFit {
    std::vector<double> tau;
    std::vector<double> r;
    double residual = 0;
    int face_dim = -1;
};

MomentFit moment_fit(const IntegralPolytope& P, int p, const CVec& z);

enum class EvaluatorKind { TorusClosedForm, FSMomentMap, FSLegendreDual };

/// Weighted global extremal function V_{P,K,q} in the closed-form cases:
/// the torus case evaluates H_P directly; the two Fubini-Study variants are
/// independent routes (moment-map fixed point vs Legendre-dual ascent) that
/// must agree.
struct ExtremalEvaluator {
    EvaluatorKind kind = EvaluatorKind::TorusClosedForm;
    IntegralPolytope P;
    int p = 0;  // FS variants

    static ExtremalEvaluator torus(IntegralPolytope P) {
        return {EvaluatorKind::TorusClosedForm, std::move(P), 0};
    }
    static ExtremalEvaluator fs_moment(IntegralPolytope P, int p) {
        return {EvaluatorKind::FSMomentMap, std::move(P), p};
    }
    static ExtremalEvaluator fs_dual(IntegralPolytope P, int p) {
        return {EvaluatorKind::FSLegendreDual, std::move(P), p};
    }
};

double v_extremal(const ExtremalEvaluator& ev, const CVec& z);

/// Limit Monge-Ampere densities of the two closed-form pipelines.
/// FSSquare: density against Lebesgue measure on C^2 for the unit square
/// with p = 2, supported on the allowed region.  TorusAngular: the constant
/// MV/(2pi)^m against the angle measure on the unit torus.
double ma_density_fssquare(const CVec& z);
double ma_density_torus_angular(const std::vector<IntegralPolytope>& Ps);

struct ConvergenceReport {
    std::vector<long long> Ns;
    std::vector<double> errors;       // e(N) = max over grid |rho_N - V|
    std::string grid_spec;
    bool monotone_trend = false;      // e(N_last) < e(N_first)
    double fitted_rate = 0;           // slope of log e against log N
};

ConvergenceReport bergman_convergence(
    const std::function<OrthoBasis(long long)>& basis_family,
    const std::function<double(const CVec&)>& v, const std::vector<CVec>& grid,
    const std::vector<long long>& Ns, const std::string& grid_spec = "");

}  // namespace bklab

#endif
