#ifndef BKLAB_QUADRATURE_HPP
#define BKLAB_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace bklab {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;

/// Nodes in (C*)^m with positive weights summing to the total mass of the
/// underlying measure.
struct QuadratureRule {
    std::vector<CVec> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [a,b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Product trapezoid rule on the real torus (S^1)^m with `per_dim` equally
/// spaced angles per circle and normalized Haar weights 1/per_dim^m.
/// Integrates z^A conj(z^B) exactly whenever max_i |A_i - B_i| < per_dim.
QuadratureRule torus_rule(int m, int per_dim);

/// Probability surface measure on S^3 in coordinates
/// z = (sqrt(t) e^{i a}, sqrt(1-t) e^{i b}): Gauss-Legendre in t on [0,1],
/// uniform phases.  Exact for monomial products when the phase count exceeds
/// the maximal exponent difference and 2*t_nodes exceeds the t-degree.
QuadratureRule sphere3_rule(int t_nodes, int phase_nodes);

/// Adaptive Simpson on [a,b] to the given relative/absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 40);

}  // namespace bklab

#endif
