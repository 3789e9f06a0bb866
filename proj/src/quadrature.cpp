#include "bklab/quadrature.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace bklab {

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n from the Chebyshev-based initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = weights[n - 1 - i] = half * w;
    }
}

QuadratureRule torus_rule(int m, int per_dim) {
    if (per_dim < 1) throw std::invalid_argument("torus_rule: need at least one node per circle");
    QuadratureRule rule;
    const double w = std::pow(1.0 / per_dim, m);
    std::vector<int> idx(m, 0);
    while (true) {
        CVec z(m);
        for (int i = 0; i < m; ++i) {
            const double th = 2.0 * M_PI * idx[i] / per_dim;
            z[i] = {std::cos(th), std::sin(th)};
        }
        rule.nodes.push_back(std::move(z));
        rule.weights.push_back(w);
        int d = 0;
        while (d < m && ++idx[d] == per_dim) idx[d++] = 0;
        if (d == m) break;
    }
    return rule;
}

QuadratureRule sphere3_rule(int t_nodes, int phase_nodes) {
    std::vector<double> tn, tw;
    gauss_legendre(t_nodes, 0.0, 1.0, tn, tw);
    QuadratureRule rule;
    const double pw = 1.0 / (phase_nodes * double(phase_nodes));
    for (int it = 0; it < t_nodes; ++it) {
        const double r1 = std::sqrt(tn[it]);
        const double r2 = std::sqrt(1.0 - tn[it]);
        for (int ia = 0; ia < phase_nodes; ++ia) {
            const double a = 2.0 * M_PI * ia / phase_nodes;
            for (int ib = 0; ib < phase_nodes; ++ib) {
                const double b = 2.0 * M_PI * ib / phase_nodes;
                rule.nodes.push_back({Cplx{r1 * std::cos(a), r1 * std::sin(a)},
                                      Cplx{r2 * std::cos(b), r2 * std::sin(b)}});
                rule.weights.push_back(tw[it] * pw);
            }
        }
    }
    return rule;
}

namespace {
double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b,
             double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adapt(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, max_depth);
}

}  // namespace bklab
