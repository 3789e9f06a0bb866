#include "bklab/extremal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bklab {

std::vector<double> moment_map(const CVec& z, int p) {
    if (p < 1) throw std::invalid_argument("moment_map: p must be >= 1");
    double n2 = 0;
    for (const auto& zi : z) n2 += std::norm(zi);
    std::vector<double> mu(z.size());
    for (size_t i = 0; i < z.size(); ++i) mu[i] = p * std::norm(z[i]) / (1.0 + n2);
    return mu;
}

bool allowed_region(const IntegralPolytope& P, int p, const CVec& z) {
    return strictly_inside(P, moment_map(z, p), 1e-10);
}

namespace {

// candidate face of the fit: an affine chart r = base + t*dir (dir empty for
// vertices) together with the normal-cone generators at its relative interior
struct FaceChart {
    std::vector<double> base;
    std::vector<double> dir;               // edge direction, possibly empty
    std::vector<std::vector<double>> cone; // outward normals, unit length
    int dim = 0;
};

std::vector<FaceChart> face_charts(const IntegralPolytope& P) {
    std::vector<FaceChart> charts;
    const int m = P.m;
    if (m == 1) {
        const double a = double(P.vertices.front()[0]);
        const double b = double(P.vertices.back()[0]);
        charts.push_back({{b}, {}, {{1.0}}, 0});
        charts.push_back({{a}, {}, {{-1.0}}, 0});
        return charts;
    }
    // m == 2: CCW vertex cycle; edges first, then vertices
    const size_t n = P.vertices.size();
    std::vector<std::vector<double>> edge_normal(n);
    for (size_t i = 0; i < n; ++i) {
        const auto& a = P.vertices[i];
        const auto& b = P.vertices[(i + 1) % n];
        double nx = double(b[1] - a[1]), ny = double(a[0] - b[0]);
        const double len = std::hypot(nx, ny);
        edge_normal[i] = {nx / len, ny / len};
        FaceChart c;
        c.base = {double(a[0]), double(a[1])};
        c.dir = {double(b[0] - a[0]), double(b[1] - a[1])};
        c.cone = {edge_normal[i]};
        c.dim = 1;
        charts.push_back(std::move(c));
    }
    for (size_t i = 0; i < n; ++i) {
        FaceChart c;
        c.base = {double(P.vertices[i][0]), double(P.vertices[i][1])};
        c.cone = {edge_normal[(i + n - 1) % n], edge_normal[i]};
        c.dim = 0;
        charts.push_back(std::move(c));
    }
    return charts;
}

// residual and Jacobian of G(t,c) = mu_p(e^{-tau/2} z) - r on a face chart;
// unknowns are the edge parameter (if any) followed by the cone coefficients
struct FitState {
    Eigen::VectorXd x;
    Eigen::VectorXd residual;
    Eigen::MatrixXd jac;
};

void fit_eval(const FaceChart& f, int p, const std::vector<double>& w, FitState& st) {
    const int m = int(w.size());
    const int nt = f.dir.empty() ? 0 : 1;
    const int nc = int(f.cone.size());
    std::vector<double> tau(m, 0.0);
    for (int k = 0; k < nc; ++k)
        for (int i = 0; i < m; ++i) tau[i] += st.x[nt + k] * f.cone[k][i];
    std::vector<double> s(m), mu(m);
    double tot = 1.0;
    for (int i = 0; i < m; ++i) {
        s[i] = w[i] * std::exp(-tau[i]);
        tot += s[i];
    }
    for (int i = 0; i < m; ++i) mu[i] = p * s[i] / tot;
    st.residual.resize(m);
    for (int i = 0; i < m; ++i) {
        double r = f.base[i] + (nt ? st.x[0] * f.dir[i] : 0.0);
        st.residual[i] = mu[i] - r;
    }
    st.jac.resize(m, nt + nc);
    // d mu_i / d tau_j = -delta_ij mu_j + mu_i mu_j / p
    for (int k = 0; k < nc; ++k)
        for (int i = 0; i < m; ++i) {
            double d = 0;
            for (int j = 0; j < m; ++j)
                d += (-(i == j ? mu[j] : 0.0) + mu[i] * mu[j] / p) * f.cone[k][j];
            st.jac(i, nt + k) = d;
        }
    if (nt)
        for (int i = 0; i < m; ++i) st.jac(i, 0) = -f.dir[i];
}

bool newton_fit(const FaceChart& f, int p, const std::vector<double>& w, FitState& st) {
    fit_eval(f, p, w, st);
    for (int it = 0; it < 200; ++it) {
        const double r0 = st.residual.norm();
        if (r0 < 1e-11) return true;
        Eigen::VectorXd step =
            st.jac.colPivHouseholderQr().solve(-st.residual);
        if (!step.allFinite()) return false;
        // damped backtracking
        double lambda = 1.0;
        const Eigen::VectorXd x0 = st.x;
        bool improved = false;
        for (int bt = 0; bt < 30; ++bt) {
            st.x = x0 + lambda * step;
            fit_eval(f, p, w, st);
            if (st.residual.norm() < r0) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) {
            st.x = x0;
            fit_eval(f, p, w, st);
            return st.residual.norm() < 1e-11;
        }
    }
    return st.residual.norm() < 1e-11;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

MomentFit moment_fit(const IntegralPolytope& P, int p, const CVec& z) {
    const int m = P.m;
    if (int(z.size()) != m) throw std::invalid_argument("moment_fit: dimension mismatch");
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
        w[i] = std::norm(z[i]);
        if (w[i] == 0) throw std::invalid_argument("moment_fit: coordinate is 0");
    }
    MomentFit fit;
    if (allowed_region(P, p, z)) {
        fit.tau.assign(m, 0.0);
        fit.r = moment_map(z, p);
        fit.residual = 0.0;
        fit.face_dim = m;
        return fit;
    }

    double best_residual = std::numeric_limits<double>::infinity();
    for (const FaceChart& f : face_charts(P)) {
        const int nt = f.dir.empty() ? 0 : 1;
        const int nc = int(f.cone.size());
        for (double c0 : {0.5, 4.0, 16.0}) {
            FitState st;
            st.x = Eigen::VectorXd::Constant(nt + nc, c0);
            if (nt) st.x[0] = 0.5;
            if (!newton_fit(f, p, w, st)) {
                best_residual = std::min(best_residual, double(st.residual.norm()));
                continue;
            }
            // face-chart constraints: edge parameter within [0,1], cone
            // coefficients nonnegative
            bool ok = true;
            if (nt && (st.x[0] < -1e-9 || st.x[0] > 1 + 1e-9)) ok = false;
            for (int k = 0; k < nc && ok; ++k)
                if (st.x[nt + k] < -1e-9) ok = false;
            if (!ok) {
                best_residual = std::min(best_residual, double(st.residual.norm()));
                continue;
            }
            fit.tau.assign(m, 0.0);
            for (int k = 0; k < nc; ++k)
                for (int i = 0; i < m; ++i)
                    fit.tau[i] += std::max(st.x[nt + k], 0.0) * f.cone[k][i];
            fit.r.resize(m);
            for (int i = 0; i < m; ++i)
                fit.r[i] = f.base[i] + (nt ? st.x[0] * f.dir[i] : 0.0);
            fit.residual = st.residual.norm();
            fit.face_dim = f.dim;
            // final invariants: r in P and tau in the normal cone at r
            if (!contains(P, std::span<const double>(fit.r), 1e-8)) continue;
            if (!in_normal_cone(P, fit.r, fit.tau)) continue;
            return fit;
        }
    }
    throw std::runtime_error("moment_fit: no face converged (best residual " +
                             std::to_string(best_residual) + ")");
}

namespace {

// Legendre transform of the FS weight in logarithmic coordinates, with the
// convention 0 log 0 = 0
double phi_q_star(const std::vector<double>& x, int p) {
    double sum = 0, ent = 0;
    for (double xi : x) {
        if (xi < 0) return std::numeric_limits<double>::infinity();
        sum += xi;
        if (xi > 0) ent += xi * std::log(xi);
    }
    const double rest = p - sum;
    if (rest < 0) return std::numeric_limits<double>::infinity();
    if (rest > 0) ent += rest * std::log(rest);
    return 0.5 * (ent - p * std::log(double(p)));
}

std::vector<double> project_onto(const IntegralPolytope& P, std::vector<double> x) {
    if (contains(P, std::span<const double>(x), 1e-12)) return x;
    const int m = P.m;
    if (m == 1) {
        x[0] = std::clamp(x[0], double(P.vertices.front()[0]), double(P.vertices.back()[0]));
        return x;
    }
    double best_d = std::numeric_limits<double>::infinity();
    std::vector<double> best = x;
    const size_t n = P.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = P.vertices[i];
        const auto& b = P.vertices[(i + 1) % n];
        const double ex = double(b[0] - a[0]), ey = double(b[1] - a[1]);
        const double len2 = ex * ex + ey * ey;
        double t = len2 > 0 ? ((x[0] - a[0]) * ex + (x[1] - a[1]) * ey) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double px = a[0] + t * ex, py = a[1] + t * ey;
        const double d = std::hypot(x[0] - px, x[1] - py);
        if (d < best_d) {
            best_d = d;
            best = {px, py};
        }
    }
    return best;
}

double ascend_from(const IntegralPolytope& P, int p, const std::vector<double>& logz,
                   std::vector<double> x) {
    const int m = P.m;
    auto objective = [&](const std::vector<double>& y) {
        return dot(y, logz) - phi_q_star(y, p);
    };
    double fx = objective(x);
    double eta = 0.25;
    for (int it = 0; it < 2000; ++it) {
        double sum = 0;
        for (double xi : x) sum += xi;
        std::vector<double> grad(m);
        for (int i = 0; i < m; ++i) {
            const double xi = std::max(x[i], 1e-300);
            const double rest = std::max(p - sum, 1e-300);
            grad[i] = logz[i] - 0.5 * (std::log(xi) - std::log(rest));
            grad[i] = std::clamp(grad[i], -1e6, 1e6);
        }
        std::vector<double> xn(m);
        double fn = -std::numeric_limits<double>::infinity();
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (int i = 0; i < m; ++i) xn[i] = x[i] + eta * grad[i];
            xn = project_onto(P, xn);
            fn = objective(xn);
            if (fn > fx) {
                moved = true;
                break;
            }
            eta *= 0.5;
            if (eta < 1e-18) break;
        }
        if (!moved) break;
        double step = 0;
        for (int i = 0; i < m; ++i) step = std::max(step, std::abs(xn[i] - x[i]));
        x = xn;
        fx = fn;
        eta *= 1.6;
        if (step < 1e-12) break;
    }
    return fx;
}

double v_fs_dual(const IntegralPolytope& P, int p, const CVec& z) {
    const int m = P.m;
    std::vector<double> logz(m);
    for (int i = 0; i < m; ++i) {
        const double a = std::abs(z[i]);
        if (a == 0) throw std::invalid_argument("v_extremal: coordinate is 0");
        logz[i] = std::log(a);
    }
    // multistarts: polytope vertices pulled slightly inward plus an interior grid
    std::vector<double> centroid(m, 0.0);
    for (const auto& v : P.vertices)
        for (int i = 0; i < m; ++i) centroid[i] += double(v[i]) / P.vertices.size();
    std::vector<std::vector<double>> starts;
    for (const auto& v : P.vertices) {
        std::vector<double> x(m);
        for (int i = 0; i < m; ++i) x[i] = double(v[i]) + 0.05 * (centroid[i] - double(v[i]));
        starts.push_back(x);
    }
    std::vector<double> lo(m, 1e30), hi(m, -1e30);
    for (const auto& v : P.vertices)
        for (int i = 0; i < m; ++i) {
            lo[i] = std::min(lo[i], double(v[i]));
            hi[i] = std::max(hi[i], double(v[i]));
        }
    const int per_dim = m == 1 ? 56 : 7;  // ~64 starts with the vertices
    std::vector<int> idx(m, 0);
    while (true) {
        std::vector<double> x(m);
        for (int i = 0; i < m; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * (idx[i] + 0.5) / per_dim;
        starts.push_back(project_onto(P, x));
        int d = 0;
        while (d < m && ++idx[d] == per_dim) idx[d++] = 0;
        if (d == m) break;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : starts) best = std::max(best, ascend_from(P, p, logz, s));
    return best;
}

}  // namespace

double v_extremal(const ExtremalEvaluator& ev, const CVec& z) {
    switch (ev.kind) {
        case EvaluatorKind::TorusClosedForm:
            return h_p(ev.P, z);
        case EvaluatorKind::FSMomentMap: {
            const MomentFit fit = moment_fit(ev.P, ev.p, z);
            double scaled = 1.0;
            for (size_t i = 0; i < z.size(); ++i)
                scaled += std::exp(-fit.tau[i]) * std::norm(z[i]);
            return 0.5 * dot(fit.r, fit.tau) + 0.5 * ev.p * std::log(scaled);
        }
        case EvaluatorKind::FSLegendreDual:
            return v_fs_dual(ev.P, ev.p, z);
    }
    throw std::logic_error("v_extremal: unknown evaluator");
}

double ma_density_fssquare(const CVec& z) {
    if (z.size() != 2) throw std::invalid_argument("ma_density_fssquare: requires m = 2");
    static const IntegralPolytope square = named_polytope("square");
    const int p = 2;
    if (!allowed_region(square, p, z)) return 0.0;
    double n2 = 0;
    for (const auto& zi : z) n2 += std::norm(zi);
    // MA_C of the FS weight q = (p/2) log(1+|z|^2): p^2 times the FS volume
    // density, so the total over the allowed region is the mixed volume
    const double t = 1.0 + n2;
    return double(p) * double(p) * 2.0 / (M_PI * M_PI * t * t * t);
}

double ma_density_torus_angular(const std::vector<IntegralPolytope>& Ps) {
    const auto mv = mixed_volume(Ps);
    const int m = int(Ps.size());
    return boost::rational_cast<double>(mv.value) / std::pow(2.0 * M_PI, m);
}

ConvergenceReport bergman_convergence(
    const std::function<OrthoBasis(long long)>& basis_family,
    const std::function<double(const CVec&)>& v, const std::vector<CVec>& grid,
    const std::vector<long long>& Ns, const std::string& grid_spec) {
    if (grid.empty()) throw std::invalid_argument("bergman_convergence: empty grid");
    ConvergenceReport rep;
    rep.Ns = Ns;
    rep.grid_spec = grid_spec;
    for (long long N : Ns) {
        const OrthoBasis basis = basis_family(N);
        double e = 0;
        for (const CVec& z : grid) e = std::max(e, std::abs(rho_n(basis, z) - v(z)));
        rep.errors.push_back(e);
    }
    rep.monotone_trend = rep.errors.back() < rep.errors.front();
    // least-squares slope of log e against log N
    const int n = int(Ns.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(double(Ns[i]));
        const double y = std::log(std::max(rep.errors[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    rep.fitted_rate = (n * sxy - sx * sy) / std::max(n * sxx - sx * sx, 1e-300);
    return rep;
}

}  // namespace bklab
