#include "bklab/basis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bklab {

double WeightedSetSpec::q(const CVec& z) const {
    switch (kind) {
        case WeightedSetKind::TorusK:
        case WeightedSetKind::Sphere3:
            return 0.0;
        case WeightedSetKind::FubiniStudy: {
            double n2 = 0;
            for (const auto& zi : z) n2 += std::norm(zi);
            return 0.5 * p * std::log1p(n2);
        }
        case WeightedSetKind::CustomQuadrature:
            return custom_q ? custom_q(z) : 0.0;
    }
    return 0.0;
}

namespace {

std::vector<LatticePoint> dilated_exponents(const IntegralPolytope& P, long long N) {
    return lattice_points(dilate(P, N));  // lexicographically sorted
}

}  // namespace

OrthoBasis torus_basis(const IntegralPolytope& P, long long N) {
    OrthoBasis b;
    b.P = P;
    b.N = N;
    b.spec = WeightedSetSpec::torus();
    b.exponents = dilated_exponents(P, N);
    b.diagonal = true;
    b.coeff_diag = Eigen::VectorXd::Ones(b.d());
    return b;
}

OrthoBasis sphere3_basis(const IntegralPolytope& P, long long N) {
    if (P.m != 2) throw std::invalid_argument("sphere3_basis: requires m = 2");
    OrthoBasis b;
    b.P = P;
    b.N = N;
    b.spec = WeightedSetSpec::sphere3();
    b.exponents = dilated_exponents(P, N);
    b.diagonal = true;
    b.coeff_diag.resize(b.d());
    for (int j = 0; j < b.d(); ++j) {
        const auto& J = b.exponents[j];
        if (J[0] < 0 || J[1] < 0)
            throw std::invalid_argument("sphere3_basis: negative exponents");
        // c_J = sqrt((j1+j2+1)! / (j1! j2!))
        b.coeff_diag[j] = std::exp(0.5 * (std::lgamma(double(J[0] + J[1] + 2)) -
                                          std::lgamma(double(J[0] + 1)) -
                                          std::lgamma(double(J[1] + 1))));
    }
    return b;
}

OrthoBasis fs_basis(const IntegralPolytope& P, long long N, int p) {
    if (p < 1) throw std::invalid_argument("fs_basis: p must be >= 1");
    OrthoBasis b;
    b.P = P;
    b.N = N;
    b.spec = WeightedSetSpec::fubini_study(p);
    b.exponents = dilated_exponents(P, N);
    b.diagonal = true;
    b.coeff_diag.resize(b.d());
    const long long pN = p * N;
    const int m = P.m;
    for (int j = 0; j < b.d(); ++j) {
        const auto& J = b.exponents[j];
        long long total = 0;
        for (int i = 0; i < m; ++i) {
            if (J[i] < 0) throw std::invalid_argument("fs_basis: requires P in the nonnegative orthant");
            total += J[i];
        }
        if (total > pN) throw std::invalid_argument("fs_basis: requires P inside p*Sigma");
        // c_J = sqrt((pN+m)! / (m! (pN-|J|)! j_1! ... j_m!))
        double logc = std::lgamma(double(pN + m + 1)) - std::lgamma(double(m + 1)) -
                      std::lgamma(double(pN - total + 1));
        for (int i = 0; i < m; ++i) logc -= std::lgamma(double(J[i] + 1));
        b.coeff_diag[j] = std::exp(0.5 * logc);
    }
    return b;
}

OrthoBasis gram_schmidt_basis(const IntegralPolytope& P, long long N,
                              const QuadratureRule& rule,
                              const std::function<double(const CVec&)>& q) {
    OrthoBasis b;
    b.P = P;
    b.N = N;
    b.spec.kind = WeightedSetKind::CustomQuadrature;
    b.spec.custom_rule = std::make_shared<QuadratureRule>(rule);
    b.spec.custom_q = q;
    b.exponents = dilated_exponents(P, N);
    const int d = b.d();
    if (int(rule.nodes.size()) < d)
        throw std::runtime_error("gram_schmidt_basis: fewer quadrature nodes than basis size");

    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd mono(d);
    for (size_t n = 0; n < rule.nodes.size(); ++n) {
        const CVec& z = rule.nodes[n];
        for (int j = 0; j < d; ++j) {
            Cplx v = 1.0;
            for (int i = 0; i < P.m; ++i) v *= std::pow(z[i], double(b.exponents[j][i]));
            mono[j] = v;
        }
        const double w = rule.weights[n] * std::exp(-2.0 * double(N) * (q ? q(z) : 0.0));
        G.noalias() += w * mono * mono.adjoint();
    }

    Eigen::LLT<Eigen::MatrixXcd> llt(G);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("gram_schmidt_basis: Gram matrix not positive definite "
                                 "(degenerate quadrature for Poly(NP))");
    // F = L^{-1} monomials  =>  Gram(F) = I
    Eigen::MatrixXcd C = llt.matrixL().solve(Eigen::MatrixXcd::Identity(d, d));
    b.diagonal = false;
    b.coeff_dense = C;
    return b;
}

double evaluate_basis_scaled(const OrthoBasis& basis, const CVec& z, Eigen::VectorXcd& out) {
    const int d = basis.d();
    const int m = basis.m();
    if (int(z.size()) != m) throw std::invalid_argument("evaluate_basis_scaled: dimension mismatch");
    std::vector<Cplx> logz(m);
    for (int i = 0; i < m; ++i) {
        if (z[i] == Cplx(0, 0)) throw std::invalid_argument("evaluate_basis_scaled: coordinate is 0");
        logz[i] = std::log(z[i]);
    }
    double M = -std::numeric_limits<double>::infinity();
    std::vector<Cplx> jlog(d);
    for (int j = 0; j < d; ++j) {
        Cplx s = 0;
        for (int i = 0; i < m; ++i) s += double(basis.exponents[j][i]) * logz[i];
        jlog[j] = s;
        M = std::max(M, s.real());
    }
    out.resize(d);
    for (int j = 0; j < d; ++j) out[j] = std::exp(jlog[j] - M);
    if (basis.diagonal) {
        for (int j = 0; j < d; ++j) out[j] *= basis.coeff_diag[j];
    } else {
        out = (basis.coeff_dense * out).eval();
    }
    return M;
}

double log_bergman_diag(const OrthoBasis& basis, const CVec& z) {
    Eigen::VectorXcd F;
    const double M = evaluate_basis_scaled(basis, z, F);
    return 2.0 * M + std::log(F.squaredNorm());
}

double bergman_diag(const OrthoBasis& basis, const CVec& z) {
    return std::exp(log_bergman_diag(basis, z));
}

double rho_n(const OrthoBasis& basis, const CVec& z) {
    return log_bergman_diag(basis, z) / (2.0 * double(basis.N));
}

Eigen::MatrixXcd gram_matrix(const OrthoBasis& basis, const QuadratureRule& rule) {
    const int d = basis.d();
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd F(d);
    for (size_t n = 0; n < rule.nodes.size(); ++n) {
        const CVec& z = rule.nodes[n];
        const double M = evaluate_basis_scaled(basis, z, F);
        const double w = rule.weights[n] *
                         std::exp(2.0 * (M - double(basis.N) * basis.spec.q(z)));
        G.noalias() += w * F * F.adjoint();
    }
    return G;
}

GramCheck check_gram(const OrthoBasis& basis, const QuadratureRule& rule) {
    const auto G = gram_matrix(basis, rule);
    const double err =
        (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    GramCheck c;
    c.max_error = err;
    c.status = err < 1e-8 ? GramStatus::Accept : (err < 1e-6 ? GramStatus::Warn : GramStatus::Reject);
    return c;
}

}  // namespace bklab
