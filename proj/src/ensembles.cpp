#include "bklab/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace bklab {

CoefficientLaw law_from_name(const std::string& name, double alpha) {
    if (name == "gaussian" || name == "complex-gaussian") return CoefficientLaw::gaussian();
    if (name == "real-gaussian") return CoefficientLaw::real_gaussian();
    if (name == "pareto") return CoefficientLaw::pareto(alpha);
    if (name == "sphere-uniform") return CoefficientLaw::sphere_uniform();
    throw std::invalid_argument("unknown coefficient law: " + name);
}

std::string law_name(const CoefficientLaw& law) {
    switch (law.kind) {
        case LawKind::ComplexGaussianStd: return "gaussian";
        case LawKind::RealGaussianStd: return "real-gaussian";
        case LawKind::ParetoModulus: return "pareto";
        case LawKind::SphereUniform: return "sphere-uniform";
    }
    return "?";
}

namespace {

Eigen::VectorXcd draw_coefficients(const CoefficientLaw& law, int d, uint64_t seed,
                                   uint64_t stream, uint64_t draw) {
    RngStream rng(seed, stream);
    Eigen::VectorXcd a(d);
    const uint64_t base = draw * uint64_t(d);
    switch (law.kind) {
        case LawKind::ComplexGaussianStd:
            for (int j = 0; j < d; ++j) a[j] = rng.complex_gaussian(base + j);
            break;
        case LawKind::RealGaussianStd:
            for (int j = 0; j < d; ++j) a[j] = rng.gaussian(base + j);
            break;
        case LawKind::ParetoModulus:
            for (int j = 0; j < d; ++j) a[j] = rng.pareto_modulus(base + j, law.alpha);
            break;
        case LawKind::SphereUniform: {
            for (int j = 0; j < d; ++j) a[j] = rng.complex_gaussian(base + j);
            a /= a.norm();
            break;
        }
    }
    return a;
}

}  // namespace

RandomPolynomial sample_polynomial(std::shared_ptr<const OrthoBasis> basis,
                                   const CoefficientLaw& law, uint64_t seed,
                                   uint64_t stream, uint64_t draw) {
    RandomPolynomial f;
    f.basis = std::move(basis);
    f.a = draw_coefficients(law, f.basis->d(), seed, stream, draw);
    f.lineage = {seed, stream, draw};
    return f;
}

PolynomialSystem sample_system(
    const std::vector<std::pair<std::shared_ptr<const OrthoBasis>, CoefficientLaw>>& specs,
    uint64_t seed, uint64_t stream_base, uint64_t draw) {
    if (specs.empty()) throw std::invalid_argument("sample_system: empty spec list");
    PolynomialSystem sys;
    for (size_t i = 0; i < specs.size(); ++i)
        sys.components.push_back(sample_polynomial(specs[i].first, specs[i].second, seed,
                                                   stream_id(stream_base, i), draw));
    return sys;
}

ScaledValue evaluate_scaled(const RandomPolynomial& f, const CVec& z) {
    Eigen::VectorXcd F;
    const double M = evaluate_basis_scaled(*f.basis, z, F);
    ScaledValue v;
    v.log_scale = M;
    v.value = 0;
    v.envelope = 0;
    for (int j = 0; j < F.size(); ++j) {
        const Cplx term = f.a[j] * F[j];
        v.value += term;
        v.envelope += std::abs(term);
    }
    return v;
}

Cplx evaluate(const RandomPolynomial& f, const CVec& z) {
    const ScaledValue v = evaluate_scaled(f, z);
    return v.value * std::exp(v.log_scale);
}

Eigen::VectorXcd dense_coefficients(const RandomPolynomial& f) {
    const auto& b = *f.basis;
    if (b.diagonal) return b.coeff_diag.cast<Cplx>().cwiseProduct(f.a);
    // F_j = sum_k C_{jk} z^{A_k}  =>  b = C^T a
    return b.coeff_dense.transpose() * f.a;
}

DiagnosticsReport tail_diagnostics(const CoefficientLaw& law, int d_N, int trials,
                                   double N, double eps, double t, uint64_t seed,
                                   int directions) {
    if (trials < 1000) throw std::invalid_argument("tail_diagnostics: need trials >= 1000");
    DiagnosticsReport rep;
    rep.d_N = d_N;
    rep.trials = trials;
    rep.n = N;
    rep.eps = eps;
    rep.t = t;

    // fixed unit directions from a dedicated stream
    std::vector<Eigen::VectorXcd> us;
    for (int k = 0; k < directions; ++k) {
        Eigen::VectorXcd u = draw_coefficients(CoefficientLaw::gaussian(), d_N, seed,
                                               stream_id(0xD1ECu, k), 0);
        us.push_back(u / u.norm());
    }

    std::vector<double> mean_log(directions, 0.0);
    long a2_hits = 0, a3_hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXcd a = draw_coefficients(law, d_N, seed, stream_id(0xA11u, trial), 0);
        if (std::log(a.norm()) > N * eps) ++a2_hits;
        for (int k = 0; k < directions; ++k) {
            const double li = std::log(std::abs(us[k].conjugate().dot(a)));
            mean_log[k] += li / trials;
            if (k == 0 && li < -N * t) ++a3_hits;
        }
    }
    double lo = mean_log[0], hi = mean_log[0], sup = 0;
    for (double v : mean_log) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sup = std::max(sup, std::abs(v));
    }
    rep.mean_log_inner_max = sup;
    rep.mean_log_inner_spread = hi - lo;
    rep.a2_probability = double(a2_hits) / trials;
    rep.a3_probability = double(a3_hits) / trials;
    rep.a2_sigma = std::sqrt(std::max(rep.a2_probability * (1 - rep.a2_probability), 1e-12) / trials);
    rep.a3_sigma = std::sqrt(std::max(rep.a3_probability * (1 - rep.a3_probability), 1e-12) / trials);
    return rep;
}

}  // namespace bklab
