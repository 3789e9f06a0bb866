#include "bklab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bklab/quadrature.hpp"

namespace bklab {

bool RegionSpec::contains(const CVec& z) const {
    switch (kind) {
        case RegionKind::All:
            return true;
        case RegionKind::Annulus:
            for (const auto& zi : z) {
                const double a = std::abs(zi);
                if (!(rho < a && a < R)) return false;
            }
            return true;
        case RegionKind::ModulusBand: {
            const double a = std::abs(z.at(coord));
            return rho < a && a < R;
        }
        case RegionKind::LogHalfSpace: {
            double dot = 0;
            for (size_t i = 0; i < z.size(); ++i) dot += normal.at(i) * std::log(std::abs(z[i]));
            return dot <= offset;
        }
    }
    return false;
}

double region_mass(const EmpiricalMeasure& measure, const RegionSpec& region) {
    KahanSum s;
    for (const auto& z : measure.points)
        if (region.contains(z)) s.add(measure.weight());
    return s.sum;
}

namespace {

// region test in modulus-squared coordinates (t1, t2), valid because all
// region kinds are phase-invariant
bool region_contains_t(const RegionSpec& region, double t1, double t2) {
    const CVec z{Cplx(std::sqrt(t1), 0), Cplx(std::sqrt(t2), 0)};
    return region.contains(z);
}

}  // namespace

double predicted_mass(DensityCase tag, const RegionSpec& region,
                      const std::vector<IntegralPolytope>& Ps,
                      std::optional<double> norm_bound) {
    if (tag == DensityCase::TorusAngular) {
        if (Ps.empty()) throw std::invalid_argument("predicted_mass: TorusAngular needs polytopes");
        // the limit lives on the unit torus; a phase-invariant region either
        // contains it or misses it
        CVec torus_pt(Ps.front().m, Cplx(1, 0));
        bool inside = region.contains(torus_pt);
        if (inside && norm_bound) inside = std::sqrt(double(Ps.front().m)) < *norm_bound;
        if (!inside) return 0.0;
        const auto mv = mixed_volume(Ps);
        return boost::rational_cast<double>(mv.value);
    }

    // FSSquare: density depends on u = t1 + t2 only and the allowed region is
    // the band |t1 - t2| < 1; integrate in (u, v) coordinates with nested
    // adaptive rules.  dt1 dt2 = (1/2) du dv and the phases contribute pi^2.
    // The |z| < b cut is u < b^2; without it the cutoff leaves a tail below
    // the 1e-4 relative target.
    const double ucap = std::min(norm_bound ? (*norm_bound) * (*norm_bound) : 4.0e3, 4.0e3);
    if (ucap <= 0) return 0.0;
    auto inner = [&](double u) {
        const double vmax = std::min(u, 1.0);
        if (vmax <= 0) return 0.0;
        auto f = [&](double v) {
            const double t1 = 0.5 * (u + v), t2 = 0.5 * (u - v);
            if (t1 <= 0 || t2 <= 0) return 0.0;
            if (!region_contains_t(region, t1, t2)) return 0.0;
            const double w = 1.0 + u;
            return 8.0 / (M_PI * M_PI * w * w * w);
        };
        return 0.5 * M_PI * M_PI * integrate_adaptive(f, -vmax, vmax, 1e-10);
    };
    return integrate_adaptive(inner, 0.0, std::min(1.0, ucap), 1e-7) +
           (ucap > 1.0 ? integrate_adaptive(inner, 1.0, ucap, 1e-7) : 0.0);
}

double ks_statistic_uniform(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const int n = int(samples.size());
    double d = 0;
    for (int i = 0; i < n; ++i) {
        const double x = samples[i];
        d = std::max(d, std::abs(x - double(i) / n));
        d = std::max(d, std::abs(double(i + 1) / n - x));
    }
    return d;
}

double ks_p_value(double statistic, int n) {
    const double sn = std::sqrt(double(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
    double p = 0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

UniformityReport angular_uniformity(const EmpiricalMeasure& measure, int radial_bins) {
    const size_t n = measure.points.size();
    if (n < 20) throw std::invalid_argument("angular_uniformity: fewer than 20 points");
    const int m = int(measure.points.front().size());
    UniformityReport rep;
    rep.points = int(n);
    rep.radial_histogram.assign(m, std::vector<long long>(radial_bins, 0));
    for (int i = 0; i < m; ++i) {
        std::vector<double> u(n);
        for (size_t j = 0; j < n; ++j)
            u[j] = std::arg(measure.points[j][i]) / (2 * M_PI) + 0.5;  // in [0,1)
        const double d = ks_statistic_uniform(u);
        rep.ks_statistic.push_back(d);
        rep.ks_p_value.push_back(ks_p_value(d, int(n)));
        for (size_t j = 0; j < n; ++j) {
            const double lr = std::log(std::abs(measure.points[j][i]));
            const double t = (lr - rep.radial_lo) / (rep.radial_hi - rep.radial_lo);
            const int b = std::clamp(int(t * radial_bins), 0, radial_bins - 1);
            rep.radial_histogram[i][b]++;
        }
    }
    return rep;
}

double kac_concentration(const EmpiricalMeasure& measure, double eps) {
    if (measure.points.empty()) return 0.0;
    long long inside = 0;
    for (const auto& z : measure.points)
        if (std::abs(std::abs(z[0]) - 1.0) < eps) ++inside;
    return double(inside) / double(measure.points.size());
}

LogHistogram logmap_histogram(const EmpiricalMeasure& measure, int bins) {
    LogHistogram h;
    h.bins = bins;
    h.counts.assign(bins, std::vector<double>(bins, 0.0));
    for (const auto& z : measure.points) {
        const double x = std::log(std::abs(z.at(0)));
        const double y = std::log(std::abs(z.at(1)));
        if (x < h.lo || x >= h.hi || y < h.lo || y >= h.hi) {
            ++h.clipped;
            continue;
        }
        const int ix = int((x - h.lo) / (h.hi - h.lo) * bins);
        const int iy = int((y - h.lo) / (h.hi - h.lo) * bins);
        h.counts[ix][iy] += measure.weight();
    }
    return h;
}

}  // namespace bklab
