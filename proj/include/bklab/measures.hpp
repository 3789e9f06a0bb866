#ifndef BKLAB_MEASURES_HPP
#define BKLAB_MEASURES_HPP

#include <array>
#include <optional>

#include "bklab/extremal.hpp"
#include "bklab/solver.hpp"

namespace bklab {

/// Normalized point measure N^{-k} sum of Dirac masses at solved zeros.
struct EmpiricalMeasure {
    std::vector<CVec> points;
    int k = 1;
    long long N = 1;
    double weight() const { return std::pow(double(N), -double(k)); }
    double total_mass() const { return double(points.size()) * weight(); }

    static EmpiricalMeasure from_zeros(const ZeroSet& zeros, int k, long long N) {
        return {zeros.points, k, N};
    }
};

enum class RegionKind { Annulus, ModulusBand, LogHalfSpace, All };

/// Phase-invariant regions of (C*)^m: the product annulus rho < |z_i| < R,
/// a modulus band on one coordinate, a half-space <a, Log z> <= b, or
/// everything.
struct RegionSpec {
    RegionKind kind = RegionKind::All;
    double rho = 0, R = 0;                 // Annulus / ModulusBand
    int coord = 0;                         // ModulusBand
    std::vector<double> normal;            // LogHalfSpace
    double offset = 0;

    bool contains(const CVec& z) const;

    static RegionSpec all() { return {}; }
    static RegionSpec annulus(double rho, double R) {
        return {RegionKind::Annulus, rho, R, 0, {}, 0};
    }
    static RegionSpec modulus_band(int coord, double rho, double R) {
        return {RegionKind::ModulusBand, rho, R, coord, {}, 0};
    }
    static RegionSpec log_half_space(std::vector<double> a, double b) {
        return {RegionKind::LogHalfSpace, 0, 0, 0, std::move(a), b};
    }
};

/// Weighted count of measure points inside the region.
double region_mass(const EmpiricalMeasure& measure, const RegionSpec& region);

enum class DensityCase { FSSquare, TorusAngular };

/// Integral of the limit density over the region, by nested adaptive
/// quadrature in modulus-squared coordinates (relative target 1e-4).
/// `norm_bound` optionally intersects the region with {|z| < norm_bound}.
double predicted_mass(DensityCase tag, const RegionSpec& region,
                      const std::vector<IntegralPolytope>& Ps = {},
                      std::optional<double> norm_bound = std::nullopt);

struct UniformityReport {
    std::vector<double> ks_statistic;  // per coordinate, arg against uniform
    std::vector<double> ks_p_value;
    std::vector<std::vector<long long>> radial_histogram;  // log|z_i| bins
    double radial_lo = -2, radial_hi = 2;
    int points = 0;
};

/// Kolmogorov-Smirnov of the coordinate angles against the uniform law plus
/// a radial concentration profile.  Requires at least 20 points.
UniformityReport angular_uniformity(const EmpiricalMeasure& measure, int radial_bins = 40);

/// Fraction of zeros with ||z|-1| < eps (m = 1).
double kac_concentration(const EmpiricalMeasure& measure, double eps);

struct LogHistogram {
    std::vector<std::vector<double>> counts;  // weighted, bins[ix][iy]
    double lo = -10, hi = 10;
    int bins = 0;
    long long clipped = 0;
};

/// Histogram of Log-images of the zeros over [-10,10]^2 (m = 2).
LogHistogram logmap_histogram(const EmpiricalMeasure& measure, int bins);

/// Two-sided Kolmogorov-Smirnov statistic of sorted unit-interval samples
/// and the asymptotic p-value.
double ks_statistic_uniform(std::vector<double> samples);
double ks_p_value(double statistic, int n);

/// Compensated (Kahan) accumulator for deterministic aggregation.
struct KahanSum {
    double sum = 0, carry = 0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace bklab

#endif
