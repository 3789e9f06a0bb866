#ifndef BKLAB_POLYTOPE_HPP
#define BKLAB_POLYTOPE_HPP

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace bklab {

using Rat = boost::rational<long long>;

/// Exponent vector J = (j_1,...,j_m) in Z^m.  Entries may be negative
/// (Laurent support).
using LatticePoint = std::vector<long long>;

/// Convex hull of finitely many lattice points, stored hull-reduced:
/// `vertices` are exactly the extreme points.  In 2D the cycle is
/// counterclockwise starting from the lexicographic minimum; in 1D it is
/// {min,max}; in 3D the order is lexicographic.
struct IntegralPolytope {
    int m = 0;
    std::vector<LatticePoint> vertices;

    bool is_point() const { return vertices.size() == 1; }
};

/// Half-space a.x <= b with primitive integer normal.  Full-dimensional
/// polytopes are the intersection of their facet half-spaces.
struct Facet {
    std::vector<long long> normal;
    long long offset = 0;
};

IntegralPolytope hull(const std::vector<LatticePoint>& points);
IntegralPolytope dilate(const IntegralPolytope& P, long long N);
IntegralPolytope minkowski_sum(const IntegralPolytope& P1, const IntegralPolytope& P2);

/// Lebesgue volume in the ambient dimension, exact.  A polytope of affine
/// dimension < m has volume 0.
Rat volume(const IntegralPolytope& P);

/// All integer points of P, lexicographically sorted.
std::vector<LatticePoint> lattice_points(const IntegralPolytope& P);

/// Affine dimension of the vertex set (0 = point, m = full-dimensional).
int affine_dim(const IntegralPolytope& P);

/// Facet inequalities; requires affine_dim(P) == m.
std::vector<Facet> facets(const IntegralPolytope& P);

/// Exact membership test, any affine dimension.
bool contains(const IntegralPolytope& P, const std::vector<Rat>& x);
bool contains(const IntegralPolytope& P, std::span<const double> x, double tol = 1e-9);

/// True iff x is interior: every facet inequality holds with margin.
/// Requires a full-dimensional P.
bool strictly_inside(const IntegralPolytope& P, std::span<const double> x,
                     double margin = 1e-10);

struct MixedVolumeReport {
    Rat value;
    // Inclusion-exclusion terms: index subset (strictly increasing) -> volume
    // of the Minkowski sum over that subset.
    std::map<std::vector<int>, Rat> subset_volumes;
};

/// Mixed volume of exactly m polytopes in R^m, normalized so that
/// MV(Sigma,...,Sigma) = 1 and MV(P,...,P) = m! Vol(P).
MixedVolumeReport mixed_volume(const std::vector<IntegralPolytope>& Ps);

/// Support function phi_P(x) = max over vertices of <x,v>.
double support_function(const IntegralPolytope& P, std::span<const double> x);

/// H_P(z) = max_{J in P} log|z^J| = phi_P(Log z); all |z_i| must be nonzero.
double h_p(const IntegralPolytope& P, std::span<const std::complex<double>> z);

/// True iff <u,x> = phi_P(u) within 1e-10 * (1 + |phi_P(u)|).
/// Throws if x is not a point of P.
bool in_normal_cone(const IntegralPolytope& P, std::span<const double> x,
                    std::span<const double> u);

/// Radius of the largest ball centered at interior point p that fits in a
/// full-dimensional P (min distance from p to the facet hyperplanes).
double inscribed_radius(const IntegralPolytope& P, std::span<const double> p);

/// Named polytopes used throughout: "simplex1"/"simplex2"/"simplex3"
/// (unit simplices), "interval" ([0,1]), "square" ([0,1]^2), "cube"
/// ([0,1]^3), "trapezoid5" (Conv((0,0),(0,1),(1,1),(5,0))).
IntegralPolytope named_polytope(const std::string& name);

std::string to_string(const Rat& r);

}  // namespace bklab

#endif
