#include "bklab/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bklab {

namespace {

using i128 = __int128;

long long ll_gcd(long long a, long long b) { return std::gcd(std::abs(a), std::abs(b)); }

void check_dims(const std::vector<LatticePoint>& pts) {
    if (pts.empty()) throw std::invalid_argument("hull: empty point list");
    const size_t m = pts.front().size();
    if (m < 1) throw std::invalid_argument("hull: zero-dimensional ambient space");
    if (m > 3) throw std::invalid_argument("hull: ambient dimension > 3 not supported");
    for (const auto& p : pts)
        if (p.size() != m) throw std::invalid_argument("hull: mixed point dimensions");
}

std::vector<LatticePoint> dedup_sorted(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// cross product of (b-a) and (c-a), exact
i128 cross2(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
    return i128(b[0] - a[0]) * (c[1] - a[1]) - i128(b[1] - a[1]) * (c[0] - a[0]);
}

std::array<i128, 3> cross3(const std::array<i128, 3>& u, const std::array<i128, 3>& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

// Andrew monotone chain, strict turns: collinear points are dropped.
// Returns the CCW cycle starting at the lexicographic minimum.
std::vector<LatticePoint> hull2d(std::vector<LatticePoint> pts) {
    pts = dedup_sorted(std::move(pts));
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<LatticePoint> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    if (h.size() == 2 && h[0] == h[1]) h.resize(1);
    return h;  // starts at lex-min, CCW
}

// Rank of the difference set {p - pts[0]} over Q; also reports one or two
// independent difference vectors.
int affine_rank(const std::vector<LatticePoint>& pts, std::array<std::array<i128, 3>, 3>* basis_out = nullptr) {
    const size_t m = pts.front().size();
    std::vector<std::array<i128, 3>> basis;
    for (size_t i = 1; i < pts.size() && basis.size() < m; ++i) {
        std::array<i128, 3> d{0, 0, 0};
        for (size_t j = 0; j < m; ++j) d[j] = pts[i][j] - pts[0][j];
        if (d[0] == 0 && d[1] == 0 && d[2] == 0) continue;
        if (basis.empty()) {
            basis.push_back(d);
        } else if (basis.size() == 1) {
            auto c = cross3(basis[0], d);
            if (c[0] != 0 || c[1] != 0 || c[2] != 0) basis.push_back(d);
        } else {
            auto c = cross3(basis[0], basis[1]);
            i128 det = c[0] * d[0] + c[1] * d[1] + c[2] * d[2];
            if (det != 0) basis.push_back(d);
        }
    }
    if (basis_out)
        for (size_t i = 0; i < basis.size(); ++i) (*basis_out)[i] = basis[i];
    return int(basis.size());
}

void normalize_facet(std::vector<long long>& n, long long& b) {
    long long g = 0;
    for (long long v : n) g = ll_gcd(g, v);
    g = ll_gcd(g, b);
    if (g > 1) {
        for (auto& v : n) v /= g;
        b /= g;
    }
}

// Supporting-plane enumeration with exact predicates.  Desk-scale vertex
// counts keep the cubic triple loop cheap; coordinates must stay well below
// 1e5 so that the int128 determinants are exact.
std::vector<Facet> facets3d(const std::vector<LatticePoint>& pts) {
    const size_t n = pts.size();
    std::set<std::pair<std::vector<long long>, long long>> seen;
    std::vector<Facet> out;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                std::array<i128, 3> u{pts[j][0] - pts[i][0], pts[j][1] - pts[i][1], pts[j][2] - pts[i][2]};
                std::array<i128, 3> v{pts[k][0] - pts[i][0], pts[k][1] - pts[i][1], pts[k][2] - pts[i][2]};
                auto nr = cross3(u, v);
                if (nr[0] == 0 && nr[1] == 0 && nr[2] == 0) continue;
                bool pos = false, neg = false;
                for (size_t l = 0; l < n && !(pos && neg); ++l) {
                    i128 s = nr[0] * (pts[l][0] - pts[i][0]) + nr[1] * (pts[l][1] - pts[i][1]) +
                             nr[2] * (pts[l][2] - pts[i][2]);
                    if (s > 0) pos = true;
                    if (s < 0) neg = true;
                }
                if (pos && neg) continue;
                std::vector<long long> nv{(long long)nr[0], (long long)nr[1], (long long)nr[2]};
                if (pos)  // flip so that all points satisfy n.x <= b
                    for (auto& c : nv) c = -c;
                long long b = nv[0] * pts[i][0] + nv[1] * pts[i][1] + nv[2] * pts[i][2];
                normalize_facet(nv, b);
                if (seen.insert({nv, b}).second) out.push_back({nv, b});
            }
    return out;
}

std::vector<LatticePoint> hull3d(std::vector<LatticePoint> pts) {
    pts = dedup_sorted(std::move(pts));
    if (pts.size() <= 2) return pts;
    std::array<std::array<i128, 3>, 3> basis;
    const int rank = affine_rank(pts, &basis);
    if (rank == 0) return {pts.front()};
    if (rank == 1) {
        auto mm = std::minmax_element(pts.begin(), pts.end());
        return {*mm.first, *mm.second};
    }
    if (rank == 2) {
        // project onto the pair of coordinates where the plane normal is largest
        auto nr = cross3(basis[0], basis[1]);
        int drop = 0;
        auto mag = [](i128 x) { return x < 0 ? -x : x; };
        if (mag(nr[1]) > mag(nr[drop])) drop = 1;
        if (mag(nr[2]) > mag(nr[drop])) drop = 2;
        std::map<LatticePoint, LatticePoint> lift;
        std::vector<LatticePoint> proj;
        for (const auto& p : pts) {
            LatticePoint q;
            for (int c = 0; c < 3; ++c)
                if (c != drop) q.push_back(p[c]);
            lift[q] = p;  // injective on the plane
            proj.push_back(q);
        }
        auto h2 = hull2d(proj);
        std::vector<LatticePoint> out;
        for (const auto& q : h2) out.push_back(lift.at(q));
        return dedup_sorted(out);
    }
    auto fs = facets3d(pts);
    // a point is a vertex iff its incident facet normals span R^3
    std::vector<LatticePoint> verts;
    for (const auto& p : pts) {
        std::vector<const Facet*> inc;
        for (const auto& f : fs)
            if (f.normal[0] * p[0] + f.normal[1] * p[1] + f.normal[2] * p[2] == f.offset)
                inc.push_back(&f);
        bool extreme = false;
        for (size_t a = 0; a < inc.size() && !extreme; ++a)
            for (size_t b = a + 1; b < inc.size() && !extreme; ++b)
                for (size_t c = b + 1; c < inc.size() && !extreme; ++c) {
                    std::array<i128, 3> u{inc[a]->normal[0], inc[a]->normal[1], inc[a]->normal[2]};
                    std::array<i128, 3> v{inc[b]->normal[0], inc[b]->normal[1], inc[b]->normal[2]};
                    auto cr = cross3(u, v);
                    i128 det = cr[0] * inc[c]->normal[0] + cr[1] * inc[c]->normal[1] + cr[2] * inc[c]->normal[2];
                    if (det != 0) extreme = true;
                }
        if (extreme) verts.push_back(p);
    }
    return dedup_sorted(verts);
}

Rat shoelace_area(const std::vector<LatticePoint>& cycle) {
    i128 twice = 0;
    const size_t n = cycle.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = cycle[i];
        const auto& b = cycle[(i + 1) % n];
        twice += i128(a[0]) * b[1] - i128(b[0]) * a[1];
    }
    if (twice < 0) twice = -twice;
    return Rat((long long)twice, 2);
}

// Cyclic vertex order of a 2-face of a 3-polytope, via the projected 2D hull.
std::vector<LatticePoint> face_cycle(const std::vector<LatticePoint>& face_pts,
                                     const std::vector<long long>& normal) {
    int drop = 0;
    for (int c = 1; c < 3; ++c)
        if (std::abs(normal[c]) > std::abs(normal[drop])) drop = c;
    std::map<LatticePoint, LatticePoint> lift;
    std::vector<LatticePoint> proj;
    for (const auto& p : face_pts) {
        LatticePoint q;
        for (int c = 0; c < 3; ++c)
            if (c != drop) q.push_back(p[c]);
        lift[q] = p;
        proj.push_back(q);
    }
    auto h2 = hull2d(proj);
    std::vector<LatticePoint> out;
    for (const auto& q : h2) out.push_back(lift.at(q));
    return out;
}

Rat volume3d(const IntegralPolytope& P) {
    const auto fs = facets3d(P.vertices);
    const auto& v0 = P.vertices.front();
    i128 six_vol = 0;
    for (const auto& f : fs) {
        std::vector<LatticePoint> face_pts;
        for (const auto& p : P.vertices)
            if (f.normal[0] * p[0] + f.normal[1] * p[1] + f.normal[2] * p[2] == f.offset)
                face_pts.push_back(p);
        auto cyc = face_cycle(face_pts, f.normal);
        if (cyc.size() < 3) continue;
        // fan triangulation; all signed tetra volumes share one sign per face
        i128 face_sum = 0;
        for (size_t i = 1; i + 1 < cyc.size(); ++i) {
            std::array<i128, 3> a{cyc[0][0] - v0[0], cyc[0][1] - v0[1], cyc[0][2] - v0[2]};
            std::array<i128, 3> b{cyc[i][0] - v0[0], cyc[i][1] - v0[1], cyc[i][2] - v0[2]};
            std::array<i128, 3> c{cyc[i + 1][0] - v0[0], cyc[i + 1][1] - v0[1], cyc[i + 1][2] - v0[2]};
            auto cr = cross3(b, c);
            face_sum += a[0] * cr[0] + a[1] * cr[1] + a[2] * cr[2];
        }
        six_vol += face_sum < 0 ? -face_sum : face_sum;
    }
    return Rat((long long)six_vol, 6);
}

}  // namespace

IntegralPolytope hull(const std::vector<LatticePoint>& points) {
    check_dims(points);
    const int m = int(points.front().size());
    IntegralPolytope P;
    P.m = m;
    if (m == 1) {
        long long lo = points[0][0], hi = points[0][0];
        for (const auto& p : points) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        P.vertices.push_back({lo});
        if (hi != lo) P.vertices.push_back({hi});
    } else if (m == 2) {
        P.vertices = hull2d(points);
    } else {
        P.vertices = hull3d(points);
    }
    return P;
}

IntegralPolytope dilate(const IntegralPolytope& P, long long N) {
    if (N < 1) throw std::invalid_argument("dilate: N must be >= 1");
    IntegralPolytope Q = P;
    for (auto& v : Q.vertices)
        for (auto& c : v) c *= N;
    return Q;
}

IntegralPolytope minkowski_sum(const IntegralPolytope& P1, const IntegralPolytope& P2) {
    if (P1.m != P2.m) throw std::invalid_argument("minkowski_sum: dimension mismatch");
    std::vector<LatticePoint> sums;
    sums.reserve(P1.vertices.size() * P2.vertices.size());
    for (const auto& a : P1.vertices)
        for (const auto& b : P2.vertices) {
            LatticePoint s(P1.m);
            for (int i = 0; i < P1.m; ++i) s[i] = a[i] + b[i];
            sums.push_back(std::move(s));
        }
    return hull(dedup_sorted(std::move(sums)));
}

int affine_dim(const IntegralPolytope& P) {
    if (P.vertices.size() <= 1) return 0;
    return affine_rank(P.vertices);
}

Rat volume(const IntegralPolytope& P) {
    if (affine_dim(P) < P.m) return Rat(0);
    if (P.m == 1) return Rat(P.vertices.back()[0] - P.vertices.front()[0]);
    if (P.m == 2) return shoelace_area(P.vertices);
    return volume3d(P);
}

std::vector<Facet> facets(const IntegralPolytope& P) {
    if (affine_dim(P) < P.m) throw std::invalid_argument("facets: polytope is not full-dimensional");
    std::vector<Facet> out;
    if (P.m == 1) {
        out.push_back({{1}, P.vertices.back()[0]});
        out.push_back({{-1}, -P.vertices.front()[0]});
    } else if (P.m == 2) {
        const size_t n = P.vertices.size();
        for (size_t i = 0; i < n; ++i) {
            const auto& a = P.vertices[i];
            const auto& b = P.vertices[(i + 1) % n];
            // outward normal of a CCW edge
            std::vector<long long> nv{b[1] - a[1], a[0] - b[0]};
            long long off = nv[0] * a[0] + nv[1] * a[1];
            normalize_facet(nv, off);
            out.push_back({nv, off});
        }
    } else {
        out = facets3d(P.vertices);
    }
    return out;
}

bool contains(const IntegralPolytope& P, const std::vector<Rat>& x) {
    if (int(x.size()) != P.m) throw std::invalid_argument("contains: dimension mismatch");
    const int d = affine_dim(P);
    if (d == P.m) {
        for (const auto& f : facets(P)) {
            Rat dot(0);
            for (int i = 0; i < P.m; ++i) dot += Rat(f.normal[i]) * x[i];
            if (dot > Rat(f.offset)) return false;
        }
        return true;
    }
    if (d == 0) {
        for (int i = 0; i < P.m; ++i)
            if (x[i] != Rat(P.vertices[0][i])) return false;
        return true;
    }
    if (d == 1) {
        // x = v0 + t (v1 - v0) with t in [0,1]
        const auto& v0 = P.vertices.front();
        const auto& v1 = P.vertices.back();
        Rat t(0);
        bool have_t = false;
        for (int i = 0; i < P.m; ++i) {
            Rat num = x[i] - Rat(v0[i]);
            long long den = v1[i] - v0[i];
            if (den == 0) {
                if (num != Rat(0)) return false;
            } else if (!have_t) {
                t = num / Rat(den);
                have_t = true;
            } else if (num != t * Rat(den)) {
                return false;
            }
        }
        return t >= Rat(0) && t <= Rat(1);
    }
    // d == 2 inside R^3: check the plane equation, then the projected polygon
    std::array<std::array<i128, 3>, 3> basis;
    affine_rank(P.vertices, &basis);
    auto nr = cross3(basis[0], basis[1]);
    Rat plane(0);
    for (int i = 0; i < 3; ++i) plane += Rat((long long)nr[i]) * (x[i] - Rat(P.vertices[0][i]));
    if (plane != Rat(0)) return false;
    int drop = 0;
    auto mag = [](i128 v) { return v < 0 ? -v : v; };
    for (int c = 1; c < 3; ++c)
        if (mag(nr[c]) > mag(nr[drop])) drop = c;
    std::vector<LatticePoint> proj;
    for (const auto& p : P.vertices) {
        LatticePoint q;
        for (int c = 0; c < 3; ++c)
            if (c != drop) q.push_back(p[c]);
        proj.push_back(q);
    }
    IntegralPolytope P2 = hull(proj);
    std::vector<Rat> x2;
    for (int c = 0; c < 3; ++c)
        if (c != drop) x2.push_back(x[c]);
    return contains(P2, x2);
}

bool contains(const IntegralPolytope& P, std::span<const double> x, double tol) {
    if (int(x.size()) != P.m) throw std::invalid_argument("contains: dimension mismatch");
    const int d = affine_dim(P);
    if (d == P.m) {
        for (const auto& f : facets(P)) {
            double dot = 0, scale = 1 + std::abs(double(f.offset));
            for (int i = 0; i < P.m; ++i) {
                dot += double(f.normal[i]) * x[i];
                scale += std::abs(double(f.normal[i]) * x[i]);
            }
            if (dot > double(f.offset) + tol * scale) return false;
        }
        return true;
    }
    if (d == 0) {
        for (int i = 0; i < P.m; ++i)
            if (std::abs(x[i] - double(P.vertices[0][i])) > tol) return false;
        return true;
    }
    // distance to the segment spanned by the endpoints (d == 1); the planar
    // d == 2 case inside R^3 is not needed at desk scale
    if (d == 1) {
        const auto& v0 = P.vertices.front();
        const auto& v1 = P.vertices.back();
        double num = 0, den = 0;
        for (int i = 0; i < P.m; ++i) {
            double e = double(v1[i] - v0[i]);
            num += (x[i] - double(v0[i])) * e;
            den += e * e;
        }
        double t = std::clamp(num / den, 0.0, 1.0);
        double dist2 = 0;
        for (int i = 0; i < P.m; ++i) {
            double proj = double(v0[i]) + t * double(v1[i] - v0[i]);
            dist2 += (x[i] - proj) * (x[i] - proj);
        }
        return std::sqrt(dist2) <= tol;
    }
    throw std::invalid_argument("contains: planar polytope in R^3 unsupported for float queries");
}

bool strictly_inside(const IntegralPolytope& P, std::span<const double> x, double margin) {
    if (affine_dim(P) < P.m) return false;
    for (const auto& f : facets(P)) {
        double dot = 0, nrm = 0;
        for (int i = 0; i < P.m; ++i) {
            dot += double(f.normal[i]) * x[i];
            nrm += double(f.normal[i]) * f.normal[i];
        }
        if (dot > double(f.offset) - margin * std::sqrt(nrm)) return false;
    }
    return true;
}

std::vector<LatticePoint> lattice_points(const IntegralPolytope& P) {
    const int m = P.m;
    std::vector<long long> lo(m), hi(m);
    for (int i = 0; i < m; ++i) {
        lo[i] = hi[i] = P.vertices[0][i];
        for (const auto& v : P.vertices) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    }
    const bool fulldim = affine_dim(P) == m;
    std::vector<Facet> fs;
    if (fulldim) fs = facets(P);
    std::vector<LatticePoint> out;
    LatticePoint p(m);
    // lexicographic bounding-box scan with exact half-space tests
    std::function<void(int)> scan = [&](int depth) {
        if (depth == m) {
            if (fulldim) {
                for (const auto& f : fs) {
                    i128 dot = 0;
                    for (int i = 0; i < m; ++i) dot += i128(f.normal[i]) * p[i];
                    if (dot > f.offset) return;
                }
                out.push_back(p);
            } else {
                std::vector<Rat> x(m);
                for (int i = 0; i < m; ++i) x[i] = Rat(p[i]);
                if (contains(P, x)) out.push_back(p);
            }
            return;
        }
        for (long long v = lo[depth]; v <= hi[depth]; ++v) {
            p[depth] = v;
            scan(depth + 1);
        }
    };
    scan(0);
    return out;  // scan order is lexicographic already
}

MixedVolumeReport mixed_volume(const std::vector<IntegralPolytope>& Ps) {
    if (Ps.empty()) throw std::invalid_argument("mixed_volume: no polytopes");
    const int m = Ps.front().m;
    if (int(Ps.size()) != m) throw std::invalid_argument("mixed_volume: need exactly m polytopes in R^m");
    for (const auto& P : Ps)
        if (P.m != m) throw std::invalid_argument("mixed_volume: dimension mismatch");
    MixedVolumeReport rep;
    rep.value = Rat(0);
    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> subset;
        IntegralPolytope S;
        bool first = true;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) {
                subset.push_back(i);
                S = first ? Ps[i] : minkowski_sum(S, Ps[i]);
                first = false;
            }
        Rat vol = volume(S);
        rep.subset_volumes[subset] = vol;
        const int k = int(subset.size());
        rep.value += ((m - k) % 2 == 0 ? vol : -vol);
    }
    return rep;
}

double support_function(const IntegralPolytope& P, std::span<const double> x) {
    if (int(x.size()) != P.m) throw std::invalid_argument("support_function: dimension mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : P.vertices) {
        double dot = 0;
        for (int i = 0; i < P.m; ++i) dot += x[i] * double(v[i]);
        best = std::max(best, dot);
    }
    return best;
}

double h_p(const IntegralPolytope& P, std::span<const std::complex<double>> z) {
    if (int(z.size()) != P.m) throw std::invalid_argument("h_p: dimension mismatch");
    std::vector<double> logz(P.m);
    for (int i = 0; i < P.m; ++i) {
        const double r = std::abs(z[i]);
        if (r == 0) throw std::invalid_argument("h_p: coordinate with modulus 0");
        logz[i] = std::log(r);
    }
    return support_function(P, logz);
}

bool in_normal_cone(const IntegralPolytope& P, std::span<const double> x, std::span<const double> u) {
    if (!contains(P, x, 1e-9)) throw std::invalid_argument("in_normal_cone: x not in P");
    double phi = support_function(P, u);
    double dot = 0;
    for (int i = 0; i < P.m; ++i) dot += u[i] * x[i];
    return std::abs(dot - phi) <= 1e-10 * (1 + std::abs(phi));
}

double inscribed_radius(const IntegralPolytope& P, std::span<const double> p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : facets(P)) {
        double dot = 0, nrm = 0;
        for (int i = 0; i < P.m; ++i) {
            dot += double(f.normal[i]) * p[i];
            nrm += double(f.normal[i]) * f.normal[i];
        }
        best = std::min(best, (double(f.offset) - dot) / std::sqrt(nrm));
    }
    if (best <= 0) throw std::invalid_argument("inscribed_radius: point not interior");
    return best;
}

IntegralPolytope named_polytope(const std::string& name) {
    if (name == "interval" || name == "simplex1") return hull({{0}, {1}});
    if (name == "simplex2") return hull({{0, 0}, {1, 0}, {0, 1}});
    if (name == "simplex3") return hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    if (name == "square") return hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    if (name == "cube")
        return hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    if (name == "trapezoid5") return hull({{0, 0}, {0, 1}, {1, 1}, {5, 0}});
    throw std::invalid_argument("unknown polytope name: " + name);
}

std::string to_string(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace bklab
