#include "bklab/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace bklab {

std::string double_to_hex(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double double_from_hex(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

Json polytope_to_json(const IntegralPolytope& P) {
    auto verts = P.vertices;
    std::sort(verts.begin(), verts.end());
    Json j;
    j["m"] = P.m;
    j["vertices"] = verts;
    return j;
}

IntegralPolytope polytope_from_json(const Json& j) {
    const int m = j.at("m").get<int>();
    std::vector<LatticePoint> verts = j.at("vertices").get<std::vector<LatticePoint>>();
    for (const auto& v : verts)
        if (int(v.size()) != m) throw std::invalid_argument("polytope_from_json: vertex arity mismatch");
    return hull(verts);
}

Json mixed_volume_to_json(const MixedVolumeReport& rep) {
    Json j;
    j["value"] = to_string(rep.value);
    Json subsets = Json::object();
    for (const auto& [subset, vol] : rep.subset_volumes) {
        std::string key;
        for (size_t i = 0; i < subset.size(); ++i)
            key += (i ? "+" : "") + std::to_string(subset[i]);
        subsets[key] = to_string(vol);
    }
    j["subset_volumes"] = subsets;
    return j;
}

Json basis_to_json(const OrthoBasis& basis) {
    Json j;
    j["N"] = basis.N;
    j["exponents"] = basis.exponents;
    j["polytope"] = polytope_to_json(basis.P);
    switch (basis.spec.kind) {
        case WeightedSetKind::TorusK: j["spec"] = {{"kind", "torus"}}; break;
        case WeightedSetKind::Sphere3: j["spec"] = {{"kind", "sphere3"}}; break;
        case WeightedSetKind::FubiniStudy:
            j["spec"] = {{"kind", "fs"}, {"p", basis.spec.p}};
            break;
        case WeightedSetKind::CustomQuadrature:
            throw std::invalid_argument("basis_to_json: custom-quadrature bases are not serializable");
    }
    if (basis.diagonal) {
        std::vector<std::string> d;
        for (int i = 0; i < basis.coeff_diag.size(); ++i)
            d.push_back(double_to_hex(basis.coeff_diag[i]));
        j["coeff_diag"] = d;
    } else {
        std::vector<std::vector<std::array<std::string, 2>>> rows;
        for (int r = 0; r < basis.coeff_dense.rows(); ++r) {
            std::vector<std::array<std::string, 2>> row;
            for (int c = 0; c < basis.coeff_dense.cols(); ++c)
                row.push_back({double_to_hex(basis.coeff_dense(r, c).real()),
                               double_to_hex(basis.coeff_dense(r, c).imag())});
            rows.push_back(std::move(row));
        }
        j["coeff_dense"] = rows;
    }
    return j;
}

OrthoBasis basis_from_json(const Json& j) {
    OrthoBasis b;
    b.N = j.at("N").get<long long>();
    b.P = polytope_from_json(j.at("polytope"));
    b.exponents = j.at("exponents").get<std::vector<LatticePoint>>();
    const std::string kind = j.at("spec").at("kind").get<std::string>();
    if (kind == "torus") b.spec = WeightedSetSpec::torus();
    else if (kind == "sphere3") b.spec = WeightedSetSpec::sphere3();
    else if (kind == "fs") b.spec = WeightedSetSpec::fubini_study(j.at("spec").at("p").get<int>());
    else throw std::invalid_argument("basis_from_json: unknown spec kind " + kind);
    if (j.contains("coeff_diag")) {
        b.diagonal = true;
        const auto d = j.at("coeff_diag").get<std::vector<std::string>>();
        b.coeff_diag.resize(d.size());
        for (size_t i = 0; i < d.size(); ++i) b.coeff_diag[i] = double_from_hex(d[i]);
    } else {
        b.diagonal = false;
        const auto rows = j.at("coeff_dense")
                              .get<std::vector<std::vector<std::array<std::string, 2>>>>();
        b.coeff_dense.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < rows[r].size(); ++c)
                b.coeff_dense(r, c) = {double_from_hex(rows[r][c][0]),
                                       double_from_hex(rows[r][c][1])};
    }
    return b;
}

Json count_report_to_json(const CountReport& rep) {
    return Json{{"found", rep.found},
                {"expected", rep.expected},
                {"match", rep.match},
                {"discarded", rep.discarded},
                {"suspects", rep.suspects}};
}

Json convergence_to_json(const ConvergenceReport& rep) {
    return Json{{"Ns", rep.Ns},
                {"errors", rep.errors},
                {"grid_spec", rep.grid_spec},
                {"monotone_trend", rep.monotone_trend},
                {"fitted_rate", rep.fitted_rate}};
}

Json diagnostics_to_json(const DiagnosticsReport& rep) {
    return Json{{"d_N", rep.d_N},
                {"trials", rep.trials},
                {"N", rep.n},
                {"eps", rep.eps},
                {"t", rep.t},
                {"mean_log_inner_max", rep.mean_log_inner_max},
                {"mean_log_inner_spread", rep.mean_log_inner_spread},
                {"a2_probability", rep.a2_probability},
                {"a2_sigma", rep.a2_sigma},
                {"a3_probability", rep.a3_probability},
                {"a3_sigma", rep.a3_sigma}};
}

Json uniformity_to_json(const UniformityReport& rep) {
    return Json{{"points", rep.points},
                {"ks_statistic", rep.ks_statistic},
                {"ks_p_value", rep.ks_p_value},
                {"radial_histogram", rep.radial_histogram},
                {"radial_range", {rep.radial_lo, rep.radial_hi}}};
}

namespace {
void append_double(std::ostringstream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}
}  // namespace

std::string zeroset_csv(const ZeroSet& zeros, int m) {
    std::ostringstream os;
    os << (m == 1 ? "re1,im1,residual,flags\n" : "re1,im1,re2,im2,residual,flags\n");
    for (size_t i = 0; i < zeros.points.size(); ++i) {
        for (int c = 0; c < m; ++c) {
            append_double(os, zeros.points[i][c].real());
            os << ',';
            append_double(os, zeros.points[i][c].imag());
            os << ',';
        }
        append_double(os, zeros.residuals[i]);
        os << ',' << int(zeros.multiplicity_suspect.empty() ? 0 : zeros.multiplicity_suspect[i])
           << '\n';
    }
    return os.str();
}

std::string coefficients_csv(const RandomPolynomial& f) {
    std::ostringstream os;
    os << "index,re,im\n";
    for (int j = 0; j < f.a.size(); ++j) {
        os << j << ',';
        append_double(os, f.a[j].real());
        os << ',';
        append_double(os, f.a[j].imag());
        os << '\n';
    }
    return os.str();
}

std::string amoeba_csv(const std::vector<std::array<double, 2>>& pts) {
    std::ostringstream os;
    os << "log_abs_z1,log_abs_z2\n";
    for (const auto& p : pts) {
        append_double(os, p[0]);
        os << ',';
        append_double(os, p[1]);
        os << '\n';
    }
    return os.str();
}

std::string histogram_csv(const LogHistogram& h) {
    std::ostringstream os;
    os << "ix,iy,x_center,y_center,mass\n";
    const double w = (h.hi - h.lo) / h.bins;
    for (int ix = 0; ix < h.bins; ++ix)
        for (int iy = 0; iy < h.bins; ++iy) {
            if (h.counts[ix][iy] == 0) continue;
            os << ix << ',' << iy << ',';
            append_double(os, h.lo + (ix + 0.5) * w);
            os << ',';
            append_double(os, h.lo + (iy + 0.5) * w);
            os << ',';
            append_double(os, h.counts[ix][iy]);
            os << '\n';
        }
    return os.str();
}

uint64_t fnv1a(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
    return h;
}

}  // namespace bklab
