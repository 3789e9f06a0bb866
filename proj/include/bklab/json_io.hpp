#ifndef BKLAB_JSON_IO_HPP
#define BKLAB_JSON_IO_HPP

#include <json.hpp>

#include "bklab/ensembles.hpp"
#include "bklab/extremal.hpp"
#include "bklab/measures.hpp"
#include "bklab/solver.hpp"

namespace bklab {

using Json = nlohmann::json;

/// Exact double <-> string round trip via hex floats.
std::string double_to_hex(double v);
double double_from_hex(const std::string& s);

Json polytope_to_json(const IntegralPolytope& P);  // vertices in lex order
IntegralPolytope polytope_from_json(const Json& j);

Json mixed_volume_to_json(const MixedVolumeReport& rep);

/// Basis round trip preserves coefficients exactly (hex floats).
Json basis_to_json(const OrthoBasis& basis);
OrthoBasis basis_from_json(const Json& j);

Json count_report_to_json(const CountReport& rep);
Json convergence_to_json(const ConvergenceReport& rep);
Json diagnostics_to_json(const DiagnosticsReport& rep);
Json uniformity_to_json(const UniformityReport& rep);

/// ZeroSet CSV: re1,im1[,re2,im2],residual,flags.
std::string zeroset_csv(const ZeroSet& zeros, int m);

/// Coefficient dump CSV: index,re,im.
std::string coefficients_csv(const RandomPolynomial& f);

std::string amoeba_csv(const std::vector<std::array<double, 2>>& pts);

std::string histogram_csv(const LogHistogram& h);

/// FNV-1a over a byte string; used for run-directory naming and manifest
/// entries (not cryptographic).
uint64_t fnv1a(const std::string& bytes);

}  // namespace bklab

#endif
