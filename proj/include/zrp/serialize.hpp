#pragma once

#include <string>

#include <json.hpp>

#include "zrp/oracle.hpp"
#include "zrp/spectral.hpp"

namespace zrp {

using Json = nlohmann::json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& what);

/// {"right":[{"c":[re,im],"n":int,"mu":[re,im]},...],"left":[...]}
Json exppoly_to_json(const PiecewiseExpPoly& f);
PiecewiseExpPoly exppoly_from_json(const Json& j);

/// {"regular": exppoly, "delta": [[re,im],...]}
Json distributional_to_json(const DistributionalValue& v);

Json boundary_data_to_json(const BoundaryData& b);

/// Matrices are row-major arrays; entries are plain reals or [re, im].
Json matrix_to_json(const Eigen::MatrixXcd& M);
Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& what);
Eigen::VectorXcd vector_from_json(const Json& j, const std::string& what);

Json spec_to_json(const ExtensionSpec& spec);
Json spectrum_report_to_json(const SpectrumReport& rep);

/// Deterministic serialization: sorted keys, doubles printed with %.17g.
std::string dump17(const Json& j);

/// FNV-1a hex digest of a string (config digests in run manifests).
std::string fnv1a_hex(const std::string& s);

} // namespace zrp
