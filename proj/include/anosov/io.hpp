#pragma once

#include "anosov/commuting.hpp"
#include "anosov/cone.hpp"
#include "anosov/crystal.hpp"
#include "anosov/exotic.hpp"
#include "anosov/heisenberg.hpp"
#include "anosov/infratorus.hpp"
#include "anosov/polynomial.hpp"
#include "anosov/spectrum.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace anosov {

using json = nlohmann::json;

/// Malformed or ill-typed input document.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Rationals are JSON integers, decimal strings ("-7", "3/4", big values), or
// [num, den] pairs. Output uses integers when they fit in 53 bits, strings
// otherwise, and [num, den] for non-integers.
Rational rational_from_json(const json& j);
json to_json(const Rational& r);
json to_json(const Integer& z);

RatVector vector_from_json(const json& j);
json to_json(const RatVector& v);
RatMatrix matrix_from_json(const json& j);
json to_json(const RatMatrix& m);
/// Coefficients, constant term first.
RatPoly poly_from_json(const json& j);
json to_json(const RatPoly& p);

AffineMap affine_from_json(const json& j);
json to_json(const AffineMap& a);

/// {"dim", "holonomy": [matrix], "section": [{"g_index", "u"}], "lattice"?}
CrystalGroup group_from_json(const json& j);
json to_json(const CrystalGroup& g);

json to_json(const SpectralClass& s);
json to_json(const ValidationReport& r);
json to_json(const CommutingPair& p);
json to_json(const H2Action& h);
json to_json(const AssemblyReport& r);
json to_json(const GromollFact& f);

json to_json(const NilAuto& a);
json to_json(const HeisPoint& p);

/// { "L", "k", "scale", "strength", "s", "m_cap", "epsilon", "grid" }
PerturbationSpec perturbation_spec_from_json(const json& j);
json to_json(const ConeCertificate& c);
json to_json(const CertifyResult& r);
json to_json(const MinimalMResult& r);

/// Reads a whole file as JSON; SchemaError on I/O or parse failure.
json read_json_file(const std::string& path);

} // namespace anosov
