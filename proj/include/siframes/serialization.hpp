#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "siframes/affine.hpp"
#include "siframes/independence.hpp"

namespace siframes {

using Json = nlohmann::ordered_json;

/// Rationals are written as "p/q" (or "p" for integers). Readers also accept
/// JSON integers. `field` names the location used in SchemaError messages.
Json rational_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& field);

/// Decimal string at working precision.
Json real_json(const Real& x, int digits = 20);

/// One term: {"re","im","root","phase"}; several radicands:
/// {"terms":[{"re","im","root"}...],"phase"}; approximations:
/// {"approx":{"re","im","err"}}.
Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, const std::string& field);

/// {"pieces":[{"lo","hi","amp","mod"}...]}; "amp" defaults to 1 and "mod" to 0 when read.
Json to_json(const ModStepFn& f);
ModStepFn step_from_json(const Json& j, const std::string& field);

/// {"exact":true,"value":scalar} or {"exact":false,"value":{"approx":...}}.
Json to_json(const IntegralValue& v);

Json to_json(const SISpace& v);
Json to_json(const DimensionFunction& d);
/// Columns lo,hi,dim with rational endpoints.
std::string to_csv(const DimensionFunction& d);

/// {"a":2,"b":"1","psi_hat":{...},"mode":"H2plus"|"full"}
Json to_json(const AffineConfig& cfg);
AffineConfig config_from_json(const Json& j, const std::string& field);

Json to_json(const Element& e);
Json to_json(const IndependenceVerdict& v);

}  // namespace siframes
