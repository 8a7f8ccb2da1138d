#include "siframes/serialization.hpp"

#include <sstream>

#include "siframes/errors.hpp"

namespace siframes {

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::SchemaError, field + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) schema_error(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(field + "." + key, "missing");
  return *it;
}

Json term_json(const Gaussian& g, Surd::Radicand r) {
  Json out = Json::object();
  out["re"] = to_string(g.re);
  out["im"] = to_string(g.im);
  out["root"] = std::to_string(r);
  return out;
}

}  // namespace

Json rational_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) schema_error(field, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    schema_error(field, e.what());
  }
}

Json real_json(const Real& x, int digits) { return to_decimal(x, digits); }

Json to_json(const Scalar& s) {
  if (!s.is_exact()) {
    const HpComplex v = s.value();
    Json approx = Json::object();
    approx["re"] = real_json(v.re);
    approx["im"] = real_json(v.im);
    approx["err"] = real_json(s.error_bound(), 3);
    return Json{{"approx", approx}};
  }
  const auto& terms = s.surd().terms();
  if (terms.size() <= 1) {
    Json out = terms.empty() ? term_json(Gaussian{0, 0}, 1) : term_json(terms[0].second, terms[0].first);
    out["phase"] = to_string(s.phase());
    return out;
  }
  Json list = Json::array();
  for (const auto& [r, g] : terms) list.push_back(term_json(g, r));
  Json out = Json::object();
  out["terms"] = std::move(list);
  out["phase"] = to_string(s.phase());
  return out;
}

Scalar scalar_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer() || j.is_string()) return Scalar(rational_from_json(j, field));
  if (!j.is_object()) schema_error(field, "expected a scalar object");
  if (j.contains("approx")) schema_error(field, "approximate scalars cannot be read back exactly");
  const Rational phase = j.contains("phase") ? rational_from_json(j["phase"], field + ".phase") : Rational(0);
  auto read_term = [&](const Json& t, const std::string& where) {
    const Rational re = t.contains("re") ? rational_from_json(t["re"], where + ".re") : Rational(0);
    const Rational im = t.contains("im") ? rational_from_json(t["im"], where + ".im") : Rational(0);
    const Rational root = t.contains("root") ? rational_from_json(t["root"], where + ".root") : Rational(1);
    if (root <= 0) schema_error(where + ".root", "must be positive");
    return Scalar::from_parts(re, im, root, 0).surd();
  };
  Surd value;
  if (j.contains("terms")) {
    const Json& terms = j["terms"];
    if (!terms.is_array()) schema_error(field + ".terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      value += read_term(terms[i], field + ".terms[" + std::to_string(i) + "]");
    }
  } else {
    value = read_term(j, field);
  }
  return Scalar::exact(std::move(value), phase);
}

Json to_json(const ModStepFn& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) {
    Json piece = Json::object();
    piece["lo"] = rational_json(p.lo);
    piece["hi"] = rational_json(p.hi);
    piece["amp"] = to_json(p.amp);
    piece["mod"] = rational_json(p.mod);
    pieces.push_back(std::move(piece));
  }
  return Json{{"pieces", std::move(pieces)}};
}

ModStepFn step_from_json(const Json& j, const std::string& field) {
  const Json& list = member(j, "pieces", field);
  if (!list.is_array()) schema_error(field + ".pieces", "expected an array");
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = field + ".pieces[" + std::to_string(i) + "]";
    const Json& p = list[i];
    Piece piece{rational_from_json(member(p, "lo", where), where + ".lo"),
                rational_from_json(member(p, "hi", where), where + ".hi"),
                p.contains("amp") ? scalar_from_json(p["amp"], where + ".amp") : Scalar(1),
                p.contains("mod") ? rational_from_json(p["mod"], where + ".mod") : Rational(0)};
    pieces.push_back(std::move(piece));
  }
  return ModStepFn::make(std::move(pieces));
}

Json to_json(const IntegralValue& v) {
  Json out = Json::object();
  out["exact"] = v.is_exact();
  if (v.is_exact()) {
    out["value"] = to_json(v.exact_value());
  } else {
    out["value"] = to_json(Scalar::approx(v.value(), v.error_bound()));
  }
  return out;
}

Json to_json(const SISpace& v) {
  Json out = Json::object();
  out["lattice"] = Json{{"b", rational_json(v.lattice.b)}};
  out["exact"] = v.exact();
  if (v.generators) out["generator_count"] = v.generators->size();
  Json cells = Json::array();
  for (const auto& c : v.cells) {
    Json cell = Json::object();
    cell["lo"] = rational_json(c.lo);
    cell["hi"] = rational_json(c.hi);
    cell["dim"] = c.dim();
    cell["exact"] = c.exact;
    cell["indices"] = c.indices;
    Json basis = Json::array();
    for (const auto& vec : c.basis) {
      Json row = Json::array();
      for (const auto& s : vec) row.push_back(to_json(s));
      basis.push_back(std::move(row));
    }
    cell["basis"] = std::move(basis);
    Json norms = Json::array();
    for (const auto& s : c.norms2) norms.push_back(to_json(s));
    cell["norms2"] = std::move(norms);
    cells.push_back(std::move(cell));
  }
  out["cells"] = std::move(cells);
  return out;
}

Json to_json(const DimensionFunction& d) {
  Json segments = Json::array();
  for (const auto& s : d.segments()) {
    segments.push_back(Json{{"lo", rational_json(s.lo)}, {"hi", rational_json(s.hi)}, {"dim", s.dim}});
  }
  Json out = Json::object();
  out["lo"] = rational_json(d.lo());
  out["hi"] = rational_json(d.hi());
  out["segments"] = std::move(segments);
  return out;
}

std::string to_csv(const DimensionFunction& d) {
  std::ostringstream out;
  out << "lo,hi,dim\n";
  for (const auto& s : d.segments()) out << to_string(s.lo) << ',' << to_string(s.hi) << ',' << s.dim << '\n';
  return out.str();
}

Json to_json(const AffineConfig& cfg) {
  Json out = Json::object();
  out["a"] = cfg.a;
  out["b"] = rational_json(cfg.b);
  out["psi_hat"] = to_json(cfg.psi_hat);
  out["mode"] = cfg.mode == SupportMode::H2plus ? "H2plus" : "full";
  return out;
}

AffineConfig config_from_json(const Json& j, const std::string& field) {
  AffineConfig cfg;
  const Json& a = member(j, "a", field);
  if (!a.is_number_integer()) schema_error(field + ".a", "expected an integer");
  cfg.a = a.get<std::int64_t>();
  if (cfg.a < 2) schema_error(field + ".a", "dilation must be an integer >= 2");
  cfg.b = rational_from_json(member(j, "b", field), field + ".b");
  if (cfg.b <= 0) schema_error(field + ".b", "b must be positive");
  cfg.psi_hat = step_from_json(member(j, "psi_hat", field), field + ".psi_hat");
  if (j.contains("mode")) {
    const Json& m = j["mode"];
    if (m == "H2plus") {
      cfg.mode = SupportMode::H2plus;
    } else if (m == "full") {
      cfg.mode = SupportMode::Full;
    } else {
      schema_error(field + ".mode", "expected \"H2plus\" or \"full\"");
    }
  }
  return cfg;
}

Json to_json(const Element& e) { return Json{{"j", e.j}, {"k", e.k}}; }

Json to_json(const IndependenceVerdict& v) {
  Json out = Json::object();
  out["status"] = std::string(to_string(v.status));
  out["lambda_min"] = real_json(v.lambda_min);
  out["lambda_max"] = real_json(v.lambda_max);
  out["min_singular_value"] = real_json(v.min_singular_value);
  out["relative_singular_value"] = real_json(v.relative_singular_value);
  out["tolerance"] = real_json(v.tolerance, 3);
  if (v.witness) {
    Json w = Json::array();
    for (const auto& c : *v.witness) w.push_back(to_json(c));
    out["witness"] = std::move(w);
    out["witness_exact"] = v.witness_exact;
  }
  if (v.residual_norm) out["residual_norm"] = real_json(*v.residual_norm);
  return out;
}

}  // namespace siframes
