#include <algorithm>
#include <chrono>
#include <sstream>

#include "siframes/cli.hpp"
#include "siframes/errors.hpp"
#include "siframes/probes.hpp"

#ifndef SIFRAMES_VERSION
#define SIFRAMES_VERSION "0.0.0"
#endif

namespace siframes::cli {

namespace {

constexpr std::uint64_t kProbeSeed = 20240917;
constexpr std::size_t kProbeCount = 10;

struct Outcome {
  Json result;
  bool pass = true;
  std::optional<std::string> csv;
};

class Params {
 public:
  Params(const Json& block, const Flags& flags) : block_(block), flags_(flags) {}

  int integer(const char* key, std::optional<int> flag, int fallback) const {
    if (flag) return *flag;
    if (block_.contains(key)) {
      if (!block_[key].is_number_integer()) throw Error(ErrorKind::SchemaError, std::string(key) + ": expected an integer");
      return block_[key].get<int>();
    }
    return fallback;
  }

  Rational rational(const char* key, const std::optional<Rational>& flag, const Rational& fallback) const {
    if (flag) return *flag;
    if (block_.contains(key)) return rational_from_json(block_[key], key);
    return fallback;
  }

  SweepWindow window(const SweepWindow& fallback) const {
    if (flags_.window) return *flags_.window;
    if (block_.contains("window")) {
      if (!block_["window"].is_string()) throw Error(ErrorKind::SchemaError, "window: expected \"JMIN:JMAX,KMIN:KMAX\"");
      return parse_window(block_["window"].get<std::string>());
    }
    return fallback;
  }

  const Json& block() const { return block_; }
  const Flags& flags() const { return flags_; }

 private:
  const Json& block_;
  const Flags& flags_;
};

Json window_json(const SweepWindow& w) {
  return std::to_string(w.j_min) + ":" + std::to_string(w.j_max) + "," + std::to_string(w.k_min) + ":" +
         std::to_string(w.k_max);
}

std::string decimal(double x) { return to_decimal(Real(x), 17); }

std::string value_text(const IntegralValue& v) {
  if (v.is_exact()) {
    if (auto q = v.exact_value().as_rational()) return to_string(*q);
    return v.exact_value().debug_string();
  }
  return to_decimal(v.value().re, 20);
}

int depth_param(const Params& p, int fallback) {
  const int depth = p.integer("depth", p.flags().depth, fallback);
  if (depth < 1 || depth > 8) throw Error(ErrorKind::InvalidArgument, "depth must be between 1 and 8");
  return depth;
}

Json stabilization_json(const AffineConfig& cfg, int max_depth) {
  try {
    const Stabilization s = stabilization_check(cfg, max_depth);
    Json out = Json::object();
    out["stabilized"] = s.stabilized;
    out["depth"] = s.depth;
    out["max_depth"] = max_depth;
    out["band_edge"] = rational_json(s.band_edge);
    out["band_dimension_previous"] = to_json(s.previous);
    out["band_dimension_current"] = to_json(s.current);
    return out;
  } catch (const Error& e) {
    return Json{{"error", e.what()}};
  }
}

// ---- commands -------------------------------------------------------------

Outcome dimension_function_cmd(const SpecFile& spec, const Params& p) {
  const int depth = depth_param(p, 3);
  const NegativeDilatesSpace v0 = negative_dilates_space(spec.affine, depth);
  const DimensionFunction dim = dimension_function(v0.space);
  Outcome out;
  out.result["depth"] = depth;
  out.result["lattice"] = Json{{"b", rational_json(v0.space.lattice.b)}};
  out.result["generator_count"] = v0.space.generators->size();
  out.result["exact"] = v0.space.exact();
  out.result["dimension_function"] = to_json(dim);
  out.result["dimension_integral"] = rational_json(dim.integral());
  out.result["stabilization"] = stabilization_json(spec.affine, std::max(depth, 2) + 1);
  out.csv = to_csv(dim);
  return out;
}

Outcome project_cmd(const SpecFile& spec, const Params& p) {
  const int depth = depth_param(p, 3);
  const NegativeDilatesSpace v0 = negative_dilates_space(spec.affine, depth);
  std::vector<std::pair<std::string, ModStepFn>> inputs;
  if (p.block().contains("functions")) {
    const Json& list = p.block()["functions"];
    if (!list.is_array()) throw Error(ErrorKind::SchemaError, "functions: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string name = "functions[" + std::to_string(i) + "]";
      inputs.emplace_back(name, step_from_json(list[i], name));
    }
  } else {
    inputs.emplace_back("psi", spec.affine.psi_hat);
    inputs.emplace_back("T_b psi", modulate(spec.affine.psi_hat, spec.affine.b));
    for (std::size_t i = 0; i < spec.probes.size(); ++i) inputs.emplace_back("probes[" + std::to_string(i) + "]", spec.probes[i]);
  }
  Outcome out;
  out.result["depth"] = depth;
  out.result["lattice"] = Json{{"b", rational_json(v0.space.lattice.b)}};
  Json rows = Json::array();
  for (const auto& [name, f] : inputs) {
    const ModStepFn proj = project(v0.space, f);
    const ModStepFn residual = f - proj;
    Json row = Json::object();
    row["name"] = name;
    row["exact"] = proj.is_exact();
    row["member"] = membership(v0.space, f).member;
    row["projection"] = to_json(proj);
    row["residual"] = to_json(residual);
    row["residual_norm2"] = to_json(norm2(residual));
    rows.push_back(std::move(row));
  }
  out.result["projections"] = std::move(rows);
  return out;
}

Json calderon_json(const ParsevalReport& r) {
  Json domain = Json::array();
  for (const auto& [lo, hi] : r.calderon.domain) domain.push_back(Json::array({rational_json(lo), rational_json(hi)}));
  Json out = Json::object();
  out["domain"] = std::move(domain);
  out["sum"] = to_json(r.calderon.sum);
  out["pass"] = r.calderon_pass;
  return out;
}

Json shift_json(const ParsevalReport& r) {
  Json out = Json::object();
  out["note"] = "external sufficient condition";
  out["q_max"] = r.q_max;
  out["failing_q"] = r.failing_q ? Json(*r.failing_q) : Json(nullptr);
  out["pass"] = r.shift_orthogonality_pass;
  return out;
}

std::vector<ModStepFn> probes_for(const SpecFile& spec) {
  if (!spec.probes.empty()) return spec.probes;
  return random_probes(kProbeCount, kProbeSeed, Rational(0), Rational(8));
}

Outcome parseval_result(const AffineConfig& cfg, const std::vector<ModStepFn>& probes) {
  const ParsevalReport r = parseval_verify(cfg, probes);
  Outcome out;
  out.result["calderon"] = calderon_json(r);
  out.result["shift_orthogonality"] = shift_json(r);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "probe,frame_sum,norm2,pass\n";
  for (std::size_t i = 0; i < r.probes.size(); ++i) {
    const ProbeResult& pr = r.probes[i];
    rows.push_back(Json{{"frame_sum", to_json(pr.frame_sum)}, {"norm2", to_json(pr.norm2)}, {"pass", pr.pass}});
    csv << i << ',' << value_text(pr.frame_sum) << ',' << value_text(pr.norm2) << ',' << (pr.pass ? "true" : "false")
        << '\n';
  }
  out.result["probes"] = Json{{"count", r.probes.size()}, {"pass", r.probes_pass}, {"results", std::move(rows)}};
  out.pass = r.pass();
  out.csv = csv.str();
  return out;
}

Outcome parseval_cmd(const SpecFile& spec, const Params&) { return parseval_result(spec.affine, probes_for(spec)); }

std::string subset_label(const std::vector<Element>& elements, const std::vector<std::size_t>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ';';
    out += "(" + std::to_string(elements[idx[i]].j) + " " + std::to_string(elements[idx[i]].k) + ")";
  }
  return out;
}

Outcome sweep_result(const AffineConfig& cfg, const Params& p, const SweepWindow& default_window, int default_size) {
  SweepOptions options;
  const SweepWindow window = p.window(default_window);
  options.max_subset_size = p.integer("max_size", p.flags().max_size, default_size);
  options.tolerance = to_real(p.rational("tol", p.flags().tol, Rational(1, 100000000)));
  if (!(options.tolerance > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  options.record_subsets = p.flags().format == OutputFormat::Csv;
  const SweepReport r = independence_sweep(cfg, window, options);

  Outcome out;
  out.result["window"] = window_json(window);
  out.result["max_subset_size"] = r.max_subset_size;
  out.result["tolerance"] = to_decimal(options.tolerance, 3);
  out.result["subset_count"] = r.subset_count;
  out.result["histogram"] = Json{{"independent", r.independent}, {"dependent", r.dependent}, {"inconclusive", r.inconclusive}};
  out.result["escalations"] = r.escalations;
  out.result["min_singular_value"] = decimal(r.min_singular_value);
  out.result["min_relative_singular_value"] = decimal(r.min_relative_singular_value);
  out.result["parseval_verified"] = r.parseval_verified ? Json(*r.parseval_verified) : Json(nullptr);
  out.result["v0_invariant"] = r.v0_invariant ? Json(*r.v0_invariant) : Json(nullptr);
  if (r.first_failure) {
    Json subset = Json::array();
    for (const auto& e : r.first_failure->subset) subset.push_back(to_json(e));
    out.result["first_failure"] = Json{{"subset", std::move(subset)}, {"verdict", to_json(r.first_failure->verdict)}};
  } else {
    out.result["first_failure"] = nullptr;
  }
  out.pass = r.pass();

  if (options.record_subsets) {
    const auto elements = window.elements();
    std::ostringstream csv;
    csv << "subset,size,elements,relative_singular_value\n";
    std::size_t rank = 0;
    for (int s = 1; s <= options.max_subset_size && static_cast<std::size_t>(s) <= elements.size(); ++s) {
      std::vector<std::size_t> idx(static_cast<std::size_t>(s));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      while (rank < r.subset_relative_singular_values.size()) {
        csv << rank << ',' << s << ',' << subset_label(elements, idx) << ','
            << decimal(r.subset_relative_singular_values[rank]) << '\n';
        ++rank;
        std::size_t i = idx.size();
        while (i > 0 && idx[i - 1] == elements.size() - idx.size() + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t l = i; l < idx.size(); ++l) idx[l] = idx[l - 1] + 1;
      }
    }
    out.csv = csv.str();
  }
  return out;
}

Outcome independence_cmd(const SpecFile& spec, const Params& p) {
  return sweep_result(spec.affine, p, SweepWindow{-2, 2, 0, 3}, 4);
}

Json dilation_json(const DilationCheck& d) {
  return Json{{"pass", d.pass}, {"lhs", to_json(d.lhs)}, {"rhs", to_json(d.rhs)}};
}

void dilation_csv(std::ostringstream& csv, const std::string& space, const DilationCheck& d) {
  for (const auto& [side, fn] : {std::pair{"lhs", &d.lhs}, std::pair{"rhs", &d.rhs}}) {
    for (const auto& s : fn->segments()) {
      csv << space << ',' << side << ',' << to_string(s.lo) << ',' << to_string(s.hi) << ',' << s.dim << '\n';
    }
  }
}

Outcome dilation_cmd(const SpecFile& spec, const Params& p) {
  const int depth = depth_param(p, 2);
  const AffineConfig& cfg = spec.affine;
  const DilationCheck single = dilation_dim_check(si_space(cfg.lattice(), {cfg.psi_hat}), cfg.a);
  const DilationCheck v0 = dilation_dim_check(negative_dilates_space(cfg, depth).space, cfg.a);
  Outcome out;
  out.result["a"] = cfg.a;
  out.result["principal_space"] = dilation_json(single);
  out.result["negative_dilates"] = dilation_json(v0);
  out.result["negative_dilates"]["depth"] = depth;
  out.pass = single.pass && v0.pass;
  std::ostringstream csv;
  csv << "space,side,lo,hi,dim\n";
  dilation_csv(csv, "principal", single);
  dilation_csv(csv, "negative_dilates", v0);
  out.csv = csv.str();
  return out;
}

Outcome run_block(const SpecFile& spec, const std::string& command, const Params& p) {
  if (command == "dimension-function") return dimension_function_cmd(spec, p);
  if (command == "project") return project_cmd(spec, p);
  if (command == "parseval-check") return parseval_cmd(spec, p);
  if (command == "independence") return independence_cmd(spec, p);
  if (command == "dilation-check") return dilation_cmd(spec, p);
  throw Error(ErrorKind::UnknownCommand, "unknown command '" + command + "'");
}

Outcome analyze_cmd(const SpecFile& spec, const Flags& flags) {
  std::vector<CommandBlock> blocks = spec.analysis;
  if (blocks.empty()) {
    for (const char* c : {"dimension-function", "parseval-check", "dilation-check", "independence"}) {
      blocks.push_back({c, Json{{"command", c}}});
    }
  }
  Outcome out;
  Json results = Json::array();
  for (const auto& b : blocks) {
    const Outcome o = run_block(spec, b.command, Params(b.params, flags));
    results.push_back(Json{{"command", b.command}, {"pass", o.pass}, {"result", o.result}});
    out.pass = out.pass && o.pass;
  }
  out.result["blocks"] = std::move(results);
  return out;
}

// ---- demos ----------------------------------------------------------------

Outcome demo_heil(const Flags& flags, Json& parameters) {
  const std::int64_t a = flags.a.value_or(2);
  const Rational b = flags.b.value_or(Rational(1));
  const Rational c = flags.c.value_or(Rational(1));
  if (a < 2) throw Error(ErrorKind::InvalidArgument, "--a must be an integer >= 2");
  if (b <= 0 || c <= 0) throw Error(ErrorKind::InvalidArgument, "--b and --c must be positive");
  // psi_hat = sqrt(b) on [c, a c) needs [c, a c) inside [c, c + 1/b).
  if ((a - 1) * c * b > 1) {
    throw Error(ErrorKind::InvalidArgument, "[c, a c) must fit in [c, c + 1/b), i.e. (a - 1) c b <= 1");
  }
  AffineConfig cfg{a, b, ModStepFn::indicator(c, c * a, Scalar::sqrt(b)), SupportMode::H2plus};
  parameters["a"] = a;
  parameters["b"] = rational_json(b);
  parameters["c"] = rational_json(c);

  Outcome out;
  out.result["config"] = to_json(cfg);
  const Outcome parseval = parseval_result(cfg, random_probes(kProbeCount, kProbeSeed, Rational(0), Rational(8)));
  out.result["parseval"] = parseval.result;
  const VkInvariance vk = vk_invariance_check(cfg, 3, b);
  out.result["v0_invariance"] = Json{{"depth", vk.depth}, {"shift", rational_json(b)}, {"invariant", vk.invariance.invariant},
                                     {"exact", vk.invariance.exact}, {"psi_in_v0", vk.psi_in_v0},
                                     {"v0_differs_from_v1", vk.v0_v1_witness.has_value()}};
  out.result["stabilization"] = stabilization_json(cfg, 4);
  const Json empty = Json::object();
  const Outcome sweep = sweep_result(cfg, Params(empty, flags), SweepWindow{-2, 2, 0, 3}, 4);
  out.result["independence"] = sweep.result;
  out.pass = parseval.pass && vk.invariance.invariant && sweep.pass;
  out.csv = parseval.csv;
  return out;
}

Outcome demo_bownik_speegle(const Flags& flags, Json& parameters) {
  const Rational eps = flags.epsilon.value_or(Rational(1, 4));
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::InvalidArgument, "--epsilon must lie in (0, 1)");
  parameters["epsilon"] = rational_json(eps);
  auto interval = [](const char* lo, const char* hi) {
    return ModStepFn::indicator(parse_rational(lo), parse_rational(hi));
  };
  const ModStepFn psi0 = interval("-1/4", "-1/8") + interval("1/8", "1/4");
  const ModStepFn psi1 = interval("-1/2", "-1/4") + interval("1/4", "3/4");
  const ModStepFn psi = psi0 + scale(psi1, Scalar(eps));
  const AffineConfig cfg{2, Rational(1), psi, SupportMode::Full};
  const int depth = flags.depth.value_or(3);
  const NegativeDilatesSpace v0 = negative_dilates_space(cfg, depth);

  const ModStepFn outer = interval("-1/2", "-1/4") + interval("3/8", "3/4");
  const ModStepFn expected_psi =
      scale(outer, Scalar(eps)) + scale(interval("-1/4", "-1/8") - interval("1/4", "3/8"), Scalar((1 - eps) / 2));
  const ModStepFn expected_shifted = modulate(
      scale(outer, Scalar(eps)) + scale(interval("-1/4", "-1/8") + interval("1/4", "3/8"), Scalar((1 + eps) / 2)), 1);

  const ModStepFn shifted = modulate(psi, 1);
  const ModStepFn residual_psi = psi - project(v0.space, psi);
  const ModStepFn residual_shifted = shifted - project(v0.space, shifted);
  const bool match_psi = equals(residual_psi, expected_psi);
  const bool match_shifted = equals(residual_shifted, expected_shifted);
  const InvarianceResult inv2 = invariance_test(v0.space, 2);
  const InvarianceResult inv1 = invariance_test(v0.space, 1);

  Outcome out;
  out.result["config"] = to_json(cfg);
  out.result["depth"] = depth;
  out.result["lattice"] = Json{{"b", rational_json(v0.space.lattice.b)}};
  out.result["dimension_function"] = to_json(dimension_function(v0.space));
  out.result["residual_psi"] = Json{{"computed", to_json(residual_psi)}, {"expected", to_json(expected_psi)}, {"match", match_psi}};
  out.result["residual_T1_psi"] =
      Json{{"computed", to_json(residual_shifted)}, {"expected", to_json(expected_shifted)}, {"match", match_shifted}};
  out.result["invariance"] = Json{{"t=2", inv2.invariant}, {"t=1", inv1.invariant}, {"exact", inv2.exact && inv1.exact}};
  out.result["psi_in_v0"] = membership(v0.space, psi).member;
  out.result["T1_psi_in_v0"] = membership(v0.space, shifted).member;
  out.result["stabilization"] = stabilization_json(cfg, 4);
  out.pass = match_psi && match_shifted && inv2.invariant && !inv1.invariant;
  return out;
}

}  // namespace

std::string Report::text() const {
  if (csv) return *csv;
  return json.dump(2) + "\n";
}

Report execute(const SpecFile* spec, const std::string& command, const std::string& target, const Flags& flags) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.json["tool"] = "siframes";
  report.json["version"] = SIFRAMES_VERSION;
  report.json["command"] = command;
  if (!target.empty()) report.json["target"] = target;
  Json parameters = Json::object();
  try {
    Outcome outcome;
    const bool known = std::find(std::begin(kCommands), std::end(kCommands), command) != std::end(kCommands);
    if (!known) throw Error(ErrorKind::UnknownCommand, "unknown command '" + command + "'");
    if (command == "demo") {
      if (target == "heil") {
        outcome = demo_heil(flags, parameters);
      } else if (target == "bownik-speegle") {
        outcome = demo_bownik_speegle(flags, parameters);
      } else {
        throw Error(ErrorKind::UnknownCommand, "unknown demo '" + target + "' (expected heil or bownik-speegle)");
      }
      report.json["input_digest"] = "sha256:" + sha256_hex(Json{{"demo", target}, {"parameters", parameters}}.dump());
    } else {
      if (!spec) throw Error(ErrorKind::InvalidArgument, "command '" + command + "' requires --spec FILE");
      report.json["input_digest"] = spec->digest;
      if (command == "analyze") {
        outcome = analyze_cmd(*spec, flags);
      } else {
        const CommandBlock* block = nullptr;
        for (const auto& b : spec->analysis) {
          if (b.command == command) {
            block = &b;
            break;
          }
        }
        const Json empty = Json::object();
        outcome = run_block(*spec, command, Params(block ? block->params : empty, flags));
      }
    }
    if (!parameters.empty()) report.json["parameters"] = parameters;
    report.json["pass"] = outcome.pass;
    report.json["result"] = std::move(outcome.result);
    report.exit_code = outcome.pass ? 0 : 1;
    if (flags.format == OutputFormat::Csv) {
      if (!outcome.csv) throw Error(ErrorKind::InvalidArgument, "CSV output is not available for '" + command + "'");
      report.csv = std::move(outcome.csv);
    }
  } catch (const Error& e) {
    report.json["pass"] = false;
    report.json["error"] = Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    report.json.erase("result");
    report.csv.reset();
    report.exit_code = 2;
  } catch (const std::exception& e) {
    report.json["pass"] = false;
    report.json["error"] = Json{{"kind", "InvalidArgument"}, {"message", e.what()}};
    report.json.erase("result");
    report.csv.reset();
    report.exit_code = 2;
  }
  if (flags.timings) {
    report.json["timings"] = Json{
        {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  }
  return report;
}

}  // namespace siframes::cli
