#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "siframes/cli.hpp"
#include "siframes/errors.hpp"

using namespace siframes;

namespace {

template <class T>
std::optional<T> maybe(const std::string& text, T (*parse)(std::string_view)) {
  if (text.empty()) return std::nullopt;
  return parse(text);
}

Rational rational_arg(std::string_view s) { return parse_rational(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-invariant spaces and affine Parseval frames, computed exactly."};
  std::string command;
  std::string target;
  std::string spec_path;
  std::string out_path;
  std::string tol;
  std::string window;
  std::string epsilon;
  std::string b;
  std::string c;
  std::optional<int> max_size;
  std::optional<int> depth;
  std::optional<std::int64_t> a;
  bool as_json = false;
  bool as_csv = false;
  bool timings = false;

  app.add_option("command", command, "analyze | dimension-function | project | parseval-check | independence | "
                                     "dilation-check | demo")
      ->required();
  app.add_option("target", target, "demo name: heil | bownik-speegle");
  app.add_option("--spec", spec_path, "JSON spec file");
  app.add_option("--out", out_path, "write the report to FILE instead of stdout");
  app.add_option("--tol", tol, "relative independence tolerance, as a rational");
  app.add_option("--window", window, "sweep window JMIN:JMAX,KMIN:KMAX");
  app.add_option("--max-size", max_size, "largest subset size in the independence sweep");
  app.add_option("--epsilon", epsilon, "epsilon for demo bownik-speegle (default 1/4)");
  app.add_option("--depth", depth, "truncation depth of the negative dilates");
  app.add_option("--a", a, "dilation for demo heil (default 2)");
  app.add_option("--b", b, "lattice spacing for demo heil (default 1)");
  app.add_option("--c", c, "left end of the support for demo heil (default 1)");
  auto* json_flag = app.add_flag("--json", as_json, "JSON report (default)");
  app.add_flag("--csv", as_csv, "CSV output where available")->excludes(json_flag);
  app.add_flag("--timings", timings, "add wall-clock timings to the report");
  app.set_version_flag("--version", SIFRAMES_VERSION_STRING);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  cli::Flags flags;
  std::optional<cli::SpecFile> spec;
  cli::Report report;
  try {
    flags.tol = maybe<Rational>(tol, rational_arg);
    flags.epsilon = maybe<Rational>(epsilon, rational_arg);
    flags.b = maybe<Rational>(b, rational_arg);
    flags.c = maybe<Rational>(c, rational_arg);
    if (!window.empty()) flags.window = cli::parse_window(window);
    flags.max_size = max_size;
    flags.depth = depth;
    flags.a = a;
    flags.format = as_csv ? cli::OutputFormat::Csv : cli::OutputFormat::Json;
    flags.timings = timings;
    if (!out_path.empty()) flags.out = out_path;
    if (!spec_path.empty()) spec = cli::load_spec(spec_path);
    report = cli::execute(spec ? &*spec : nullptr, command, target, flags);
  } catch (const Error& e) {
    report.json = Json{{"tool", "siframes"},
                            {"command", command},
                            {"pass", false},
                            {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
    report.exit_code = 2;
  }

  const std::string text = report.text();
  if (flags.out) {
    std::ofstream out(*flags.out, std::ios::binary);
    if (!out) {
      std::cerr << "siframes: cannot write " << *flags.out << "\n";
      return 2;
    }
    out << text;
  } else {
    std::cout << text;
  }
  if (report.exit_code == 2 && report.json.contains("error")) {
    std::cerr << "siframes: " << report.json["error"]["message"].get<std::string>() << "\n";
  }
  return report.exit_code;
}
