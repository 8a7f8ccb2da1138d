#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "siframes/serialization.hpp"

namespace siframes::cli {

inline constexpr std::string_view kCommands[] = {
    "analyze", "dimension-function", "project", "parseval-check", "independence", "dilation-check", "demo",
};

struct CommandBlock {
  std::string command;
  Json params;
};

struct SpecFile {
  std::string version;
  AffineConfig affine;
  std::vector<ModStepFn> probes;
  std::vector<CommandBlock> analysis;
  /// "sha256:<hex>" of the raw input bytes.
  std::string digest;
};

/// ParseError (with line and column) for malformed JSON or invalid step
/// functions, SchemaError naming the field for everything else.
SpecFile load_spec(const std::string& path);
SpecFile parse_spec(std::string_view text);

std::string sha256_hex(std::string_view bytes);

enum class OutputFormat { Json, Csv };

struct Flags {
  std::optional<std::string> out;
  std::optional<Rational> tol;
  std::optional<SweepWindow> window;
  std::optional<int> max_size;
  std::optional<Rational> epsilon;
  std::optional<int> depth;
  std::optional<std::int64_t> a;
  std::optional<Rational> b;
  std::optional<Rational> c;
  OutputFormat format = OutputFormat::Json;
  bool timings = false;
};

/// "JMIN:JMAX,KMIN:KMAX"
SweepWindow parse_window(std::string_view text);

struct Report {
  Json json;
  std::optional<std::string> csv;
  /// 0 pass, 1 mathematical failure, 2 input error.
  int exit_code = 0;

  std::string text() const;
};

/// Runs one command. `target` names the demo for `demo`. Library errors are
/// reported in the JSON with exit code 2 rather than thrown.
Report execute(const SpecFile* spec, const std::string& command, const std::string& target, const Flags& flags);

}  // namespace siframes::cli
