#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "siframes/cli.hpp"
#include "siframes/errors.hpp"

namespace siframes::cli {

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  // nlohmann reports the position one past the offending character.
  if (column > 1) --column;
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

bool is_step_error(ErrorKind k) {
  return k == ErrorKind::OverlapConflict || k == ErrorKind::DegenerateInterval;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::InvalidArgument, "sha256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

SweepWindow parse_window(std::string_view text) {
  const auto comma = text.find(',');
  auto range = [&](std::string_view part) {
    const auto colon = part.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorKind::InvalidArgument, "window range needs MIN:MAX");
    try {
      std::size_t used = 0;
      const std::string lo(part.substr(0, colon));
      const std::string hi(part.substr(colon + 1));
      const long long a = std::stoll(lo, &used);
      if (used != lo.size()) throw std::invalid_argument(lo);
      const long long b = std::stoll(hi, &used);
      if (used != hi.size()) throw std::invalid_argument(hi);
      return std::pair<std::int64_t, std::int64_t>(a, b);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "window bounds must be integers: '" + std::string(part) + "'");
    }
  };
  if (comma == std::string_view::npos) throw Error(ErrorKind::InvalidArgument, "window must be JMIN:JMAX,KMIN:KMAX");
  const auto [j0, j1] = range(text.substr(0, comma));
  const auto [k0, k1] = range(text.substr(comma + 1));
  if (j0 > j1 || k0 > k1) throw Error(ErrorKind::InvalidArgument, "window ranges must be nonempty");
  return {j0, j1, k0, k1};
}

SpecFile parse_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, line_column(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "spec: expected a JSON object");

  SpecFile spec;
  spec.digest = "sha256:" + sha256_hex(text);
  try {
    if (!doc.contains("version")) throw Error(ErrorKind::SchemaError, "version: missing");
    if (!doc["version"].is_string()) throw Error(ErrorKind::SchemaError, "version: expected a string");
    spec.version = doc["version"].get<std::string>();
    if (!doc.contains("affine")) throw Error(ErrorKind::SchemaError, "affine: missing");
    spec.affine = config_from_json(doc["affine"], "affine");
    spec.affine.validate();
    if (doc.contains("probes")) {
      const Json& probes = doc["probes"];
      if (!probes.is_array()) throw Error(ErrorKind::SchemaError, "probes: expected an array");
      for (std::size_t i = 0; i < probes.size(); ++i) {
        spec.probes.push_back(step_from_json(probes[i], "probes[" + std::to_string(i) + "]"));
      }
    }
    if (doc.contains("analysis")) {
      const Json& blocks = doc["analysis"];
      if (!blocks.is_array()) throw Error(ErrorKind::SchemaError, "analysis: expected an array");
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string field = "analysis[" + std::to_string(i) + "]";
        const Json& block = blocks[i];
        if (!block.is_object() || !block.contains("command") || !block["command"].is_string()) {
          throw Error(ErrorKind::SchemaError, field + ".command: missing");
        }
        const std::string command = block["command"].get<std::string>();
        const bool known = std::find(std::begin(kCommands), std::end(kCommands), command) != std::end(kCommands);
        if (!known || command == "analyze" || command == "demo") {
          throw Error(ErrorKind::SchemaError, field + ".command: unsupported command '" + command + "'");
        }
        spec.analysis.push_back({command, block});
      }
    }
  } catch (const Error& e) {
    if (is_step_error(e.kind())) throw Error(ErrorKind::ParseError, e.what());
    throw;
  }
  return spec;
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

}  // namespace siframes::cli
