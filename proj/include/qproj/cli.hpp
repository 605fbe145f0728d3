#pragma once

// Manifest model and command runner behind tools/qproj.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qproj::cli {

using Json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode { exit_ok = 0, exit_failed = 1, exit_usage = 2, exit_inconclusive = 3 };

using StringMatrix = std::vector<std::vector<std::string>>;

struct ModuleSpec {
  std::string name;
  std::vector<int> generator_degrees;
  std::vector<int> relation_degrees;
  StringMatrix matrix;  // rows: generators, columns: relations
};

struct Manifest {
  std::string name;
  std::string title;
  std::string text;  // raw bytes, for the digest

  // [algebra]
  std::vector<std::string> generators;
  std::vector<int> degrees;
  std::vector<std::string> relations;
  int truncation = 8;

  // [central]
  std::optional<std::string> central;
  bool quotient = false;
  std::vector<long long> dual_series;

  // [automorphism]
  std::vector<std::string> automorphism;

  std::vector<ModuleSpec> modules;

  // [matrix_factorization]
  // mode "pair": PQ = QP = fE; mode "squares": P^2 = Q^2 = fE.
  // Either way X = coker P and Y = coker Q.
  struct Mf {
    std::string f;
    StringMatrix p, q;
    bool squares = false;
  };
  std::optional<Mf> mf;

  // [pipeline]
  struct Pipeline {
    std::optional<std::pair<int, int>> helix_window;
    std::optional<std::pair<int, int>> table_window;
    std::optional<int> hbound;
    std::vector<std::string> nu;
    std::vector<std::string> helix_pattern;
    int period = 0;
    std::vector<std::string> exceptional;
    std::optional<int> section_truncation;
  } pipeline;

  // [construction]
  struct Construction {
    std::string kind;  // "qveronese" or "section"
    int r = 0;
    std::vector<std::string> parts;
  };
  std::optional<Construction> construction;
};

// Throws UsageError on malformed input, unknown keys or unparsable polynomials.
Manifest parse_manifest(std::string_view text, const std::string& fallback_name = "manifest");
// A path, or the name of a bundled manifest.
Manifest load_manifest(const std::string& where);

struct Options {
  std::optional<int> truncation;
  std::optional<int> hbound;
  std::optional<std::pair<int, int>> window;
  std::string field = "q";
  std::vector<std::string> args;  // positional arguments after the manifest
};

std::pair<int, int> parse_window(std::string_view text);  // "a..b"

struct Outcome {
  Json report;
  int exit_code = exit_ok;
};

const std::vector<std::string>& commands();
Outcome run(const std::string& command, const Manifest& m, const Options& o);

// "json": sorted keys, two-space indent, trailing newline; "table": aligned text.
std::string emit(const Json& report, const std::string& format);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace qproj::cli
