#pragma once

// Deterministic report documents for the CLI: JSON/CSV emission with fixed
// key order and 17-significant-digit floats, so identical configs produce
// byte-identical data sections.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsim/fock.hpp"

namespace wsim::report {

inline constexpr std::string_view kVersion = "1.0.0";

/// %.17g: round-trip exact for doubles.
std::string format_double(double v);

std::string json_escape(std::string_view s);

/// Pre-serialized JSON fragment.
class JsonValue {
 public:
  static JsonValue number(double v);
  static JsonValue integer(long long v);
  static JsonValue boolean(bool v);
  static JsonValue string(std::string_view s);
  static JsonValue null();
  static JsonValue raw(std::string fragment);

  const std::string& str() const { return text_; }

 private:
  explicit JsonValue(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

/// Insertion-ordered object builder emitting compact JSON.
class JsonObject {
 public:
  JsonObject& put(std::string_view key, JsonValue v);
  JsonObject& put(std::string_view key, double v) { return put(key, JsonValue::number(v)); }
  JsonObject& put(std::string_view key, int v) { return put(key, JsonValue::integer(v)); }
  JsonObject& put(std::string_view key, bool v) { return put(key, JsonValue::boolean(v)); }
  JsonObject& put(std::string_view key, std::string_view v) {
    return put(key, JsonValue::string(v));
  }
  JsonObject& put(std::string_view key, const char* v) {
    return put(key, JsonValue::string(v));
  }

  JsonValue value() const;

 private:
  std::vector<std::pair<std::string, std::string>> members_;
};

class JsonArray {
 public:
  JsonArray& add(JsonValue v);
  JsonValue value() const;

 private:
  std::vector<std::string> items_;
};

/// State dump: one record per term, occupations in canonical order,
/// [[mode, "H"|"V", count], ...] plus re/im. The state is phase-canonicalized
/// before printing.
JsonValue state_terms(const StateVector& s);

/// CSV with a fixed header row; floats via format_double.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> fields);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parsed command configuration, mirroring the CLI flags.
struct RunConfig {
  enum class Command { Expand, Cascade, Optimize, Verify };
  enum class Format { Json, Csv };

  Command command = Command::Expand;
  int n = 2;
  std::string source = "single";  // "single" | "epr"
  std::string first = "pdbs";     // "pdbs" | "balanced"
  double eta_h;                   // defaulted to the optimal values by the CLI
  double eta_v;
  int grid = 201;
  int refine_rounds = 40;
  Format format = Format::Json;
  std::string output = "-";  // "-" = stdout
};

struct Document {
  std::string body;
  int exit_code = 0;        // 0 ok, 1 self-check failure
  std::string diagnostic;   // stderr message when exit_code != 0
};

/// Runs one command and renders its report. Usage-class problems (bad n,
/// invalid source/first combination, bad reflectivities) throw wsim::Error;
/// the caller maps those to exit code 2.
Document run_command(const RunConfig& config);

}  // namespace wsim::report
