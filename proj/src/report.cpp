#include "wsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "wsim/optimize.hpp"
#include "wsim/protocols.hpp"

namespace wsim::report {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

JsonValue JsonValue::number(double v) { return JsonValue(format_double(v)); }
JsonValue JsonValue::integer(long long v) { return JsonValue(std::to_string(v)); }
JsonValue JsonValue::boolean(bool v) { return JsonValue(v ? "true" : "false"); }
JsonValue JsonValue::string(std::string_view s) {
  return JsonValue('"' + json_escape(s) + '"');
}
JsonValue JsonValue::null() { return JsonValue("null"); }
JsonValue JsonValue::raw(std::string fragment) { return JsonValue(std::move(fragment)); }

JsonObject& JsonObject::put(std::string_view key, JsonValue v) {
  members_.emplace_back(std::string(key), v.str());
  return *this;
}

JsonValue JsonObject::value() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, fragment] : members_) {
    if (!first) out += ',';
    first = false;
    out += '"' + json_escape(key) + "\":" + fragment;
  }
  out += '}';
  return JsonValue::raw(std::move(out));
}

JsonArray& JsonArray::add(JsonValue v) {
  items_.push_back(v.str());
  return *this;
}

JsonValue JsonArray::value() const {
  std::string out = "[";
  bool first = true;
  for (const auto& fragment : items_) {
    if (!first) out += ',';
    first = false;
    out += fragment;
  }
  out += ']';
  return JsonValue::raw(std::move(out));
}

JsonValue state_terms(const StateVector& s) {
  JsonArray records;
  const StateVector canonical = phase_canonicalized(s);
  for (const auto& [occ, amp] : canonical.terms()) {
    JsonArray channels;
    for (const auto& [ch, count] : occ.entries()) {
      JsonArray triple;
      triple.add(JsonValue::integer(ch.mode));
      triple.add(JsonValue::string(ch.pol == Polarization::H ? "H" : "V"));
      triple.add(JsonValue::integer(count));
      channels.add(triple.value());
    }
    JsonObject record;
    record.put("occupation", channels.value());
    record.put("re", amp.real());
    record.put("im", amp.imag());
    records.add(record.value());
  }
  return records.value();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
  rows_.push_back(std::move(fields));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

namespace {

constexpr double kSelfCheckFidelity = 1e-6;   // expand at optimal reflectivities
constexpr double kOptimizerAgreement = 1e-6;  // numeric vs closed form
constexpr double kVerifyTolerance = 1e-9;     // formula vs simulation

std::string wrap(const JsonObject& config, const JsonValue& data) {
  JsonObject meta;
  meta.put("version", kVersion);
  meta.put("config", config.value());
  JsonObject doc;
  doc.put("meta", meta.value());
  doc.put("data", data);
  return doc.value().str() + "\n";
}

SourceKind parse_source(const std::string& s) {
  if (s == "single") return SourceKind::SinglePhotons;
  if (s == "epr") return SourceKind::EprSeed;
  throw InvalidSpec("source must be 'single' or 'epr'");
}

FirstElement parse_first(const std::string& s) {
  if (s == "pdbs") return FirstElement::Pdbs;
  if (s == "balanced") return FirstElement::Balanced;
  throw InvalidSpec("first element must be 'pdbs' or 'balanced'");
}

Document cmd_expand(const RunConfig& config) {
  if (config.n < 1) throw InvalidN("expand requires --n >= 1");
  const Reflectivity r(config.eta_h, config.eta_v);
  const ExpansionReport report = expand_once(build_w(config.n), config.n - 1, r);

  Document doc;
  if (r.is_optimal() && report.fidelity_with_target < 1.0 - kSelfCheckFidelity) {
    doc.exit_code = 1;
    doc.diagnostic = "self-check failed: fidelity " +
                     format_double(report.fidelity_with_target) +
                     " at the optimal reflectivities";
  }

  if (config.format == RunConfig::Format::Csv) {
    CsvTable table({"n", "eta_h", "eta_v", "success_probability", "analytic_probability",
                    "fidelity"});
    table.add_row({std::to_string(config.n), format_double(config.eta_h),
                   format_double(config.eta_v), format_double(report.success_probability),
                   format_double(report.analytic_probability),
                   format_double(report.fidelity_with_target)});
    doc.body = table.str();
    return doc;
  }

  JsonObject cfg;
  cfg.put("command", "expand");
  cfg.put("n", config.n);
  cfg.put("eta_h", config.eta_h);
  cfg.put("eta_v", config.eta_v);
  cfg.put("format", "json");

  JsonObject data;
  data.put("n", config.n);
  data.put("eta_h", config.eta_h);
  data.put("eta_v", config.eta_v);
  data.put("success_probability", report.success_probability);
  data.put("analytic_probability", report.analytic_probability);
  data.put("fidelity", report.fidelity_with_target);
  data.put("steps", report.steps);
  data.put("state", state_terms(report.output_state));
  doc.body = wrap(cfg, data.value());
  return doc;
}

Document cmd_cascade(const RunConfig& config) {
  CascadeSpec spec{config.n, parse_source(config.source), parse_first(config.first),
                   Reflectivity(config.eta_h, config.eta_v)};
  spec.validate();

  std::vector<CascadeStage> trace;
  const ExpansionReport report = run_cascade(spec, trace);

  Document doc;
  if (config.format == RunConfig::Format::Csv) {
    CsvTable table({"stage", "probability", "cumulative_probability", "fidelity"});
    for (const auto& stage : trace)
      table.add_row({std::to_string(stage.stage), format_double(stage.probability),
                     format_double(stage.cumulative), format_double(stage.fidelity)});
    doc.body = table.str();
    return doc;
  }

  JsonObject cfg;
  cfg.put("command", "cascade");
  cfg.put("n", config.n);
  cfg.put("source", config.source);
  cfg.put("first_element", config.first);
  cfg.put("eta_h", config.eta_h);
  cfg.put("eta_v", config.eta_v);
  cfg.put("format", "json");

  JsonArray stages;
  for (const auto& stage : trace) {
    JsonObject row;
    row.put("stage", stage.stage);
    row.put("probability", stage.probability);
    row.put("cumulative_probability", stage.cumulative);
    row.put("fidelity", stage.fidelity);
    stages.add(row.value());
  }

  JsonObject data;
  data.put("n", config.n);
  data.put("source", config.source);
  data.put("first_element", config.first);
  data.put("eta_h", config.eta_h);
  data.put("eta_v", config.eta_v);
  data.put("total_probability", report.success_probability);
  data.put("analytic_probability", report.analytic_probability);
  data.put("fidelity", report.fidelity_with_target);
  data.put("steps", report.steps);
  data.put("stages", stages.value());
  data.put("state", state_terms(report.output_state));
  doc.body = wrap(cfg, data.value());
  return doc;
}

Document cmd_optimize(const RunConfig& config) {
  const OptimizationResult numeric =
      optimize_numeric(config.n, config.grid, config.refine_rounds);
  const OptimizationResult closed = solve_closed_form();
  const double eta_error = std::max(std::abs(numeric.eta_h - closed.eta_h),
                                    std::abs(numeric.eta_v - closed.eta_v));

  Document doc;
  if (eta_error > kOptimizerAgreement) {
    doc.exit_code = 1;
    doc.diagnostic = "self-check failed: numeric optimum differs from the closed form by " +
                     format_double(eta_error);
  }

  if (config.format == RunConfig::Format::Csv) {
    CsvTable table({"n_from", "grid", "refine_rounds", "eta_h", "eta_v", "probability",
                    "fidelity", "iterations", "converged", "closed_form_eta_h",
                    "closed_form_eta_v", "closed_form_probability"});
    table.add_row({std::to_string(config.n), std::to_string(config.grid),
                   std::to_string(config.refine_rounds), format_double(numeric.eta_h),
                   format_double(numeric.eta_v), format_double(numeric.probability),
                   format_double(numeric.fidelity), std::to_string(numeric.iterations),
                   numeric.converged ? "true" : "false", format_double(closed.eta_h),
                   format_double(closed.eta_v), format_double(closed.probability)});
    doc.body = table.str();
    return doc;
  }

  JsonObject cfg;
  cfg.put("command", "optimize");
  cfg.put("n_from", config.n);
  cfg.put("grid", config.grid);
  cfg.put("refine_rounds", config.refine_rounds);
  cfg.put("format", "json");

  auto result_json = [](const OptimizationResult& r) {
    JsonObject obj;
    obj.put("eta_h", r.eta_h);
    obj.put("eta_v", r.eta_v);
    obj.put("probability", r.probability);
    obj.put("fidelity", r.fidelity);
    obj.put("iterations", r.iterations);
    obj.put("converged", r.converged);
    return obj.value();
  };

  JsonObject data;
  data.put("n_from", config.n);
  data.put("grid", config.grid);
  data.put("refine_rounds", config.refine_rounds);
  data.put("numeric", result_json(numeric));
  data.put("closed_form", result_json(closed));
  data.put("max_eta_error", eta_error);
  doc.body = wrap(cfg, data.value());
  return doc;
}

struct VerifyCell {
  std::optional<double> formula;
  std::optional<double> simulated;
};

struct VerifyRow {
  int n = 0;
  VerifyCell single_pdbs, single_balanced, epr_pdbs;
  std::optional<double> tashima;
};

Document cmd_verify(const RunConfig& config) {
  constexpr int kMinN = 2, kMaxN = 8;
  std::vector<VerifyRow> rows;
  bool all_match = true;

  auto simulate = [](int n, SourceKind source, FirstElement first) {
    CascadeSpec spec{n, source, first, Reflectivity::optimal()};
    return run_cascade(spec).success_probability;
  };

  for (int n = kMinN; n <= kMaxN; ++n) {
    VerifyRow row;
    row.n = n;
    row.single_pdbs = {analytic_cascade_probability(n, SourceKind::SinglePhotons,
                                                    FirstElement::Pdbs),
                       simulate(n, SourceKind::SinglePhotons, FirstElement::Pdbs)};
    row.single_balanced = {analytic_cascade_probability(n, SourceKind::SinglePhotons,
                                                        FirstElement::Balanced),
                           simulate(n, SourceKind::SinglePhotons, FirstElement::Balanced)};
    if (n >= 3) {
      row.epr_pdbs = {analytic_cascade_probability(n, SourceKind::EprSeed, FirstElement::Pdbs),
                      simulate(n, SourceKind::EprSeed, FirstElement::Pdbs)};
      row.tashima = tashima_probability(n);
    }
    for (const VerifyCell* cell : {&row.single_pdbs, &row.single_balanced, &row.epr_pdbs})
      if (cell->formula && cell->simulated &&
          std::abs(*cell->formula - *cell->simulated) > kVerifyTolerance)
        all_match = false;
    rows.push_back(row);
  }

  Document doc;
  if (!all_match) {
    doc.exit_code = 1;
    doc.diagnostic = "self-check failed: formula and simulation disagree beyond " +
                     format_double(kVerifyTolerance);
  }

  if (config.format == RunConfig::Format::Csv) {
    CsvTable table({"n", "single_pdbs_formula", "single_pdbs_simulated",
                    "single_balanced_formula", "single_balanced_simulated",
                    "epr_pdbs_formula", "epr_pdbs_simulated", "tashima_formula"});
    auto cell = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string{};
    };
    for (const auto& row : rows)
      table.add_row({std::to_string(row.n), cell(row.single_pdbs.formula),
                     cell(row.single_pdbs.simulated), cell(row.single_balanced.formula),
                     cell(row.single_balanced.simulated), cell(row.epr_pdbs.formula),
                     cell(row.epr_pdbs.simulated), cell(row.tashima)});
    doc.body = table.str();
    return doc;
  }

  JsonObject cfg;
  cfg.put("command", "verify");
  cfg.put("format", "json");

  auto cell = [](const std::optional<double>& v) {
    return v ? JsonValue::number(*v) : JsonValue::null();
  };
  JsonArray rows_json;
  for (const auto& row : rows) {
    JsonObject obj;
    obj.put("n", row.n);
    obj.put("single_pdbs_formula", cell(row.single_pdbs.formula));
    obj.put("single_pdbs_simulated", cell(row.single_pdbs.simulated));
    obj.put("single_balanced_formula", cell(row.single_balanced.formula));
    obj.put("single_balanced_simulated", cell(row.single_balanced.simulated));
    obj.put("epr_pdbs_formula", cell(row.epr_pdbs.formula));
    obj.put("epr_pdbs_simulated", cell(row.epr_pdbs.simulated));
    obj.put("tashima_formula", cell(row.tashima));
    rows_json.add(obj.value());
  }

  JsonObject data;
  data.put("rows", rows_json.value());
  data.put("all_match", all_match);
  data.put("tolerance", kVerifyTolerance);
  doc.body = wrap(cfg, data.value());
  return doc;
}

}  // namespace

Document run_command(const RunConfig& config) {
  switch (config.command) {
    case RunConfig::Command::Expand: return cmd_expand(config);
    case RunConfig::Command::Cascade: return cmd_cascade(config);
    case RunConfig::Command::Optimize: return cmd_optimize(config);
    case RunConfig::Command::Verify: return cmd_verify(config);
  }
  throw Error("unknown command");
}

}  // namespace wsim::report
