#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "constellation/cli.hpp"
#include "constellation/ensembles.hpp"
#include "json.hpp"

namespace constellation::cli {
namespace {

using nlohmann::json;

struct Record {
  std::string spec_id;
  const EnsembleSpec* spec = nullptr;
  std::string route;
  std::string case_label;
  Complex value;
  double est_error = 0.0;
  long wall_ms = 0;
};

std::string number(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const Record& r) {
  const EnsembleSpec& s = *r.spec;
  std::string out;
  for (const std::string& f : {r.spec_id, to_string(s.geometry), to_string(s.kind), s.L_descriptor(),
                               std::to_string(s.K), s.M_descriptor(), s.y_descriptor(), r.route, r.case_label}) {
    out += csv_field(f) + ",";
  }
  out += number(r.value.real()) + "," + number(r.value.imag()) + "," + number(r.est_error) + "," +
         std::to_string(r.wall_ms);
  return out;
}

json record_json(const Record& r) {
  const EnsembleSpec& s = *r.spec;
  return json{{"spec_id", r.spec_id},     {"geometry", to_string(s.geometry)}, {"kind", to_string(s.kind)},
              {"L", s.L_descriptor()},    {"K", s.K},                          {"M", s.M_descriptor()},
              {"y", s.y_descriptor()},    {"route", r.route},                  {"case_label", r.case_label},
              {"re", r.value.real()},     {"im", r.value.imag()},              {"est_error", r.est_error},
              {"wall_ms", r.wall_ms}};
}

json diagnostics_json(const Diagnostics& d) {
  return json{{"dimension", d.dimension},
              {"effective_dimension", d.effective_dimension},
              {"block_grade", d.block_grade},
              {"candidate_terms", d.candidate_terms},
              {"kept_terms", d.kept_terms},
              {"dropped_terms", d.dropped_terms},
              {"enumerated_words", d.enumerated_words},
              {"quadrature", d.quadrature},
              {"half_integer_phase", d.half_integer_phase},
              {"imaginary_part", d.imaginary_part},
              {"notes", d.notes}};
}

int count_constellations(const EnsembleSpec& s) {
  if (s.kind != EnsembleKind::multicomponent) return s.M;
  int n = 0;
  for (int m : s.populations) n += m;
  return n;
}

enum class Outcome { ok, integrity, resource };

struct Runner {
  const RunConfig& cfg;
  const RunOptions& opts;
  std::ostream& log;
  std::vector<Record> records;
  json spec_reports = json::array();
  bool integrity_failed = false;
  bool resource_failed = false;

  long elapsed(std::chrono::steady_clock::time_point t0) const {
    if (!opts.timing) return 0;
    return static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  }

  // Computes one spec; appends records with the given id; returns the primary record index or -1.
  long evaluate(const EnsembleSpec& spec, const std::string& id, json& report, bool with_oracle) {
    const auto t0 = std::chrono::steady_clock::now();
    PartitionResult res;
    try {
      res = partition_function(spec);
    } catch (const IntegrityError& e) {
      integrity_failed = true;
      log << id << ": integrity failure: " << e.what() << "\n";
      report["error"] = std::string("integrity: ") + e.what();
      return -1;
    } catch (const ResourceLimitExceeded& e) {
      resource_failed = true;
      log << id << ": resource limit: " << e.what() << "\n";
      report["error"] = std::string("resource_limit: ") + e.what();
      return -1;
    }
    const long ms = elapsed(t0);
    const long primary = static_cast<long>(records.size());
    // primary route first, then the others in library order
    std::vector<RouteValue> routes = res.routes;
    std::stable_partition(routes.begin(), routes.end(), [&](const RouteValue& r) { return r.route == res.route; });
    for (const auto& r : routes) records.push_back({id, &spec, r.route, res.case_label, r.value, r.est_error, ms});
    report["value"] = {res.value.real(), res.value.imag()};
    report["route"] = res.route;
    report["case_label"] = res.case_label;
    report["diagnostics"] = diagnostics_json(res.diagnostics);
    if (res.polynomial) {
      json poly = json::array();
      for (const auto& [exps, c] : res.polynomial->terms()) poly.push_back({{"exponents", exps}, {"re", c.real()}, {"im", c.imag()}});
      report["generating_polynomial"] = poly;
    }
    if (!res.canonical_values.empty()) {
      json canon = json::array();
      for (const auto& [pops, c] : res.canonical_values) canon.push_back({{"populations", pops}, {"re", c.real()}, {"im", c.imag()}});
      report["canonical_values"] = canon;
    }
    if (with_oracle && cfg.oracle.enabled) run_oracle(spec, id, res, report);
    return primary;
  }

  void run_oracle(const EnsembleSpec& spec, const std::string& id, const PartitionResult& res, json& report) {
    if (spec.grand_canonical()) {
      report["oracle"] = "skipped: grand canonical";
      return;
    }
    OracleConfig oc = cfg.oracle.config;
    const bool nested = oc.method == OracleConfig::Method::nested_quadrature;
    if (nested && count_constellations(spec) > oc.max_nested_particles) {
      report["oracle"] = "skipped: too many constellations for nested quadrature";
      return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    OracleResult o;
    double err = 0.0;
    try {
      o = oracle_partition(spec, oc);
      if (nested) {
        OracleConfig coarse = oc;
        coarse.nodes_per_dim = std::max(2 * oc.points_per_panel, oc.nodes_per_dim * 2 / 3);
        err = std::abs(o.value - oracle_partition(spec, coarse).value);
      } else {
        err = o.std_error;
      }
    } catch (const ResourceLimitExceeded& e) {
      report["oracle"] = std::string("skipped: ") + e.what();
      return;
    }
    records.push_back({id, &spec, "oracle_" + o.method, res.case_label, o.value, err, elapsed(t0)});
    const double diff = std::abs(o.value - res.value);
    const double allowed = std::max(cfg.oracle.tolerance * std::abs(res.value), nested ? 0.0 : 5.0 * err);
    report["oracle"] = {{"method", o.method}, {"re", o.value.real()}, {"im", o.value.imag()},
                        {"est_error", err}, {"difference", diff}, {"agrees", diff <= allowed}};
    if (!(diff <= allowed)) {
      integrity_failed = true;
      log << id << ": oracle disagrees: |difference| = " << diff << " allowed " << allowed << "\n";
    }
  }
};

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError(p.string() + ": cannot write");
  out << text;
}

}  // namespace

std::string csv_header() {
  return "spec_id,geometry,kind,L,K,M,y,route,case_label,re_Z,im_Z,est_error,wall_ms";
}

int run(const RunConfig& cfg, const std::filesystem::path& out, const RunOptions& opts, std::ostream& log) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    log << out.string() << ": cannot create output directory: " << ec.message() << "\n";
    return kConfigError;
  }
  std::vector<EnsembleSpec> specs = cfg.specs;
  if (opts.dimension_cap) {
    for (auto& s : specs) s.dimension_cap = *opts.dimension_cap;
  }
  Runner runner{cfg, opts, log, {}, json::array()};
  // stable storage for sweep specs referenced by records
  std::vector<std::unique_ptr<EnsembleSpec>> sweep_specs;
  for (const auto& spec : specs) {
    json report{{"id", spec.id}};
    runner.evaluate(spec, spec.id, report, true);
    runner.spec_reports.push_back(report);
  }
  json sweeps = json::object();
  std::vector<std::pair<std::string, std::string>> sweep_files;
  for (const auto& sw : cfg.sweeps) {
    const auto base = std::find_if(specs.begin(), specs.end(), [&](const EnsembleSpec& s) { return s.id == sw.spec_id; });
    std::string csv = "parameter,value," + csv_header() + "\n";
    json points = json::array();
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
      sweep_specs.push_back(std::make_unique<EnsembleSpec>(with_parameter(*base, sw.parameter, sw.values[i])));
      const std::string id = sw.name + "[" + std::to_string(i) + "]";
      json report{{"id", id}, {"parameter", sw.parameter}, {"value", sw.values[i]}};
      const long primary = runner.evaluate(*sweep_specs.back(), id, report, false);
      if (primary >= 0) csv += sw.parameter + "," + number(sw.values[i]) + "," + csv_row(runner.records[primary]) + "\n";
      points.push_back(report);
    }
    sweeps[sw.name] = points;
    sweep_files.emplace_back("sweep_" + sw.name + ".csv", csv);
  }

  std::string csv = csv_header() + "\n";
  json records = json::array();
  for (const auto& r : runner.records) {
    csv += csv_row(r) + "\n";
    records.push_back(record_json(r));
  }
  try {
    write_text(out / "results.csv", csv);
    json doc{{"records", records}, {"specs", runner.spec_reports}, {"sweeps", sweeps}, {"seed", cfg.seed}};
    write_text(out / "results.json", doc.dump(2) + "\n");
    for (const auto& [name, text] : sweep_files) write_text(out / name, text);
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return kConfigError;
  }
  if (runner.integrity_failed) return kIntegrityFailure;
  if (runner.resource_failed) return kResourceLimit;
  return kOk;
}

}  // namespace constellation::cli
