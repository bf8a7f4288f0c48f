#include <fstream>
#include <regex>
#include <sstream>

#include "constellation/cli.hpp"
#include "json.hpp"

namespace constellation::cli {
namespace {

using nlohmann::json;

// Byte spans of the elements of a top-level array, for line-anchored errors.
struct Span {
  std::size_t begin = 0, end = 0;
};

std::vector<Span> top_level_elements(const std::string& text, const std::string& key) {
  std::vector<Span> out;
  int depth = 0;
  bool in_string = false;
  std::size_t i = 0;
  std::string last_string;
  std::size_t string_start = 0;
  bool want_array = false;
  int array_depth = -1;
  std::size_t elem_start = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
        last_string = text.substr(string_start, i - string_start);
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      string_start = i + 1;
    } else if (c == ':' && depth == 1 && last_string == key) {
      want_array = true;
    } else if (c == '[' || c == '{') {
      ++depth;
      if (want_array && c == '[') {
        array_depth = depth;
        want_array = false;
      } else if (array_depth > 0 && depth == array_depth + 1) {
        elem_start = i;
      }
    } else if (c == ']' || c == '}') {
      if (array_depth > 0 && depth == array_depth + 1) out.push_back({elem_start, i + 1});
      if (depth == array_depth) array_depth = -1;
      --depth;
    }
  }
  return out;
}

int line_of(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

class Locator {
 public:
  Locator(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& section, int index, const std::string& field,
                         const std::string& message) const {
    int line = 1;
    const auto spans = top_level_elements(text_, section);
    std::string path = section;
    if (index >= 0) {
      path += "[" + std::to_string(index) + "]";
      if (index < static_cast<int>(spans.size())) {
        const Span s = spans[index];
        line = line_of(text_, s.begin);
        if (!field.empty()) {
          const auto pos = text_.find("\"" + field + "\"", s.begin);
          if (pos != std::string::npos && pos < s.end) line = line_of(text_, pos);
        }
      }
    } else {
      const auto pos = text_.find("\"" + section + "\"");
      if (pos != std::string::npos) line = line_of(text_, pos);
    }
    if (!field.empty()) path += "." + field;
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + path + ": " + message);
  }

 private:
  const std::string& text_;
  std::string source_;
};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

PolynomialFamily::Kind family_kind(const std::string& s) {
  if (s == "monomial") return PolynomialFamily::Kind::monomial;
  if (s == "random_monic" || s == "random") return PolynomialFamily::Kind::random_monic;
  if (s == "explicit") return PolynomialFamily::Kind::explicit_coeffs;
  throw InvalidArgument("unknown family type '" + s + "' (monomial, random_monic, explicit)");
}

EnsembleSpec parse_spec(const json& j, int index, const Locator& loc) {
  auto fail = [&](const std::string& field, const std::string& msg) { loc.fail("specs", index, field, msg); };
  if (!j.is_object()) fail("", "each spec must be an object");
  static const std::vector<std::string> known = {"id", "geometry", "kind", "L", "line_charges", "charges", "K",
                                                 "M", "populations", "total_charge", "fugacities", "y",
                                                 "potential", "family", "dimension_cap", "subset_cap"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown field");
  }
  EnsembleSpec s;
  std::string field;
  try {
    field = "id";
    s.id = get_or<std::string>(j, "id", "spec" + std::to_string(index));
    field = "geometry";
    const auto geometry = get_or<std::string>(j, "geometry", "linear");
    if (geometry == "linear") {
      s.geometry = Geometry::linear;
    } else if (geometry == "circular") {
      s.geometry = Geometry::circular;
    } else {
      fail(field, "expected linear or circular, got '" + geometry + "'");
    }
    field = "kind";
    const auto kind = get_or<std::string>(j, "kind", "monocharge");
    if (kind == "monocharge") {
      s.kind = EnsembleKind::monocharge;
    } else if (kind == "homogeneous") {
      s.kind = EnsembleKind::homogeneous;
    } else if (kind == "multicomponent") {
      s.kind = EnsembleKind::multicomponent;
    } else {
      fail(field, "expected monocharge, homogeneous or multicomponent, got '" + kind + "'");
    }
    field = "y";
    if (!j.contains("y")) fail(field, "missing translation vector");
    s.y = j.at("y").get<std::vector<double>>();
    field = "K";
    s.K = get_or<int>(j, "K", static_cast<int>(s.y.size()));
    field = "L";
    if (!(j.contains("L") && j.at("L").is_array())) s.L = get_or<int>(j, "L", 1);
    field = "line_charges";
    s.line_charges = get_or<std::vector<int>>(j, "line_charges", {});
    if (s.kind == EnsembleKind::homogeneous && j.contains("L") && j.at("L").is_array()) {
      s.line_charges = j.at("L").get<std::vector<int>>();
    }
    field = "charges";
    s.charges = get_or<std::vector<int>>(j, "charges", {});
    if (s.kind == EnsembleKind::multicomponent && j.contains("L") && j.at("L").is_array()) {
      field = "L";
      s.charges = j.at("L").get<std::vector<int>>();
    }
    field = "M";
    if (j.contains("M") && j.at("M").is_array()) {
      s.populations = j.at("M").get<std::vector<int>>();
    } else {
      s.M = get_or<int>(j, "M", 0);
    }
    field = "populations";
    if (j.contains("populations")) s.populations = j.at("populations").get<std::vector<int>>();
    field = "total_charge";
    if (j.contains("total_charge")) s.total_charge = j.at("total_charge").get<int>();
    field = "fugacities";
    s.fugacities = get_or<std::vector<double>>(j, "fugacities", {});
    field = "potential";
    if (j.contains("potential")) s.strength = get_or<double>(j.at("potential"), "strength", 1.0);
    field = "family";
    if (j.contains("family")) {
      const auto& f = j.at("family");
      s.family.type = family_kind(get_or<std::string>(f, "type", "monomial"));
      s.family.seed = get_or<std::uint64_t>(f, "seed", 0);
      s.family.coeffs = get_or<std::vector<Polynomial>>(f, "coeffs", {});
    }
    field = "dimension_cap";
    s.dimension_cap = get_or<int>(j, "dimension_cap", kDefaultDimensionCap);
    field = "subset_cap";
    s.subset_cap = get_or<std::uint64_t>(j, "subset_cap", kDefaultSubsetCap);
  } catch (const json::exception& e) {
    fail(field, std::string("wrong type: ") + e.what());
  } catch (const InvalidArgument& e) {
    fail(field, e.what());
  }
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    fail("", e.what());
  } catch (const ResourceLimitExceeded&) {
    // caps are enforced at run time, after any --cap override
  }
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(source + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  const Locator loc(text, source);
  if (!doc.is_object()) loc.fail("", -1, "", "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "specs" && key != "oracle" && key != "sweeps" && key != "seed") {
      loc.fail(key, -1, "", "unknown top-level field");
    }
  }
  RunConfig cfg;
  if (!doc.contains("specs") || !doc.at("specs").is_array()) loc.fail("specs", -1, "", "missing specs array");
  int index = 0;
  for (const auto& j : doc.at("specs")) cfg.specs.push_back(parse_spec(j, index++, loc));
  for (std::size_t a = 0; a < cfg.specs.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (cfg.specs[a].id == cfg.specs[b].id) loc.fail("specs", static_cast<int>(a), "id", "duplicate id");
    }
  }
  try {
    cfg.seed = get_or<std::uint64_t>(doc, "seed", 0);
  } catch (const nlohmann::json::exception&) {
    loc.fail("seed", -1, "", "seed must be a nonnegative integer");
  }
  if (doc.contains("oracle")) {
    const auto& o = doc.at("oracle");
    try {
      cfg.oracle.enabled = get_or<bool>(o, "enabled", true);
      const auto method = get_or<std::string>(o, "method", "nested");
      if (method == "nested" || method == "nested_quadrature") {
        cfg.oracle.config.method = OracleConfig::Method::nested_quadrature;
      } else if (method == "monte_carlo") {
        cfg.oracle.config.method = OracleConfig::Method::monte_carlo;
      } else {
        loc.fail("oracle", -1, "", "method must be nested or monte_carlo");
      }
      cfg.oracle.config.nodes_per_dim = get_or<int>(o, "nodes_per_dim", cfg.oracle.config.nodes_per_dim);
      cfg.oracle.config.points_per_panel = get_or<int>(o, "points_per_panel", cfg.oracle.config.points_per_panel);
      cfg.oracle.config.truncation = get_or<double>(o, "truncation", 0.0);
      cfg.oracle.config.samples = get_or<std::uint64_t>(o, "samples", cfg.oracle.config.samples);
      cfg.oracle.config.seed = get_or<std::uint64_t>(o, "seed", cfg.seed ? cfg.seed : cfg.oracle.config.seed);
      cfg.oracle.config.max_nested_particles = get_or<int>(o, "max_constellations", 4);
      cfg.oracle.tolerance = get_or<double>(o, "tolerance", cfg.oracle.tolerance);
    } catch (const nlohmann::json::exception& e) {
      loc.fail("oracle", -1, "", std::string("wrong type: ") + e.what());
    }
  }
  if (doc.contains("sweeps")) {
    int i = 0;
    for (const auto& j : doc.at("sweeps")) {
      Sweep s;
      try {
        s.name = j.at("name").get<std::string>();
        s.spec_id = j.at("spec").get<std::string>();
        s.parameter = j.at("parameter").get<std::string>();
        s.values = j.at("values").get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        loc.fail("sweeps", i, "", std::string("needs name, spec, parameter, values: ") + e.what());
      }
      const auto it = std::find_if(cfg.specs.begin(), cfg.specs.end(),
                                   [&](const EnsembleSpec& e) { return e.id == s.spec_id; });
      if (it == cfg.specs.end()) loc.fail("sweeps", i, "spec", "no spec with id '" + s.spec_id + "'");
      try {
        for (double v : s.values) with_parameter(*it, s.parameter, v);
      } catch (const ConfigError& e) {
        loc.fail("sweeps", i, "parameter", e.what());
      } catch (const InvalidArgument& e) {
        loc.fail("sweeps", i, "values", e.what());
      }
      if (!std::regex_match(s.name, std::regex("[A-Za-z0-9_.-]+"))) {
        loc.fail("sweeps", i, "name", "use letters, digits, '_', '-', '.' only");
      }
      cfg.sweeps.push_back(std::move(s));
      ++i;
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

EnsembleSpec with_parameter(const EnsembleSpec& spec, const std::string& parameter, double value) {
  EnsembleSpec s = spec;
  std::smatch m;
  static const std::regex indexed(R"((y|fugacities)\[(\d+)\])");
  if (std::regex_match(parameter, m, indexed)) {
    auto& v = m[1] == "y" ? s.y : s.fugacities;
    const auto k = std::stoul(m[2]);
    if (k >= v.size()) throw ConfigError("index out of range in '" + parameter + "'");
    v[k] = value;
  } else if (parameter == "strength") {
    s.strength = value;
  } else if (parameter == "M") {
    if (value != std::floor(value) || value < 0) throw ConfigError("M must be a nonnegative integer");
    s.M = static_cast<int>(value);
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "' (y[k], fugacities[j], strength, M)");
  }
  try {
    s.validate();
  } catch (const ResourceLimitExceeded&) {
  }
  return s;
}

}  // namespace constellation::cli
