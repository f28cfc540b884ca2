#include "nfce_cli/config.hpp"

#include <fstream>
#include <span>
#include <sstream>

#include "nfce/error.hpp"

namespace nfce::cli {
namespace {

using nlohmann::json;

json square_sizes(std::initializer_list<int> ns) {
  json out = json::array();
  for (int n : ns) out.push_back({n, n});
  return out;
}

json estimator_list(std::span<const EstimatorKind> kinds) {
  json out = json::array();
  for (auto k : kinds) out.push_back(std::string(to_string(k)));
  return out;
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigParseError("field '" + path + "': " + what);
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) field_error(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) field_error(prefix.empty() ? key : prefix + "." + key, "unknown key");
  }
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& path, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    if constexpr (std::is_same_v<T, int>) {
      if (!it->is_number_integer()) field_error(path, "expected an integer");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!it->is_number_unsigned()) field_error(path, "expected a non-negative integer");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) field_error(path, "expected a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) field_error(path, "expected true or false");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) field_error(path, "expected a string");
    }
    return it->get<T>();
  } catch (const json::exception& e) {
    field_error(path, e.what());
  }
}

cplx complex_field(const json& obj, const std::string& key, const std::string& path, cplx fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (it->is_number()) return {it->get<double>(), 0.0};
  reject_unknown(*it, path, {"re", "im"});
  return {get_field<double>(*it, "re", path + ".re", 0.0), get_field<double>(*it, "im", path + ".im", 0.0)};
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

json default_document() {
  ExperimentSpec d;
  return json{
      {"array",
       {{"n_h", d.array.n_h},
        {"n_v", d.array.n_v},
        {"l_h", d.array.l_h},
        {"l_v", d.array.l_v},
        {"gap_cells", d.array.gap_cells},
        {"wavelength_m", d.array.wavelength},
        {"spacing_wavelengths", d.array.delta / d.array.wavelength}}},
      {"snr_db", d.snr_db},
      {"lna", {{"a1", {{"re", d.lna.a1.real()}, {"im", d.lna.a1.imag()}}},
               {"a2", {{"re", d.lna.a2.real()}, {"im", d.lna.a2.imag()}}}}},
      {"trials", d.trials},
      {"subarray_sizes", square_sizes({8})},
      {"spacings_wavelengths", d.spacings},
      {"estimators", estimator_list(kDefaultEstimators)},
      {"include_perfect_hw_reference", d.include_perfect_hw_reference},
      {"seed", d.seed},
      {"rel_threshold", d.rel_threshold},
      {"mask_fraction", nullptr},
      {"workers", d.workers},
      {"basis_cache_dir", nullptr},
  };
}

std::vector<std::string> preset_names() { return {"fig4", "fig5", "table1"}; }

json preset_document(std::string_view name) {
  json doc = default_document();
  if (name == "fig4" || name == "fig5") {
    doc["subarray_sizes"] = square_sizes({8, 12, 16, 20, 24});
    doc["spacings_wavelengths"] = json::array({name == "fig4" ? 0.5 : 0.25});
    doc["array"]["spacing_wavelengths"] = name == "fig4" ? 0.5 : 0.25;
    return doc;
  }
  if (name == "table1") {
    doc["subarray_sizes"] = square_sizes({8, 12, 16, 20, 24});
    doc["spacings_wavelengths"] = json::array({0.5, 0.25});
    doc["estimators"] = json::array({"DFT-LS"});
    doc["include_perfect_hw_reference"] = false;
    return doc;
  }
  throw ConfigParseError("unknown preset '" + std::string(name) + "'");
}

json parse_config_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError("config parse error at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                           e.what());
  }
}

json load_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigParseError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigParseError& e) {
    throw ConfigParseError(file.string() + ": " + e.what());
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigParseError("override '" + std::string(assignment) + "' is not of the form key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigParseError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigParseError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ExperimentSpec spec_from_json(const json& doc) {
  reject_unknown(doc, "",
                 {"array", "snr_db", "lna", "trials", "subarray_sizes", "spacings_wavelengths", "estimators",
                  "include_perfect_hw_reference", "seed", "rel_threshold", "mask_fraction", "workers",
                  "basis_cache_dir"});
  ExperimentSpec spec;

  if (auto it = doc.find("array"); it != doc.end()) {
    const json& a = *it;
    reject_unknown(a, "array", {"n_h", "n_v", "l_h", "l_v", "gap_cells", "wavelength_m", "spacing_wavelengths"});
    spec.array.n_h = get_field(a, "n_h", "array.n_h", spec.array.n_h);
    spec.array.n_v = get_field(a, "n_v", "array.n_v", spec.array.n_v);
    spec.array.l_h = get_field(a, "l_h", "array.l_h", spec.array.l_h);
    spec.array.l_v = get_field(a, "l_v", "array.l_v", spec.array.l_v);
    spec.array.gap_cells = get_field(a, "gap_cells", "array.gap_cells", spec.array.gap_cells);
    spec.array.wavelength = get_field(a, "wavelength_m", "array.wavelength_m", spec.array.wavelength);
    const double sp = get_field(a, "spacing_wavelengths", "array.spacing_wavelengths", 0.5);
    spec.array.delta = sp * spec.array.wavelength;
  }

  spec.snr_db = get_field(doc, "snr_db", "snr_db", spec.snr_db);
  if (auto it = doc.find("lna"); it != doc.end()) {
    reject_unknown(*it, "lna", {"a1", "a2"});
    spec.lna.a1 = complex_field(*it, "a1", "lna.a1", spec.lna.a1);
    spec.lna.a2 = complex_field(*it, "a2", "lna.a2", spec.lna.a2);
  }
  spec.trials = get_field(doc, "trials", "trials", spec.trials);

  if (auto it = doc.find("subarray_sizes"); it != doc.end()) {
    if (!it->is_array()) field_error("subarray_sizes", "expected an array");
    spec.subarray_sizes.clear();
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& e = (*it)[k];
      const std::string path = "subarray_sizes[" + std::to_string(k) + "]";
      if (e.is_number_integer()) {
        spec.subarray_sizes.push_back({e.get<int>(), e.get<int>()});
      } else if (e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number_integer()) {
        spec.subarray_sizes.push_back({e[0].get<int>(), e[1].get<int>()});
      } else {
        field_error(path, "expected n or [n_h, n_v]");
      }
    }
  }

  if (auto it = doc.find("spacings_wavelengths"); it != doc.end()) {
    if (!it->is_array()) field_error("spacings_wavelengths", "expected an array of numbers");
    spec.spacings.clear();
    for (std::size_t k = 0; k < it->size(); ++k) {
      if (!(*it)[k].is_number()) field_error("spacings_wavelengths[" + std::to_string(k) + "]", "expected a number");
      spec.spacings.push_back((*it)[k].get<double>());
    }
  }

  if (auto it = doc.find("estimators"); it != doc.end()) {
    if (!it->is_array()) field_error("estimators", "expected an array of names");
    spec.estimators.clear();
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string path = "estimators[" + std::to_string(k) + "]";
      if (!(*it)[k].is_string()) field_error(path, "expected a string");
      const auto kind = parse_estimator((*it)[k].get<std::string>());
      if (!kind) field_error(path, "unknown estimator '" + (*it)[k].get<std::string>() + "'");
      spec.estimators.push_back(*kind);
    }
  }

  spec.include_perfect_hw_reference =
      get_field(doc, "include_perfect_hw_reference", "include_perfect_hw_reference", spec.include_perfect_hw_reference);
  spec.seed = get_field<std::uint64_t>(doc, "seed", "seed", spec.seed);
  spec.rel_threshold = get_field(doc, "rel_threshold", "rel_threshold", spec.rel_threshold);
  if (auto it = doc.find("mask_fraction"); it != doc.end() && !it->is_null())
    spec.mask_fraction = get_field(doc, "mask_fraction", "mask_fraction", 1.0);
  spec.workers = get_field(doc, "workers", "workers", spec.workers);
  if (auto it = doc.find("basis_cache_dir"); it != doc.end() && !it->is_null())
    spec.basis_cache_dir = get_field<std::string>(doc, "basis_cache_dir", "basis_cache_dir", "");

  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigParseError(e.what());
  }
  return spec;
}

}  // namespace nfce::cli
