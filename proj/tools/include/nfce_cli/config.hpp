#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nfce/harness.hpp"

namespace nfce::cli {

/// Bad config file or field. Message carries line/column or the offending field path.
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Preset documents: "fig4" (sizes 8..24 squared, lambda/2), "fig5" (same, lambda/4) and
/// "table1" (both spacings, DFT-LS only). Throws ConfigParseError for unknown names.
nlohmann::json preset_document(std::string_view name);
std::vector<std::string> preset_names();

nlohmann::json parse_config_text(std::string_view text);
nlohmann::json load_config_file(const std::filesystem::path& file);

/// Applies `key=value` with a dotted key path ("trials=10", "lna.a1.re=1"). The value is read
/// as JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Strict conversion: unknown keys and wrong types are rejected with the field path.
ExperimentSpec spec_from_json(const nlohmann::json& doc);

/// Schema-valid document holding every default value.
nlohmann::json default_document();

}  // namespace nfce::cli
