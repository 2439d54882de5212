#pragma once

// JSON system documents with CSV profile files. The schema is described in README.md.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oeh/model/system.hpp"

namespace oeh::model {

/// Named hourly series merged from one or more profile CSV files.
using ProfileSet = std::map<std::string, std::vector<double>>;

struct LoadOptions {
  /// Directory holding the profile CSVs; defaults to the JSON file's directory.
  std::optional<std::filesystem::path> profiles_dir;
};

/// Reads and merges every CSV; a column name may appear in only one file.
ProfileSet load_profiles(const std::vector<std::filesystem::path>& files);

/// Throws io::IoError for unreadable files and io::ParseError for malformed JSON/CSV or
/// schema violations (unknown keys, wrong types, unknown series).
EnergySystem load_system(const std::filesystem::path& json_path, const LoadOptions& options = {});
EnergySystem parse_system(std::string_view json_text, const ProfileSet& profiles, const std::string& source = "<system>");

/// Writes `<stem>.json` and `<stem>_profiles.csv` into `dir`; load_system reads them back to
/// an equal system.
void save_system(const EnergySystem& system, const std::filesystem::path& dir, const std::string& stem);

}  // namespace oeh::model
