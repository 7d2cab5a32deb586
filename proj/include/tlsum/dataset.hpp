#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlsum/error.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

struct LoadedDataset {
  std::vector<DatasetRecord> records;
  // MalformedRecord diagnostics, one per rejected line.
  Diagnostics diagnostics;
};

// Reads one JSON record per line. Blank lines are ignored. Throws
// Error(kUnreadable) if the file cannot be opened.
LoadedDataset load_dataset(const std::filesystem::path& path);

// Throws Error(kMalformedRecord) describing the first violation.
DatasetRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const DatasetRecord& record);

nlohmann::json timeline_to_json(const Timeline& timeline);
Timeline timeline_from_json(const nlohmann::json& nodes, const std::string& topic_id,
                            const std::string& level);

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);

}  // namespace tlsum
