#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vkf/signal_lab.hpp"
#include "vkf/types.hpp"

namespace vkf::io {

class IoError : public Error {
 public:
  using Error::Error;
};

/// Column-oriented numeric table with a single header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<RealVector> columns;

  Index rows() const { return columns.empty() ? 0 : columns.front().size(); }
  bool has(const std::string& name) const;
  /// Throws InvalidArgument naming the missing column.
  const RealVector& column(const std::string& name) const;
  void add(std::string name, RealVector values);
};

/// `%.17g` formatting; round-trips every finite double.
std::string format_double(double value);

/// UTF-8, comma separated, '.' decimal separator, full double precision.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// Sample rate implied by a uniformly spaced time column.
double sample_rate_from_time(const RealVector& t);

nlohmann::json scenario_to_json(const lab::RunScenario& scenario);
lab::RunScenario scenario_from_json(const nlohmann::json& doc);

}  // namespace vkf::io
