#include "vkf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vkf::io {

bool CsvTable::has(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

const RealVector& CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw InvalidArgument("missing column '" + name + "'");
  }
  return columns[static_cast<std::size_t>(it - header.begin())];
}

void CsvTable::add(std::string name, RealVector values) {
  if (!columns.empty() && values.size() != rows()) {
    throw InvalidArgument("column '" + name + "' has " + std::to_string(values.size()) + " rows, expected " +
                          std::to_string(rows()));
  }
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << '\n';
  std::string line;
  for (Index r = 0; r < table.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) line += ',';
      line += format_double(table.columns[c][r]);
    }
    line += '\n';
    out << line;
  }
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

namespace {
std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, const std::filesystem::path& path, std::size_t line_no) {
  field = trim(field);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    // from_chars rejects a leading '+' and spelled-out infinities; be lenient
    std::string copy(field);
    char* end = nullptr;
    v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size()) {
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": cannot parse '" + copy + "'");
    }
  }
  return v;
}
}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidArgument(path.string() + ": empty file");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  CsvTable table;
  for (auto f : split(line)) table.header.emplace_back(trim(f));
  std::vector<std::vector<double>> cols(table.header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != cols.size()) {
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(cols.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      cols[c].push_back(parse_double(fields[c], path, line_no));
    }
  }
  for (auto& c : cols) {
    table.columns.emplace_back(Eigen::Map<const RealVector>(c.data(), static_cast<Index>(c.size())));
  }
  return table;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

double sample_rate_from_time(const RealVector& t) {
  if (t.size() < 2) {
    throw InvalidArgument("need at least two time stamps to infer the sample rate");
  }
  const double span = t[t.size() - 1] - t[0];
  if (!(span > 0.0)) {
    throw InvalidArgument("time column must be increasing");
  }
  const double fs = static_cast<double>(t.size() - 1) / span;
  // Time stamps written as k / fs reproduce an integral rate to ~1e-12.
  const double rounded = std::round(fs);
  return std::abs(fs - rounded) <= 1e-9 * fs ? rounded : fs;
}

nlohmann::json scenario_to_json(const lab::RunScenario& sc) {
  nlohmann::json doc;
  doc["duration"] = sc.duration;
  doc["speed_profile"] = nlohmann::json::array();
  for (const auto& k : sc.speed_profile) doc["speed_profile"].push_back({k.time, k.speed});
  doc["wheel_diameter"] = sc.wheel.diameter;
  doc["sleeper_spacing"] = sc.track.sleeper_spacing;
  doc["oor"] = nlohmann::json::array();
  for (const auto& o : sc.oor) doc["oor"].push_back({{"order", o.order}, {"amplitude", o.amplitude}, {"phase", o.phase}});
  doc["oor_gain"] = sc.oor_gain;
  doc["segments"] = nlohmann::json::array();
  for (const auto& s : sc.segments) doc["segments"].push_back({{"start", s.start}, {"end", s.end}, {"amplitude", s.amplitude}});
  doc["noise_sigma"] = sc.noise_sigma;
  doc["unsprung_mass"] = sc.unsprung_mass;
  doc["force_noise_sigma"] = sc.force_noise_sigma;
  return doc;
}

lab::RunScenario scenario_from_json(const nlohmann::json& doc) {
  lab::RunScenario sc;
  try {
    sc.duration = doc.value("duration", sc.duration);
    if (doc.contains("speed_profile")) {
      sc.speed_profile.clear();
      for (const auto& k : doc.at("speed_profile")) {
        sc.speed_profile.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
      }
    }
    sc.wheel.diameter = doc.value("wheel_diameter", sc.wheel.diameter);
    sc.track.sleeper_spacing = doc.value("sleeper_spacing", sc.track.sleeper_spacing);
    if (doc.contains("oor")) {
      for (const auto& o : doc.at("oor")) {
        sc.oor.push_back({o.at("order").get<int>(), o.at("amplitude").get<double>(), o.value("phase", 0.0)});
      }
    }
    sc.oor_gain = doc.value("oor_gain", sc.oor_gain);
    if (doc.contains("segments")) {
      for (const auto& s : doc.at("segments")) {
        sc.segments.push_back({s.at("start").get<double>(), s.at("end").get<double>(), s.at("amplitude").get<double>()});
      }
    }
    sc.noise_sigma = doc.value("noise_sigma", sc.noise_sigma);
    sc.unsprung_mass = doc.value("unsprung_mass", sc.unsprung_mass);
    sc.force_noise_sigma = doc.value("force_noise_sigma", sc.force_noise_sigma);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("invalid scenario: ") + e.what());
  }
  sc.validate();
  return sc;
}

}  // namespace vkf::io
