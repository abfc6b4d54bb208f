#pragma once
// CSV output with '#' metadata preamble and 15-significant-digit values, plus
// the JSON run manifest written next to every CLI product.

#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gkdvlab/util.hpp"

namespace gkdv {

using json = nlohmann::json;

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    f_.open(path);
    if (!f_) throw std::runtime_error("cannot open " + path.string());
  }

  void meta(const std::string& key, const std::string& value) {
    f_ << "# " << key << ": " << value << "\n";
  }

  void meta(const std::string& key, double value) { meta(key, g15(value)); }

  void header(const std::vector<std::string>& cols) {
    for (size_t i = 0; i < cols.size(); ++i) f_ << (i ? "," : "") << cols[i];
    f_ << "\n";
  }

  void row(std::span<const double> vals) {
    for (size_t i = 0; i < vals.size(); ++i) f_ << (i ? "," : "") << g15(vals[i]);
    f_ << "\n";
  }

 private:
  std::ofstream f_;
};

inline void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << j.dump(2) << "\n";
}

// two-column CSV reader tolerant of '#' metadata lines and a header row
inline std::pair<Vec, Vec> read_csv_xy(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  Vec x, v;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    try {
      const double a = std::stod(line.substr(0, comma));
      const double b = std::stod(line.substr(comma + 1));
      x.push_back(a);
      v.push_back(b);
    } catch (const std::exception&) {
      continue;  // header row
    }
  }
  if (x.empty()) throw std::runtime_error("no samples in " + path.string());
  return {std::move(x), std::move(v)};
}

}  // namespace gkdv
