#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "susyinv/operator.hpp"

namespace susyinv::cli {

// Shortest form is not used on purpose: 17 significant digits always.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

nlohmann::json matrix_json(const Operator& m);
nlohmann::json vector_json(const State& v);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

std::filesystem::path ensure_dir(const std::string& dir);

}  // namespace susyinv::cli
