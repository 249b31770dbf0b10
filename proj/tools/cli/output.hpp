#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "funnel/counterexample.hpp"
#include "funnel/geometry.hpp"

namespace funnel::cli {

using ojson = nlohmann::ordered_json;

/// 17 significant digits, "nan"/"inf" spelled out.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Writes bytes verbatim (LF line endings on every platform).
void write_file(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const ojson& doc);

ojson to_json(const VerificationReport& r);
ojson to_json(const Vec& v);
ojson to_json(const Mat& M);
ojson to_json(const PiecewiseAffine& f);
ojson to_json(const Modulus& w);
ojson to_json(const Width& eta);

}  // namespace funnel::cli
