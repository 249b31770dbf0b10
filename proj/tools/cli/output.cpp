#include "cli/output.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "funnel/error.hpp"

namespace funnel::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) fail(ErrorKind::InternalConsistency, "csv row has the wrong width");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_double(values[i]);
  }
  text_ += '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Config, "cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const ojson& doc) {
  write_file(path, doc.dump(2) + "\n");
}

ojson to_json(const VerificationReport& r) {
  ojson j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["samples"] = r.samples;
  j["skipped"] = r.skipped;
  j["violations"] = r.violations;
  j["max_violation"] = r.max_violation;
  j["empirical_constant"] = r.empirical_constant;
  j["stability_ratio"] = r.stability_ratio;
  return j;
}

ojson to_json(const Vec& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ojson to_json(const Mat& M) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) a.push_back(to_json(Vec(M.row(i).transpose())));
  return a;
}

ojson to_json(const PiecewiseAffine& f) {
  ojson j;
  j["breakpoints"] = std::vector<double>(f.breakpoints().begin(), f.breakpoints().end());
  j["values"] = std::vector<double>(f.values().begin(), f.values().end());
  return j;
}

ojson to_json(const Modulus& w) {
  ojson j;
  switch (w.kind()) {
    case Modulus::Kind::Power:
      j["kind"] = "power";
      j["alpha"] = w.alpha();
      break;
    case Modulus::Kind::PowerLog:
      j["kind"] = "power_log";
      j["alpha"] = w.alpha();
      j["beta"] = w.beta();
      j["C"] = w.C();
      j["h0"] = w.h0();
      break;
    case Modulus::Kind::LinearOverLog:
      j["kind"] = "linear_over_log";
      j["beta"] = w.beta();
      j["C"] = w.C();
      j["h0"] = w.h0();
      break;
    case Modulus::Kind::Sampled:
      j["kind"] = "sampled";
      j["nodes"] = w.samples()->size();
      j["domain_end"] = w.domain_end();
      break;
  }
  return j;
}

ojson to_json(const Width& eta) {
  ojson j;
  switch (eta.kind()) {
    case Width::Kind::Constant:
      j["kind"] = "constant";
      j["c"] = eta.c();
      break;
    case Width::Kind::PowerShift:
      j["kind"] = "power_shift";
      j["beta"] = eta.beta();
      j["s"] = eta.s();
      break;
    case Width::Kind::Affine:
      j["kind"] = "affine";
      j["slope"] = eta.slope();
      j["intercept"] = eta.intercept();
      break;
    case Width::Kind::Piecewise: {
      j["kind"] = "piecewise";
      const ojson p = to_json(*eta.pieces());
      j["breakpoints"] = p["breakpoints"];
      j["values"] = p["values"];
      break;
    }
  }
  return j;
}

}  // namespace funnel::cli
