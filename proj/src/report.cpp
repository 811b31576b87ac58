#include "netdesign/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "netdesign/errors.hpp"

namespace netdesign {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string records_csv(const std::vector<StudyRecord>& records) {
  std::ostringstream os;
  os << "replication_id,network_family,design_strategy,design_prior_id,"
        "imse_true,relative_imse\n";
  for (const auto& r : records) {
    os << r.replication_id << ',' << r.network_family << ','
       << r.design_strategy << ',' << r.design_prior_id << ','
       << format_double(r.imse_true) << ',' << format_double(r.relative_imse)
       << '\n';
  }
  return os.str();
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw IoError("failed while writing: " + path);
}

void write_records_csv(const std::vector<StudyRecord>& records,
                       const std::string& path) {
  write_text_file(records_csv(records), path);
}

std::string records_json(const std::vector<StudyRecord>& records,
                         const std::string& config_echo_json) {
  std::ostringstream os;
  os << "{\"config\": " << (config_echo_json.empty() ? "null" : config_echo_json)
     << ", \"records\": [";
  bool first = true;
  for (const auto& r : records) {
    if (!first) os << ", ";
    first = false;
    os << "{\"replication_id\": " << r.replication_id << ", \"network_family\": \""
       << r.network_family << "\", \"design_strategy\": \"" << r.design_strategy
       << "\", \"design_prior_id\": " << r.design_prior_id
       << ", \"imse_true\": " << format_double(r.imse_true)
       << ", \"relative_imse\": " << format_double(r.relative_imse) << "}";
  }
  os << "]}";
  return os.str();
}

void write_records_json(const std::vector<StudyRecord>& records,
                        const std::string& config_echo_json,
                        const std::string& path) {
  write_text_file(records_json(records, config_echo_json), path);
}

std::vector<StudyRecord> read_records_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open records file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": bad JSON: " + e.what());
  }
  std::vector<StudyRecord> records;
  for (const auto& r : j.at("records")) {
    records.push_back(StudyRecord{
        r.at("replication_id").get<int>(),
        r.at("network_family").get<std::string>(),
        r.at("design_strategy").get<std::string>(),
        r.at("design_prior_id").get<int>(),
        r.at("imse_true").get<double>(),
        r.at("relative_imse").get<double>(),
    });
  }
  return records;
}

std::string anova_csv(const AnovaTable& table) {
  std::ostringstream os;
  os << "factor,df,mss\n";
  for (const auto& row : table.rows) {
    os << row.factor << ',' << row.df << ',' << format_double(row.mss) << '\n';
  }
  return os.str();
}

void write_anova_csv(const AnovaTable& table, const std::string& path) {
  write_text_file(anova_csv(table), path);
}

std::vector<HistogramRow> relative_imse_histogram(
    const std::vector<StudyRecord>& records, double bin_width) {
  std::map<std::tuple<std::string, int, long>, long> bins;
  for (const auto& r : records) {
    const long b = static_cast<long>(std::floor(r.relative_imse / bin_width));
    bins[{r.design_strategy, r.design_prior_id, b}]++;
  }
  std::vector<HistogramRow> rows;
  rows.reserve(bins.size());
  for (const auto& [key, count] : bins) {
    const auto& [strategy, prior_id, b] = key;
    rows.push_back(HistogramRow{strategy, prior_id, b * bin_width,
                                (b + 1) * bin_width, count});
  }
  return rows;
}

std::string histogram_csv(const std::vector<HistogramRow>& rows) {
  std::ostringstream os;
  os << "design_strategy,design_prior_id,bin_lo,bin_hi,count\n";
  for (const auto& r : rows) {
    os << r.design_strategy << ',' << r.design_prior_id << ','
       << format_double(r.bin_lo) << ',' << format_double(r.bin_hi) << ','
       << r.count << '\n';
  }
  return os.str();
}

void write_histogram_csv(const std::vector<HistogramRow>& rows,
                         const std::string& path) {
  write_text_file(histogram_csv(rows), path);
}

}  // namespace netdesign
