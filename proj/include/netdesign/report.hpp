#pragma once

#include <string>
#include <vector>

#include "netdesign/study.hpp"

namespace netdesign {

// Shortest text that still round-trips a double: up to 17 significant digits.
std::string format_double(double v);

// Fixed column order:
//   replication_id,network_family,design_strategy,design_prior_id,
//   imse_true,relative_imse
std::string records_csv(const std::vector<StudyRecord>& records);
void write_records_csv(const std::vector<StudyRecord>& records,
                       const std::string& path);

// {"config": <echo>, "records": [...]}; config_echo_json must already be
// valid JSON (use "null" when there is none).
std::string records_json(const std::vector<StudyRecord>& records,
                         const std::string& config_echo_json);
void write_records_json(const std::vector<StudyRecord>& records,
                        const std::string& config_echo_json,
                        const std::string& path);
std::vector<StudyRecord> read_records_json(const std::string& path);

// Columns: factor,df,mss
std::string anova_csv(const AnovaTable& table);
void write_anova_csv(const AnovaTable& table, const std::string& path);

// Binned counts of relative_imse per (strategy, design prior), bin width 0.05.
struct HistogramRow {
  std::string design_strategy;
  int design_prior_id;
  double bin_lo;
  double bin_hi;
  long count;
};
std::vector<HistogramRow> relative_imse_histogram(
    const std::vector<StudyRecord>& records, double bin_width = 0.05);
std::string histogram_csv(const std::vector<HistogramRow>& rows);
void write_histogram_csv(const std::vector<HistogramRow>& rows,
                         const std::string& path);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace netdesign
