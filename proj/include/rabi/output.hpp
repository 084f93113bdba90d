// Serialization of experiment results: CSV tables, JSON summaries, SVG plots.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rabi/config.hpp"
#include "rabi/experiments.hpp"

namespace rabi {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// UTF-8, comma separated, LF line endings, header row first.
std::string to_csv(const CsvTable& table);

CsvTable csv_table(const ExperimentResult& result);
CsvTable csv_table(const ProbabilitySeries& series);

/// Reads the first two columns of a headered CSV as (t, p).
ProbabilitySeries read_series_csv(const std::filesystem::path& path);

nlohmann::json config_json(const ExperimentConfig& cfg);
nlohmann::json fit_json(const DampedSinusoidFit& fit);
nlohmann::json summary_json(const ExperimentResult& result, const ExperimentConfig& cfg);

std::string svg_plot(const ExperimentResult& result, const ExperimentConfig& cfg);

/// Writes <dir>/<prefix>.{csv,json,svg} for the configured formats; an
/// unwritable path raises IoError naming it.
std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result,
                                                const ExperimentConfig& cfg);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rabi
