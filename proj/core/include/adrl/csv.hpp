#pragma once

#include <filesystem>
#include <span>
#include <string>

namespace adrl {

struct ValidationRow;
struct TrainingEpisodeRow;
struct EpisodeMetrics;
struct CellSummary;
struct CompareRow;

// Nine significant digits ("%.9g"); NaN prints as "nan".
std::string format_real(double v);

// Sensor and hypothesis indices in these files: sensors are 1-based,
// hypothesis indices follow the canonical enumeration (0 = all normal).
std::string validation_csv(std::span<const ValidationRow> rows);
std::string training_csv(std::span<const TrainingEpisodeRow> rows);
std::string metrics_csv(std::span<const EpisodeMetrics> rows);
std::string grid_csv(std::span<const CellSummary> cells);
std::string compare_csv(std::span<const CompareRow> rows);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace adrl
