#pragma once

#include <filesystem>
#include <string>

#include "scnsim/experiment.hpp"

namespace scnsim {

// All floats in exported files use 9 significant digits; field order is
// fixed, so identical results produce byte-identical files.

std::string summary_json_text(const ExperimentResult& r);
std::string cdf_csv_text(const ExperimentResult& r);
std::string runs_csv_text(const ExperimentResult& r);
std::string clusters_json_text(const ExperimentResult& r);
std::string trace_csv_text(const ExperimentResult& r);

/// Writes summary.json, cdf.csv, runs.csv, clusters.json, trace.csv.
void export_results(const ExperimentResult& r, const std::filesystem::path& dir);

/// Reads a summary.json back into a result (config + reports; traces and
/// partitions live in their own files).
ExperimentResult read_summary_json(const std::filesystem::path& file);

}  // namespace scnsim
