#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "evaluate.hpp"
#include "network.hpp"
#include "normalize.hpp"
#include "simulate.hpp"
#include "types.hpp"

namespace llgm {

enum class Orientation { SamplesByVariables, VariablesBySamples };

// TSV or CSV (sniffed from the header line) with one header row of variable
// labels and a leading column of sample labels. VariablesBySamples transposes
// the roles on ingest.
CountMatrix read_counts(const std::string& path, Orientation orientation);
void write_counts(const CountMatrix& X, const std::string& path);

// Edge-list TSV: node_a <TAB> node_b <TAB> weight.
void write_fit_edges(const LlgmFit& fit, const std::string& path);
void write_graph_edges(const AdjacencyMatrix& A, const std::vector<std::string>& labels,
                       const std::string& path);
AdjacencyMatrix read_graph_edges(const std::string& path,
                                 const std::vector<std::string>& labels);

void write_stability_csv(const LlgmFit& fit, const std::string& path);
void write_frequency_csv(const LlgmFit& fit, const std::string& path);
void write_roc_csv(const RocCurve& curve, const std::string& path);
void write_degree_csv(const DegreeReport& report, const std::string& path);

nlohmann::json normalization_report_json(const NormalizationReport& report);
nlohmann::json fit_report_json(const LlgmFit& fit);
nlohmann::json degree_report_json(const DegreeReport& report);
nlohmann::json roc_summary_json(const RocCurve& curve);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// FNV-1a 64-bit digest of a file, hex-encoded; used in run manifests.
std::string file_checksum(const std::string& path);

}  // namespace llgm
