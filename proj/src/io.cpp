#include "io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace llgm {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, delim)) fields.push_back(field);
  if (!line.empty() && line.back() == delim) fields.push_back("");
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_cell(const std::string& text, const std::string& row_label,
                  const std::string& col_label) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw Error(ErrorCode::Parse, "non-numeric cell at row '" + row_label + "', column '" +
                                      col_label + "': '" + text + "'");
  if (!std::isfinite(value) || value < 0.0)
    throw Error(ErrorCode::Parse, "negative or non-finite count at row '" + row_label +
                                      "', column '" + col_label + "'");
  return value;
}

std::string format_value(double v) {
  std::ostringstream out;
  if (v == std::floor(v) && std::abs(v) < 1e15)
    out << static_cast<long long>(v);
  else
    out << std::setprecision(12) << v;
  return out.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write file '" + path + "'");
  return out;
}

std::map<std::string, int> label_index(const std::vector<std::string>& labels) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);
  return index;
}

}  // namespace

CountMatrix read_counts(const std::string& path, Orientation orientation) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "empty file '" + path + "'");
  line = strip_cr(line);
  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';

  std::vector<std::string> header = split(line, delim);
  if (header.size() < 2) throw Error(ErrorCode::Parse, "header row has too few columns");
  std::vector<std::string> col_labels(header.begin() + 1, header.end());

  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, delim);
    if (fields.size() != header.size())
      throw Error(ErrorCode::Parse, "ragged row at line " + std::to_string(line_no) + " ('" +
                                        fields.front() + "'): expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
    row_labels.push_back(fields[0]);
    std::vector<double> values(col_labels.size());
    for (std::size_t c = 0; c < col_labels.size(); ++c)
      values[c] = parse_cell(fields[c + 1], fields[0], col_labels[c]);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "no data rows in '" + path + "'");

  CountMatrix X;
  if (orientation == Orientation::SamplesByVariables) {
    X.values.resize(static_cast<int>(rows.size()), static_cast<int>(col_labels.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < col_labels.size(); ++c)
        X.values(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    X.sample_ids = std::move(row_labels);
    X.variable_ids = std::move(col_labels);
  } else {
    X.values.resize(static_cast<int>(col_labels.size()), static_cast<int>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < col_labels.size(); ++c)
        X.values(static_cast<int>(c), static_cast<int>(r)) = rows[r][c];
    X.sample_ids = std::move(col_labels);
    X.variable_ids = std::move(row_labels);
  }
  X.validate();
  return X;
}

void write_counts(const CountMatrix& X, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "sample";
  for (const auto& v : X.variable_ids) out << '\t' << v;
  out << '\n';
  for (int i = 0; i < X.n(); ++i) {
    out << X.sample_ids[i];
    for (int j = 0; j < X.p(); ++j) out << '\t' << format_value(X.values(i, j));
    out << '\n';
  }
}

void write_fit_edges(const LlgmFit& fit, const std::string& path) {
  std::ofstream out = open_out(path);
  const int p = fit.adjacency.p;
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      if (!fit.adjacency.at(j, k)) continue;
      const double weight =
          std::max(std::abs(fit.theta_opt.theta(j, k)), std::abs(fit.theta_opt.theta(k, j)));
      out << fit.variable_ids[j] << '\t' << fit.variable_ids[k] << '\t'
          << std::setprecision(10) << weight << '\n';
    }
  }
}

void write_graph_edges(const AdjacencyMatrix& A, const std::vector<std::string>& labels,
                       const std::string& path) {
  if (static_cast<int>(labels.size()) != A.p)
    throw Error(ErrorCode::InvalidArgument, "label count does not match graph dimension");
  std::ofstream out = open_out(path);
  for (int j = 0; j < A.p; ++j)
    for (int k = j + 1; k < A.p; ++k)
      if (A.at(j, k)) out << labels[j] << '\t' << labels[k] << "\t1\n";
}

AdjacencyMatrix read_graph_edges(const std::string& path,
                                 const std::vector<std::string>& labels) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open file '" + path + "'");
  const auto index = label_index(labels);
  AdjacencyMatrix A(static_cast<int>(labels.size()));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() < 2)
      throw Error(ErrorCode::Parse, "edge list line " + std::to_string(line_no) +
                                        " needs at least two fields");
    auto a = index.find(fields[0]);
    auto b = index.find(fields[1]);
    if (a == index.end() || b == index.end())
      throw Error(ErrorCode::Parse, "edge list line " + std::to_string(line_no) +
                                        " names an unknown node");
    if (a->second == b->second)
      throw Error(ErrorCode::Parse, "edge list line " + std::to_string(line_no) +
                                        " is a self-loop");
    A.set_edge(a->second, b->second, 1);
  }
  return A;
}

void write_stability_csv(const LlgmFit& fit, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "rho,instability,instability_mono\n";
  for (int t = 0; t < fit.path.size(); ++t) {
    out << std::setprecision(10) << fit.path.values[t];
    if (fit.stability_run)
      out << ',' << fit.stability.instability[t] << ',' << fit.stability.instability_mono[t];
    else
      out << ",,";
    out << '\n';
  }
}

void write_frequency_csv(const LlgmFit& fit, const std::string& path) {
  if (!fit.stability_run)
    throw Error(ErrorCode::InvalidArgument, "no stability result to dump");
  std::ofstream out = open_out(path);
  out << "rho,node_a,node_b,frequency\n";
  const int p = fit.adjacency.p;
  for (int t = 0; t < fit.path.size(); ++t) {
    const Eigen::MatrixXd& freq = fit.stability.edge_frequency[t];
    for (int j = 0; j < p; ++j)
      for (int k = j + 1; k < p; ++k)
        if (freq(j, k) > 0.0)
          out << std::setprecision(10) << fit.path.values[t] << ',' << fit.variable_ids[j]
              << ',' << fit.variable_ids[k] << ',' << freq(j, k) << '\n';
  }
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "rho,fpr,tpr\n";
  for (std::size_t i = 0; i < curve.rho.size(); ++i)
    out << std::setprecision(10) << curve.rho[i] << ',' << curve.fpr[i] << ',' << curve.tpr[i]
        << '\n';
}

void write_degree_csv(const DegreeReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "degree,count\n";
  for (const auto& [degree, count] : report.degree_histogram)
    out << degree << ',' << count << '\n';
}

nlohmann::json normalization_report_json(const NormalizationReport& report) {
  return nlohmann::json{{"depth_method", to_string(report.depth_method)},
                        {"scale_factors", report.scale_factors},
                        {"kept_variables", report.kept_variables},
                        {"filter_fraction", report.filter_fraction},
                        {"alpha", report.alpha},
                        {"dispersion_before", report.dispersion_before},
                        {"dispersion_after", report.dispersion_after},
                        {"warnings", report.warnings}};
}

nlohmann::json fit_report_json(const LlgmFit& fit) {
  nlohmann::json report{
      {"p", fit.adjacency.p},
      {"path", fit.path.values},
      {"rho_max", fit.path.rho_max()},
      {"rho_min", fit.path.rho_min()},
      {"rho_opt", fit.rho_opt},
      {"selected_index", fit.selected_index},
      {"edge_count", fit.adjacency.edge_count()},
      {"warnings", fit.warnings},
  };
  nlohmann::json convergence = nlohmann::json::array();
  for (const PathSolution& sol : fit.theta_path) {
    if (sol.node < 0) {
      convergence.push_back(nullptr);
      continue;
    }
    convergence.push_back(sol.converged[fit.selected_index] != 0);
  }
  report["node_converged_at_rho_opt"] = convergence;
  if (fit.stability_run) {
    report["stability"] = {{"instability", fit.stability.instability},
                           {"instability_mono", fit.stability.instability_mono},
                           {"budget_violated", fit.stability.budget_violated}};
  }
  return report;
}

nlohmann::json degree_report_json(const DegreeReport& report) {
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [degree, count] : report.degree_histogram)
    histogram[std::to_string(degree)] = count;
  nlohmann::json out{{"degree_histogram", histogram}};
  if (report.slope_defined) {
    out["loglog_slope"] = report.loglog_slope;
    out["loglog_r2"] = report.loglog_r2;
  } else {
    out["loglog_slope"] = nullptr;
    out["loglog_r2"] = nullptr;
  }
  return out;
}

nlohmann::json roc_summary_json(const RocCurve& curve) {
  return nlohmann::json{{"auc", curve.auc}, {"points", curve.rho.size()}};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open file '" + path + "'");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[4096];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

}  // namespace llgm
