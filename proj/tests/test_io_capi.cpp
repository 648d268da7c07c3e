#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "io.hpp"
#include "llgm/llgm.h"
#include "rng.hpp"
#include "simulate.hpp"

using namespace llgm;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "llgm_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

CountMatrix small_counts() {
  Eigen::MatrixXd values(3, 2);
  values << 1, 2, 0, 4, 7, 3;
  CountMatrix X;
  X.values = std::move(values);
  X.sample_ids = {"s1", "s2", "s3"};
  X.variable_ids = {"gA", "gB"};
  return X;
}

std::string take_string(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  llgm_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("counts round-trip bit-identically through TSV") {
  const fs::path path = temp_file("roundtrip.tsv");
  CountMatrix X = small_counts();
  write_counts(X, path.string());
  CountMatrix Y = read_counts(path.string(), Orientation::SamplesByVariables);
  CHECK(Y.sample_ids == X.sample_ids);
  CHECK(Y.variable_ids == X.variable_ids);
  CHECK((Y.values - X.values).cwiseAbs().maxCoeff() == 0.0);

  // The file itself is also stable under rewrite.
  const std::string first = read_text(path.string());
  write_counts(Y, path.string());
  CHECK(read_text(path.string()) == first);
}

TEST_CASE("CSV input is sniffed from the header") {
  const fs::path path = temp_file("comma.csv");
  write_text(path.string(), "sample,gA,gB\ns1,1,2\ns2,0,4\n");
  CountMatrix X = read_counts(path.string(), Orientation::SamplesByVariables);
  CHECK(X.n() == 2);
  CHECK(X.p() == 2);
  CHECK(X.variable_ids == std::vector<std::string>{"gA", "gB"});
  CHECK(X.values(1, 1) == 4.0);
}

TEST_CASE("variables-by-samples orientation transposes on ingest") {
  const fs::path path = temp_file("transposed.tsv");
  write_text(path.string(), "var\ts1\ts2\ts3\ngA\t1\t0\t7\ngB\t2\t4\t3\n");
  CountMatrix X = read_counts(path.string(), Orientation::VariablesBySamples);
  CHECK(X.n() == 3);
  CHECK(X.p() == 2);
  CHECK(X.sample_ids == std::vector<std::string>{"s1", "s2", "s3"});
  CHECK(X.variable_ids == std::vector<std::string>{"gA", "gB"});
  CHECK((X.values - small_counts().values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parse errors name the offending location") {
  const fs::path ragged = temp_file("ragged.tsv");
  write_text(ragged.string(), "sample\tgA\tgB\ns1\t1\t2\ns2\t3\n");
  try {
    read_counts(ragged.string(), Orientation::SamplesByVariables);
    FAIL("expected a parse error for the ragged row");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  const fs::path bad = temp_file("nonnumeric.tsv");
  write_text(bad.string(), "sample\tgA\tgB\ns1\t1\toops\n");
  try {
    read_counts(bad.string(), Orientation::SamplesByVariables);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("gB") != std::string::npos);
  }

  const fs::path negative = temp_file("negative.tsv");
  write_text(negative.string(), "sample\tgA\tgB\ns1\t1\t-2\n");
  CHECK_THROWS_AS(read_counts(negative.string(), Orientation::SamplesByVariables), Error);

  CHECK_THROWS_AS(read_counts("/nonexistent/llgm.tsv", Orientation::SamplesByVariables),
                  Error);
}

TEST_CASE("graph edge lists round-trip against a label set") {
  const std::vector<std::string> labels = {"a", "b", "c", "d"};
  AdjacencyMatrix A(4);
  A.set_edge(0, 2, 1);
  A.set_edge(1, 3, 1);
  const fs::path path = temp_file("edges.tsv");
  write_graph_edges(A, labels, path.string());
  AdjacencyMatrix B = read_graph_edges(path.string(), labels);
  CHECK(B.edges == A.edges);

  const fs::path unknown = temp_file("edges_unknown.tsv");
  write_text(unknown.string(), "a\tzz\t1\n");
  CHECK_THROWS_AS(read_graph_edges(unknown.string(), labels), Error);
}

TEST_CASE("C API: matrix construction, IO, and accessors") {
  llgm_matrix* m = nullptr;
  const double values[6] = {1, 2, 0, 4, 7, 3};
  REQUIRE(llgm_matrix_from_data(values, 3, 2, &m) == LLGM_OK);
  CHECK(llgm_matrix_rows(m) == 3);
  CHECK(llgm_matrix_cols(m) == 2);

  const fs::path path = temp_file("capi_matrix.tsv");
  REQUIRE(llgm_matrix_write(m, path.string().c_str()) == LLGM_OK);
  llgm_matrix* back = nullptr;
  REQUIRE(llgm_matrix_read(path.string().c_str(), 0, &back) == LLGM_OK);
  CHECK(llgm_matrix_rows(back) == 3);
  CHECK(llgm_matrix_cols(back) == 2);
  llgm_matrix_free(back);
  llgm_matrix_free(m);

  CHECK(llgm_matrix_read("/nonexistent/llgm.tsv", 0, &back) == LLGM_ERR_IO);
  CHECK(std::strlen(llgm_last_error()) > 0);
  CHECK(llgm_matrix_from_data(nullptr, 3, 2, &m) == LLGM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("C API: normalize runs and reports") {
  Rng rng(77, 0);
  std::vector<double> values(40 * 6);
  for (double& v : values) v = static_cast<double>(rng.poisson(5.0));
  llgm_matrix* m = nullptr;
  REQUIRE(llgm_matrix_from_data(values.data(), 40, 6, &m) == LLGM_OK);

  llgm_matrix* out = nullptr;
  char* report = nullptr;
  REQUIRE(llgm_normalize(m, R"({"filter_fraction": 0.5})", &out, &report) == LLGM_OK);
  CHECK(llgm_matrix_cols(out) == 3);
  const auto parsed = nlohmann::json::parse(take_string(report));
  CHECK(parsed.contains("alpha"));
  CHECK(parsed.contains("dispersion_after"));
  llgm_matrix_free(out);

  // Unknown option keys are rejected.
  CHECK(llgm_normalize(m, R"({"bogus": 1})", &out, &report) ==
        LLGM_ERR_INVALID_ARGUMENT);
  CHECK(llgm_normalize(m, "not json", &out, &report) == LLGM_ERR_PARSE);
  llgm_matrix_free(m);
}

TEST_CASE("C API: simulate, fit, compare end to end") {
  llgm_matrix* counts = nullptr;
  llgm_graph* truth = nullptr;
  REQUIRE(llgm_simulate(
              R"({"p": 8, "n": 150, "graph": "hub", "n_hubs": 2, "seed": 12})",
              &counts, &truth) == LLGM_OK);
  CHECK(llgm_matrix_rows(counts) == 150);
  CHECK(llgm_matrix_cols(counts) == 8);
  CHECK(llgm_graph_nodes(truth) == 8);
  CHECK(llgm_graph_edge_count(truth) == 6);

  llgm_fit* fit = nullptr;
  REQUIRE(llgm_fit_run(counts,
                       R"({"path_length": 12, "rho_min": 0.001,
                           "subsamples": 8, "seed": 4, "threads": 1})",
                       &fit) == LLGM_OK);
  CHECK(llgm_fit_rho_opt(fit) > 0.0);

  char* report = nullptr;
  REQUIRE(llgm_fit_report_json(fit, &report) == LLGM_OK);
  const auto parsed = nlohmann::json::parse(take_string(report));
  CHECK(parsed.contains("rho_opt"));

  llgm_graph* estimated = nullptr;
  REQUIRE(llgm_fit_graph(fit, &estimated) == LLGM_OK);
  char* compare = nullptr;
  REQUIRE(llgm_graph_compare(estimated, truth, &compare) == LLGM_OK);
  const auto rates = nlohmann::json::parse(take_string(compare));
  CHECK(rates.contains("tpr"));
  CHECK(rates.contains("fpr"));

  const fs::path roc_path = temp_file("capi_roc.csv");
  char* summary = nullptr;
  REQUIRE(llgm_fit_roc_csv(fit, truth, roc_path.string().c_str(), &summary) == LLGM_OK);
  const auto roc = nlohmann::json::parse(take_string(summary));
  CHECK(roc["auc"].get<double>() >= 0.0);
  CHECK(fs::exists(roc_path));

  const fs::path edges_path = temp_file("capi_edges.tsv");
  REQUIRE(llgm_fit_write_edges(fit, edges_path.string().c_str()) == LLGM_OK);
  llgm_graph* reread = nullptr;
  REQUIRE(llgm_graph_read_edges(edges_path.string().c_str(), counts, &reread) == LLGM_OK);
  CHECK(llgm_graph_edge_count(reread) == llgm_graph_edge_count(estimated));

  llgm_graph_free(reread);
  llgm_graph_free(estimated);
  llgm_fit_free(fit);
  llgm_graph_free(truth);
  llgm_matrix_free(counts);
}

TEST_CASE("C API: error statuses for bad handles and options") {
  llgm_fit* fit = nullptr;
  CHECK(llgm_fit_run(nullptr, "{}", &fit) == LLGM_ERR_INVALID_ARGUMENT);

  llgm_matrix* counts = nullptr;
  llgm_graph* truth = nullptr;
  CHECK(llgm_simulate(R"({"graph": "mystery"})", &counts, &truth) ==
        LLGM_ERR_INVALID_ARGUMENT);
  CHECK(llgm_simulate(R"({"p": -3})", &counts, &truth) == LLGM_ERR_INVALID_ARGUMENT);

  CHECK(std::string(llgm_version()).size() > 0);
}
