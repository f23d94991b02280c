#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "srnl/diagnostics.hpp"

namespace srnl {

// Raw comma-separated table with a header row; cells kept as strings.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

RawTable load_table(const std::string& path);

// Column roles for turning a raw table into a numeric dataset. Feature
// columns must parse as numbers; the label column is mapped through
// label_values when non-empty (e.g. {"g":1, "h":0}), else parsed numerically.
struct ColumnSpec {
  std::vector<std::string> features;
  std::string label;
  std::map<std::string, double> label_values;
};

struct TabularDataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;  // values in {0,1}
  std::vector<std::string> feature_names;
  std::string provenance;
  long dropped_rows = 0;  // rows with unparseable required fields
};

TabularDataset load_csv(const std::string& path, const ColumnSpec& spec);

// Canonical MAGIC telescope schema: 10 physical features plus the g/h class
// column; the 10th feature is dropped to match the d = 9 setup.
ColumnSpec magic_spec();

// Zero-mean/unit-variance per feature (population std). When stats_rows is
// given, the statistics are computed on that subset only (train-only switch).
void standardize(TabularDataset& data, const std::vector<int>* stats_rows = nullptr);

// Titanic pipeline: drop identifier/name/ticket/cabin columns, encode sex
// numerically and embarkation as a 3-way one-hot, impute missing ages with
// the median, standardize. Yields d = 9 features.
TabularDataset preprocess_titanic(const RawTable& raw,
                                  const std::vector<int>* stats_rows = nullptr);

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

// Uniformly random partition with |test| = round(n * test_fraction).
std::pair<TabularDataset, TabularDataset> split(const TabularDataset& data,
                                                const SplitSpec& spec);

// FNV-1a over file bytes; the manifest records it for inputs and outputs.
std::uint64_t fnv1a_file(const std::string& path);
std::string hash_hex(std::uint64_t h);

void write_samples_csv(const std::string& path, const Eigen::MatrixXd& points);
Eigen::MatrixXd read_samples_csv(const std::string& path);

// Long-format metrics CSV: method,seed,checkpoint,metric,dim,value
// (dim is empty for scalar metrics).
void write_metrics_csv(const std::string& path, const std::vector<MetricSeries>& series);
void write_summary_csv(const std::string& path, const std::vector<MethodSummary>& summaries);

// Run manifest: ordered key-value pairs in sectioned text form.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);
std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path);

}  // namespace srnl
