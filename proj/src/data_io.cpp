#include "srnl/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "srnl/rng.hpp"

namespace srnl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

}  // namespace

int RawTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

RawTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_table: cannot open '" + path + "'");
  RawTable t;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("load_table: '" + path + "' is empty (header row required)");
  t.header = split_commas(line);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    t.rows.push_back(split_commas(line));
  }
  return t;
}

TabularDataset load_csv(const std::string& path, const ColumnSpec& spec) {
  const RawTable t = load_table(path);
  std::vector<int> fcols;
  for (const auto& name : spec.features) {
    const int c = t.column(name);
    if (c < 0)
      throw std::runtime_error("load_csv: required column '" + name + "' missing in '" + path + "'");
    fcols.push_back(c);
  }
  const int lcol = t.column(spec.label);
  if (lcol < 0)
    throw std::runtime_error("load_csv: required label column '" + spec.label + "' missing in '" +
                             path + "'");

  const int d = static_cast<int>(fcols.size());
  std::vector<Eigen::VectorXd> feats;
  std::vector<double> labels;
  long dropped = 0;
  Eigen::VectorXd row(d);
  for (const auto& cells : t.rows) {
    bool ok = true;
    for (int j = 0; j < d && ok; ++j) {
      if (fcols[j] >= static_cast<int>(cells.size()) || !parse_double(cells[fcols[j]], row[j]))
        ok = false;
    }
    double y = 0.0;
    if (ok) {
      if (lcol >= static_cast<int>(cells.size())) {
        ok = false;
      } else if (!spec.label_values.empty()) {
        const auto it = spec.label_values.find(cells[lcol]);
        if (it == spec.label_values.end())
          ok = false;
        else
          y = it->second;
      } else if (!parse_double(cells[lcol], y)) {
        ok = false;
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    feats.push_back(row);
    labels.push_back(y);
  }
  if (feats.empty()) throw std::runtime_error("load_csv: zero usable rows in '" + path + "'");

  TabularDataset ds;
  ds.features.resize(static_cast<long>(feats.size()), d);
  ds.labels.resize(static_cast<long>(labels.size()));
  for (size_t i = 0; i < feats.size(); ++i) {
    ds.features.row(static_cast<long>(i)) = feats[i];
    ds.labels[static_cast<long>(i)] = labels[i];
  }
  ds.feature_names = spec.features;
  ds.provenance = path;
  ds.dropped_rows = dropped;
  return ds;
}

ColumnSpec magic_spec() {
  ColumnSpec spec;
  // the public file carries 10 features; fDist is dropped for the d = 9 setup
  spec.features = {"fLength", "fWidth", "fSize",   "fConc",  "fConc1",
                   "fAsym",   "fM3Long", "fM3Trans", "fAlpha"};
  spec.label = "class";
  spec.label_values = {{"g", 1.0}, {"h", 0.0}};
  return spec;
}

void standardize(TabularDataset& data, const std::vector<int>* stats_rows) {
  const long n = data.features.rows();
  const int d = static_cast<int>(data.features.cols());
  for (int c = 0; c < d; ++c) {
    double mean = 0.0, var = 0.0;
    long m = 0;
    if (stats_rows != nullptr) {
      for (const int r : *stats_rows) mean += data.features(r, c);
      m = static_cast<long>(stats_rows->size());
      mean /= static_cast<double>(m);
      for (const int r : *stats_rows) {
        const double dlt = data.features(r, c) - mean;
        var += dlt * dlt;
      }
    } else {
      mean = data.features.col(c).mean();
      m = n;
      var = (data.features.col(c).array() - mean).square().sum();
    }
    var /= static_cast<double>(m);
    const double sd = std::sqrt(var);
    if (sd < 1e-12) {
      data.features.col(c).setZero();  // constant feature carries no signal
      continue;
    }
    data.features.col(c) = (data.features.col(c).array() - mean) / sd;
  }
}

TabularDataset preprocess_titanic(const RawTable& raw, const std::vector<int>* stats_rows) {
  const int c_survived = raw.column("Survived");
  const int c_pclass = raw.column("Pclass");
  const int c_sex = raw.column("Sex");
  const int c_age = raw.column("Age");
  const int c_sibsp = raw.column("SibSp");
  const int c_parch = raw.column("Parch");
  const int c_fare = raw.column("Fare");
  const int c_emb = raw.column("Embarked");
  if (c_survived < 0 || c_pclass < 0 || c_sex < 0 || c_age < 0 || c_sibsp < 0 ||
      c_parch < 0 || c_fare < 0 || c_emb < 0)
    throw std::runtime_error("preprocess_titanic: raw table does not match the Titanic schema");

  const long n = static_cast<long>(raw.rows.size());
  if (n == 0) throw std::runtime_error("preprocess_titanic: empty table");

  auto cell = [&](long r, int c) -> std::string {
    return c < static_cast<int>(raw.rows[r].size()) ? raw.rows[r][c] : "";
  };

  // median age over the present values
  std::vector<double> ages;
  for (long r = 0; r < n; ++r) {
    double a;
    if (parse_double(cell(r, c_age), a)) ages.push_back(a);
  }
  if (ages.empty()) throw std::runtime_error("preprocess_titanic: no parseable ages");
  std::sort(ages.begin(), ages.end());
  const double median_age = ages.size() % 2 == 1
                                ? ages[ages.size() / 2]
                                : 0.5 * (ages[ages.size() / 2 - 1] + ages[ages.size() / 2]);

  TabularDataset ds;
  ds.feature_names = {"Pclass", "Sex",   "Age",   "SibSp", "Parch",
                      "Fare",   "Emb_S", "Emb_C", "Emb_Q"};
  ds.features.resize(n, 9);
  ds.labels.resize(n);
  ds.provenance = "titanic";
  long kept = 0;
  for (long r = 0; r < n; ++r) {
    double survived, pclass, sibsp, parch, fare;
    if (!parse_double(cell(r, c_survived), survived) ||
        !parse_double(cell(r, c_pclass), pclass) ||
        !parse_double(cell(r, c_sibsp), sibsp) || !parse_double(cell(r, c_parch), parch) ||
        !parse_double(cell(r, c_fare), fare)) {
      ++ds.dropped_rows;
      continue;
    }
    const std::string sex = cell(r, c_sex);
    if (sex != "male" && sex != "female") {
      ++ds.dropped_rows;
      continue;
    }
    double age;
    if (!parse_double(cell(r, c_age), age)) age = median_age;
    const std::string emb = cell(r, c_emb);

    ds.features(kept, 0) = pclass;
    ds.features(kept, 1) = sex == "female" ? 1.0 : 0.0;
    ds.features(kept, 2) = age;
    ds.features(kept, 3) = sibsp;
    ds.features(kept, 4) = parch;
    ds.features(kept, 5) = fare;
    ds.features(kept, 6) = emb == "C" || emb == "Q" ? 0.0 : 1.0;  // missing -> S
    ds.features(kept, 7) = emb == "C" ? 1.0 : 0.0;
    ds.features(kept, 8) = emb == "Q" ? 1.0 : 0.0;
    ds.labels(kept) = survived != 0.0 ? 1.0 : 0.0;
    ++kept;
  }
  if (kept == 0) throw std::runtime_error("preprocess_titanic: zero usable rows");
  ds.features.conservativeResize(kept, 9);
  ds.labels.conservativeResize(kept);
  standardize(ds, stats_rows);
  return ds;
}

std::pair<TabularDataset, TabularDataset> split(const TabularDataset& data,
                                                const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw std::invalid_argument("split: test_fraction must be in (0,1)");
  const long n = data.features.rows();
  const long n_test = std::lround(static_cast<double>(n) * spec.test_fraction);
  if (n_test < 1 || n_test >= n)
    throw std::invalid_argument("split: degenerate split (empty train or test part)");

  std::vector<long> perm(n);
  for (long i = 0; i < n; ++i) perm[i] = i;
  RngStream rng(spec.seed);
  for (long i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  auto take = [&](long begin, long count) {
    TabularDataset part;
    part.features.resize(count, data.features.cols());
    part.labels.resize(count);
    for (long i = 0; i < count; ++i) {
      part.features.row(i) = data.features.row(perm[begin + i]);
      part.labels[i] = data.labels[perm[begin + i]];
    }
    part.feature_names = data.feature_names;
    part.provenance = data.provenance;
    return part;
  };
  return {take(n_test, n - n_test), take(0, n_test)};
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fnv1a_file: cannot open '" + path + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_samples_csv(const std::string& path, const Eigen::MatrixXd& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_samples_csv: cannot open '" + path + "'");
  const int d = static_cast<int>(points.cols());
  for (int c = 0; c < d; ++c) out << (c ? "," : "") << "dim_" << c;
  out << "\n";
  out << std::setprecision(17);
  for (long r = 0; r < points.rows(); ++r) {
    for (int c = 0; c < d; ++c) out << (c ? "," : "") << points(r, c);
    out << "\n";
  }
}

Eigen::MatrixXd read_samples_csv(const std::string& path) {
  const RawTable t = load_table(path);
  const int d = static_cast<int>(t.header.size());
  Eigen::MatrixXd pts(static_cast<long>(t.rows.size()), d);
  for (size_t r = 0; r < t.rows.size(); ++r)
    for (int c = 0; c < d; ++c) {
      double v;
      if (!parse_double(t.rows[r][c], v))
        throw std::runtime_error("read_samples_csv: bad value at row " + std::to_string(r + 2));
      pts(static_cast<long>(r), c) = v;
    }
  return pts;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricSeries>& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_metrics_csv: cannot open '" + path + "'");
  out << "method,seed,checkpoint,metric,dim,value\n";
  out << std::setprecision(17);
  for (const auto& s : series)
    for (size_t i = 0; i < s.checkpoints.size(); ++i) {
      out << s.method << "," << s.seed << "," << s.checkpoints[i] << "," << s.metric << ",";
      if (s.dim_index >= 0) out << s.dim_index;
      out << "," << s.values[i] << "\n";
    }
}

void write_summary_csv(const std::string& path, const std::vector<MethodSummary>& summaries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_summary_csv: cannot open '" + path + "'");
  out << "method,checkpoint,metric,dim,mean,std\n";
  out << std::setprecision(17);
  for (const auto& s : summaries)
    for (size_t i = 0; i < s.checkpoints.size(); ++i) {
      out << s.method << "," << s.checkpoints[i] << "," << s.metric << ",";
      if (s.dim_index >= 0) out << s.dim_index;
      out << "," << s.mean[i] << "," << s.stddev[i] << "\n";
    }
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_manifest: cannot open '" + path + "'");
  for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_manifest: cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

}  // namespace srnl
