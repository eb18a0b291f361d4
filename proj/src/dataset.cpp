#include "ganloc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace ganloc {

std::map<int, std::size_t> Dataset::per_class_counts() const {
  std::map<int, std::size_t> counts;
  for (const RssSample& s : samples) {
    ++counts[s.label];
  }
  return counts;
}

Matrix Dataset::features() const {
  Matrix m(static_cast<Index>(samples.size()), feature_count);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    m.row(static_cast<Index>(i)) = samples[i].rss;
  }
  return m;
}

Matrix Dataset::labels_one_hot() const {
  Matrix m = Matrix::Zero(static_cast<Index>(samples.size()), class_count);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    m(static_cast<Index>(i), samples[i].label - 1) = 1.0;
  }
  return m;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) {
    fields.push_back(field);
  }
  return fields;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
    if (pos != s.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": not a number: '" + s + "'");
  }
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open dataset: " + path.string());
  }
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  Index n_fields = -1;
  int max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2) {
      throw DataError(where + ": expected features and a label, got " +
                      std::to_string(fields.size()) + " column(s)");
    }
    if (n_fields < 0) {
      n_fields = static_cast<Index>(fields.size());
    } else if (static_cast<Index>(fields.size()) != n_fields) {
      throw DataError(where + ": expected " + std::to_string(n_fields) +
                      " columns, got " + std::to_string(fields.size()));
    }
    RssSample sample;
    sample.rss = RowVector(n_fields - 1);
    for (Index j = 0; j + 1 < n_fields; ++j) {
      sample.rss(j) = parse_number(fields[static_cast<std::size_t>(j)], where);
    }
    const double label_raw = parse_number(fields.back(), where);
    const int label = static_cast<int>(label_raw);
    if (static_cast<double>(label) != label_raw || label < 1) {
      throw DataError(where + ": label must be a positive integer, got '" +
                      fields.back() + "'");
    }
    sample.label = label;
    max_label = std::max(max_label, label);
    ds.samples.push_back(std::move(sample));
  }
  if (ds.samples.empty()) {
    throw DataError("dataset is empty: " + path.string());
  }
  ds.feature_count = n_fields - 1;
  ds.class_count = max_label;
  return ds;
}

SplitResult stratified_split(const Dataset& ds, Rng& rng) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    by_class[ds.samples[i].label].push_back(i);
  }
  SplitResult result;
  for (auto& [label, indices] : by_class) {
    if (indices.size() % 2 != 0) {
      throw DataError("stratified_split: class " + std::to_string(label) +
                      " has odd count " + std::to_string(indices.size()));
    }
    rng.shuffle(indices);
    const std::size_t half = indices.size() / 2;
    result.train_indices.insert(result.train_indices.end(), indices.begin(),
                                indices.begin() + half);
    result.test_indices.insert(result.test_indices.end(),
                               indices.begin() + half, indices.end());
  }
  std::sort(result.train_indices.begin(), result.train_indices.end());
  std::sort(result.test_indices.begin(), result.test_indices.end());
  auto take = [&ds](const std::vector<std::size_t>& idx) {
    Dataset out;
    out.class_count = ds.class_count;
    out.feature_count = ds.feature_count;
    out.samples.reserve(idx.size());
    for (std::size_t i : idx) {
      out.samples.push_back(ds.samples[i]);
    }
    return out;
  };
  result.train = take(result.train_indices);
  result.test = take(result.test_indices);
  return result;
}

void write_split_manifest(const std::filesystem::path& path,
                          const SplitResult& split) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open for writing: " + path.string());
  }
  out << "sample_index,split,class\n";
  std::size_t ti = 0, si = 0;
  // Merge the two sorted index lists so rows come out in file order.
  while (ti < split.train_indices.size() || si < split.test_indices.size()) {
    const bool from_train =
        si >= split.test_indices.size() ||
        (ti < split.train_indices.size() &&
         split.train_indices[ti] < split.test_indices[si]);
    if (from_train) {
      out << split.train_indices[ti] << ",train,"
          << split.train.samples[ti].label << "\n";
      ++ti;
    } else {
      out << split.test_indices[si] << ",test,"
          << split.test.samples[si].label << "\n";
      ++si;
    }
  }
}

Dataset subsample_fraction(const Dataset& ds, double fraction, Rng& rng) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw ConfigError("subsample fraction must be in (0,1], got " +
                      std::to_string(fraction));
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    by_class[ds.samples[i].label].push_back(i);
  }
  std::vector<std::size_t> picked;
  for (auto& [label, indices] : by_class) {
    // Round half up.
    const std::size_t k = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(indices.size()) + 0.5));
    if (k < 1) {
      throw ConfigError("subsample fraction " + std::to_string(fraction) +
                        " rounds to zero samples for class " +
                        std::to_string(label));
    }
    rng.shuffle(indices);
    picked.insert(picked.end(), indices.begin(), indices.begin() + k);
  }
  std::sort(picked.begin(), picked.end());
  Dataset out;
  out.class_count = ds.class_count;
  out.feature_count = ds.feature_count;
  out.samples.reserve(picked.size());
  for (std::size_t i : picked) {
    out.samples.push_back(ds.samples[i]);
  }
  return out;
}

ClassMatrix class_matrix(const Dataset& ds, int class_id) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (ds.samples[i].label == class_id) {
      rows.push_back(i);
    }
  }
  if (rows.empty()) {
    throw DataError("class " + std::to_string(class_id) +
                    " is absent from the dataset");
  }
  ClassMatrix cm;
  cm.class_id = class_id;
  cm.values = Matrix(static_cast<Index>(rows.size()), ds.feature_count);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cm.values.row(static_cast<Index>(i)) = ds.samples[rows[i]].rss;
  }
  return cm;
}

RowVector one_hot(int label, int class_count) {
  if (label < 1 || label > class_count) {
    throw DataError("label " + std::to_string(label) + " outside 1.." +
                    std::to_string(class_count));
  }
  RowVector v = RowVector::Zero(class_count);
  v(label - 1) = 1.0;
  return v;
}

Dataset dataset_from_class_matrices(const std::vector<ClassMatrix>& blocks,
                                    int class_count) {
  Dataset ds;
  ds.class_count = class_count;
  if (blocks.empty()) {
    throw DataError("no class blocks given");
  }
  ds.feature_count = blocks.front().values.cols();
  for (const ClassMatrix& cm : blocks) {
    if (cm.values.cols() != ds.feature_count) {
      throw DataError("class block width mismatch");
    }
    if (cm.class_id < 1 || cm.class_id > class_count) {
      throw DataError("class block id " + std::to_string(cm.class_id) +
                      " outside 1.." + std::to_string(class_count));
    }
    for (Index r = 0; r < cm.values.rows(); ++r) {
      ds.samples.push_back({cm.values.row(r), cm.class_id});
    }
  }
  return ds;
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open for writing: " + path.string());
  }
  char buf[40];
  for (const RssSample& s : ds.samples) {
    for (Index j = 0; j < s.rss.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.rss(j));
      out << buf << '\t';
    }
    out << s.label << '\n';
  }
}

}  // namespace ganloc
