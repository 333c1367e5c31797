#include "colearn/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <string_view>
#include <system_error>

#include "colearn/errors.hpp"
#include "colearn/history.hpp"
#include "colearn/rng.hpp"

namespace colearn {
namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw InvalidInputError(message);
}

[[noreturn]] void load_fail(const std::filesystem::path& path, std::size_t line,
                            const std::string& message) {
  throw LoadError(path.string() + ":" + std::to_string(line) + ": " + message);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void Dataset::validate() const {
  check(features.rows >= 1, "dataset is empty");
  check(labels.size() == features.rows,
        "label count does not match the sample count");
  check(class_count >= 2, "dataset needs at least two classes");
  for (double v : features.data) {
    check(std::isfinite(v), "dataset contains a non-finite feature");
  }
  for (int y : labels) {
    check(y >= 0 && y < class_count, "label out of class range");
  }
}

Dataset gen_gaussian_blobs(std::uint64_t seed, int n, int dims, int classes,
                           double separation) {
  check(classes >= 2, "need at least two classes");
  check(n >= classes, "need at least one sample per class");
  check(dims >= 1, "need at least one dimension");
  check(std::isfinite(separation) && separation > 0.0,
        "separation must be positive");

  // Class c sits on axis c % dims; once the axes are exhausted the sign
  // flips, then the radius grows, keeping all pairwise distances >= the
  // requested separation.
  const double radius = separation / std::sqrt(2.0);
  Matrix means(static_cast<std::size_t>(classes),
               static_cast<std::size_t>(dims));
  for (int c = 0; c < classes; ++c) {
    const int axis = c % dims;
    const int wrap = c / dims;
    const double sign = (wrap % 2 == 0) ? 1.0 : -1.0;
    const double scale = 1.0 + 2.0 * static_cast<double>(wrap / 2);
    means.at(c, axis) = sign * scale * radius;
  }

  Rng rng(derive_seed(seed, kSeedBlobs));
  Dataset out;
  out.class_count = classes;
  out.features = Matrix(static_cast<std::size_t>(n),
                        static_cast<std::size_t>(dims));
  out.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = i % classes;
    out.labels[i] = label;
    for (int j = 0; j < dims; ++j) {
      out.features.at(i, j) = means.at(label, j) + rng.normal();
    }
  }
  return out;
}

Dataset gen_xor_rings(std::uint64_t seed, int n, double noise) {
  check(n >= 4, "need at least the four corner samples");
  check(std::isfinite(noise) && noise >= 0.0, "noise must be non-negative");

  constexpr double corners[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  constexpr int corner_labels[4] = {0, 1, 1, 0};
  constexpr double two_pi = 6.28318530717958647692;

  Rng rng(derive_seed(seed, kSeedXorRings));
  Dataset out;
  out.class_count = 2;
  out.features = Matrix(static_cast<std::size_t>(n), 2);
  out.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int c = i % 4;
    const double radius = noise * (0.5 + 0.5 * rng.uniform());
    const double theta = two_pi * rng.uniform();
    out.features.at(i, 0) = corners[c][0] + radius * std::cos(theta);
    out.features.at(i, 1) = corners[c][1] + radius * std::sin(theta);
    out.labels[i] = corner_labels[c];
  }
  return out;
}

std::vector<Shard> partition_iid(const Dataset& data, int participants,
                                 std::uint64_t seed) {
  data.validate();
  check(participants >= 1, "need at least one participant");
  check(static_cast<std::size_t>(participants) <= data.size(),
        "more participants than samples");

  std::vector<std::size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(derive_seed(seed, kSeedPartition));
  rng.shuffle(perm);

  const std::size_t base = data.size() / static_cast<std::size_t>(participants);
  const std::size_t extra = data.size() % static_cast<std::size_t>(participants);

  std::vector<Shard> shards;
  shards.reserve(static_cast<std::size_t>(participants));
  std::size_t cursor = 0;
  for (int k = 0; k < participants; ++k) {
    const std::size_t count =
        base + (static_cast<std::size_t>(k) < extra ? 1 : 0);
    Shard shard;
    shard.participant_id = k;
    shard.data.class_count = data.class_count;
    shard.data.features = Matrix(count, data.dim());
    shard.data.labels.resize(count);
    for (std::size_t r = 0; r < count; ++r) {
      const std::size_t src = perm[cursor + r];
      for (std::size_t c = 0; c < data.dim(); ++c) {
        shard.data.features.at(r, c) = data.features.at(src, c);
      }
      shard.data.labels[r] = data.labels[src];
    }
    cursor += count;
    shards.push_back(std::move(shard));
  }
  return shards;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open " + path.string());
  }
  check(schema.class_count >= 2, "csv schema needs class_count >= 2");

  std::vector<double> feature_data;
  std::vector<int> labels;
  std::size_t dim = 0;
  std::size_t ncols = 0;
  std::vector<int> feature_cols;
  int label_col = schema.label_col;

  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (schema.has_header && !saw_header) {
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_fields(line);

    if (ncols == 0) {
      ncols = fields.size();
      if (label_col == -1) label_col = static_cast<int>(ncols) - 1;
      if (label_col < 0 || static_cast<std::size_t>(label_col) >= ncols) {
        load_fail(path, line_no, "label column out of range");
      }
      feature_cols = schema.feature_cols;
      if (feature_cols.empty()) {
        for (std::size_t c = 0; c < ncols; ++c) {
          if (static_cast<int>(c) != label_col) {
            feature_cols.push_back(static_cast<int>(c));
          }
        }
      }
      for (int c : feature_cols) {
        if (c < 0 || static_cast<std::size_t>(c) >= ncols || c == label_col) {
          load_fail(path, line_no, "feature column out of range");
        }
      }
      dim = feature_cols.size();
      if (dim == 0) load_fail(path, line_no, "no feature columns");
    } else if (fields.size() != ncols) {
      load_fail(path, line_no,
                "expected " + std::to_string(ncols) + " fields, got " +
                    std::to_string(fields.size()));
    }

    for (int c : feature_cols) {
      const std::string_view f = fields[static_cast<std::size_t>(c)];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(),
                                             value);
      if (ec != std::errc{} || ptr != f.data() + f.size() ||
          !std::isfinite(value)) {
        load_fail(path, line_no, "bad feature value '" + std::string(f) + "'");
      }
      feature_data.push_back(value);
    }
    const std::string_view lf = fields[static_cast<std::size_t>(label_col)];
    int label = 0;
    const auto [lptr, lec] =
        std::from_chars(lf.data(), lf.data() + lf.size(), label);
    if (lec != std::errc{} || lptr != lf.data() + lf.size()) {
      load_fail(path, line_no, "bad label '" + std::string(lf) + "'");
    }
    if (label < 0 || label >= schema.class_count) {
      load_fail(path, line_no,
                "label " + std::to_string(label) + " out of range [0, " +
                    std::to_string(schema.class_count) + ")");
    }
    labels.push_back(label);
  }
  if (labels.empty()) {
    throw LoadError(path.string() + ": no data rows");
  }

  Dataset out;
  out.class_count = schema.class_count;
  out.features.rows = labels.size();
  out.features.cols = dim;
  out.features.data = std::move(feature_data);
  out.labels = std::move(labels);
  return out;
}

void save_csv(const std::filesystem::path& path, const Dataset& data,
              bool with_header) {
  data.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw LoadError("cannot open " + path.string() + " for writing");
  }
  if (with_header) {
    for (std::size_t c = 0; c < data.dim(); ++c) {
      out << 'f' << c << ',';
    }
    out << "label\n";
  }
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.dim(); ++c) {
      out << format_double(data.features.at(r, c)) << ',';
    }
    out << data.labels[r] << '\n';
  }
  if (!out) {
    throw LoadError("short write to " + path.string());
  }
}

}  // namespace colearn
