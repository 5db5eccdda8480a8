#include "pertfool/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "pertfool/errors.hpp"
#include "pertfool/model_io.hpp"

namespace pertfool {

void Dataset::validate(std::size_t num_classes) const {
  if (samples.size() != labels.size()) {
    throw DimensionError("dataset: " + std::to_string(samples.size()) + " samples but " +
                         std::to_string(labels.size()) + " labels");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != dim()) {
      throw DimensionError("dataset: sample " + std::to_string(i) + " has dimension " +
                           std::to_string(samples[i].size()) + ", expected " +
                           std::to_string(dim()));
    }
    if (labels[i] >= num_classes) {
      throw DomainError("dataset: label " + std::to_string(labels[i]) + " of sample " +
                        std::to_string(i) + " is not below " +
                        std::to_string(num_classes));
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.name = name;
  for (std::size_t i : indices) {
    out.samples.push_back(samples.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

std::pair<Dataset, Dataset> Dataset::split(std::size_t count) const {
  if (count > size()) {
    throw PreconditionError("split: count " + std::to_string(count) + " exceeds " +
                            std::to_string(size()) + " samples");
  }
  Dataset head, tail;
  head.name = tail.name = name;
  head.samples.assign(samples.begin(), samples.begin() + count);
  head.labels.assign(labels.begin(), labels.begin() + count);
  tail.samples.assign(samples.begin() + count, samples.end());
  tail.labels.assign(labels.begin() + count, labels.end());
  return {std::move(head), std::move(tail)};
}

namespace {

std::vector<Vector> class_directions(std::size_t classes, std::size_t dim, Rng& rng) {
  std::vector<Vector> dirs;
  const NormExponent two(2.0);
  for (std::size_t c = 0; c < classes; ++c) {
    Vector u(dim);
    for (;;) {
      for (double& x : u) x = rng.normal();
      // Gram-Schmidt against earlier directions while room remains
      if (classes <= dim) {
        for (const Vector& prev : dirs) {
          const double proj = dot(u, prev);
          for (std::size_t i = 0; i < dim; ++i) u[i] -= proj * prev[i];
        }
      }
      const double n = pnorm(u, two);
      if (n > 1e-8) {
        for (double& x : u) x /= n;
        break;
      }
    }
    dirs.push_back(std::move(u));
  }
  return dirs;
}

}  // namespace

Dataset make_blobs(const BlobParams& p, std::uint64_t seed) {
  if (p.classes < 1 || p.dim < 1 || p.samples < 1) {
    throw PreconditionError("blobs: classes, dim and samples must be positive");
  }
  if (!(p.sigma > 0.0) || !(p.separation >= 0.0)) {
    throw PreconditionError("blobs: sigma must be > 0 and separation >= 0");
  }
  Rng rng(seed);
  const auto dirs = class_directions(p.classes, p.dim, rng);
  const double radius = p.separation * p.sigma / std::numbers::sqrt2;

  Dataset data;
  data.name = "blobs";
  for (std::size_t i = 0; i < p.samples; ++i) {
    const Label c = i % p.classes;
    Vector x(p.dim);
    for (std::size_t j = 0; j < p.dim; ++j) {
      x[j] = p.center + radius * dirs[c][j] + p.sigma * rng.normal();
    }
    data.samples.push_back(std::move(x));
    data.labels.push_back(c);
  }
  return data;
}

Dataset make_rings(const RingParams& p, std::uint64_t seed) {
  if (p.classes < 1 || p.dim < 2 || p.samples < 1) {
    throw PreconditionError("rings: need classes >= 1, dim >= 2 and samples >= 1");
  }
  if (!(p.sigma > 0.0) || !(p.separation > 0.0)) {
    throw PreconditionError("rings: sigma and separation must be > 0");
  }
  Rng rng(seed);
  Dataset data;
  data.name = "rings";
  for (std::size_t i = 0; i < p.samples; ++i) {
    const Label c = i % p.classes;
    const double r = static_cast<double>(c + 1) * p.separation * p.sigma;
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Vector x(p.dim);
    for (double& v : x) v = p.center + p.sigma * rng.normal();
    x[0] += r * std::cos(angle);
    x[1] += r * std::sin(angle);
    data.samples.push_back(std::move(x));
    data.labels.push_back(c);
  }
  return data;
}

// ---------------------------------------------------------------------------
// IDX

namespace {

std::uint32_t read_be32(std::span<const unsigned char> bytes, std::size_t offset,
                        const char* what) {
  if (offset + 4 > bytes.size()) {
    throw ParseError(std::string("idx ") + what + ": truncated header at offset " +
                     std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("E_IO", "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%08x", v);
  return buf;
}

}  // namespace

Dataset parse_idx(std::span<const unsigned char> images,
                  std::span<const unsigned char> labels,
                  std::optional<std::size_t> limit) {
  const std::uint32_t img_magic = read_be32(images, 0, "images");
  if (img_magic != 0x00000803u) {
    throw ParseError("idx images: bad magic " + hex(img_magic) +
                     " at offset 0 (expected 0x00000803)");
  }
  const std::size_t count = read_be32(images, 4, "images");
  const std::size_t rows = read_be32(images, 8, "images");
  const std::size_t cols = read_be32(images, 12, "images");

  const std::uint32_t lbl_magic = read_be32(labels, 0, "labels");
  if (lbl_magic != 0x00000801u) {
    throw ParseError("idx labels: bad magic " + hex(lbl_magic) +
                     " at offset 0 (expected 0x00000801)");
  }
  const std::size_t lcount = read_be32(labels, 4, "labels");
  if (lcount != count) {
    throw ParseError("idx labels: count " + std::to_string(lcount) + " at offset 4 differs from " +
                     std::to_string(count) + " images");
  }

  const std::size_t pixels = rows * cols;
  const std::size_t n = limit ? std::min(*limit, count) : count;
  if (16 + n * pixels > images.size()) {
    throw ParseError("idx images: truncated pixel data at offset " +
                     std::to_string(images.size()) + " (need " +
                     std::to_string(16 + n * pixels) + " bytes)");
  }
  if (8 + n > labels.size()) {
    throw ParseError("idx labels: truncated label data at offset " +
                     std::to_string(labels.size()));
  }

  Dataset data;
  data.name = "mnist-idx";
  data.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector x(pixels);
    const std::size_t base = 16 + i * pixels;
    for (std::size_t j = 0; j < pixels; ++j) x[j] = images[base + j] / 255.0;
    data.samples.push_back(std::move(x));
    data.labels.push_back(labels[8 + i]);
  }
  return data;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::optional<std::size_t> limit) {
  const auto img = read_file(images);
  const auto lbl = read_file(labels);
  return parse_idx(img, lbl, limit);
}

// ---------------------------------------------------------------------------
// CSV

void write_dataset_csv(std::ostream& os, const Dataset& data) {
  os << "label";
  for (std::size_t j = 0; j < data.dim(); ++j) os << ",x" << j;
  os << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    os << data.labels[i];
    for (double v : data.samples[i]) os << ',' << format_double(v);
    os << '\n';
  }
}

Dataset read_dataset_csv(std::istream& is, std::string name) {
  Dataset data;
  data.name = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t columns = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line.rfind("label", 0) != 0) {
        throw ParseError("dataset csv: line " + std::to_string(line_no) +
                         ": expected header starting with 'label'");
      }
      columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
      header_seen = true;
      continue;
    }
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      const std::string cell = line.substr(pos, comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw ParseError("dataset csv: line " + std::to_string(line_no) + ", column " +
                         std::to_string(values.size() + 1) + ": bad number '" + cell + "'");
      }
      values.push_back(v);
      pos = comma + 1;
    }
    if (values.size() != columns) {
      throw ParseError("dataset csv: line " + std::to_string(line_no) + " has " +
                       std::to_string(values.size()) + " columns, header has " +
                       std::to_string(columns));
    }
    if (values[0] < 0 || values[0] != std::floor(values[0])) {
      throw ParseError("dataset csv: line " + std::to_string(line_no) +
                       ": label must be a non-negative integer");
    }
    data.labels.push_back(static_cast<Label>(values[0]));
    data.samples.emplace_back(values.begin() + 1, values.end());
  }
  if (!header_seen) throw ParseError("dataset csv: missing header");
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("E_IO", "cannot open " + path.string() + " for writing");
  write_dataset_csv(os, data);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("E_IO", "cannot open dataset " + path.string());
  return read_dataset_csv(is, path.stem().string());
}

}  // namespace pertfool
