#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pertfool/numeric.hpp"

namespace pertfool {

struct Dataset {
  std::vector<Vector> samples;
  std::vector<Label> labels;
  std::string name;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t dim() const noexcept { return samples.empty() ? 0 : samples.front().size(); }

  /// Checks equal lengths, a common dimension and labels < num_classes.
  void validate(std::size_t num_classes) const;

  /// The samples at `indices`, in order.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// The first `count` samples and the remainder.
  std::pair<Dataset, Dataset> split(std::size_t count) const;
};

struct BlobParams {
  std::size_t classes = 2;
  std::size_t dim = 2;
  std::size_t samples = 400;
  double sigma = 0.1;
  /// Distance between class means in units of sigma.
  double separation = 6.0;
  double center = 0.5;
};

/// Isotropic Gaussian clusters. Class means are center + R u_c with u_c
/// random orthonormal directions (when classes <= dim), so every pair of
/// means is exactly separation * sigma apart. Labels cycle 0,1,..,classes-1.
Dataset make_blobs(const BlobParams& params, std::uint64_t seed);

struct RingParams {
  std::size_t classes = 2;
  std::size_t dim = 2;
  std::size_t samples = 400;
  double sigma = 0.05;
  /// Radial gap between consecutive rings in units of sigma.
  double separation = 6.0;
  double center = 0.5;
};

/// Concentric noisy rings in the first two coordinates, one ring per class,
/// with isotropic noise on every coordinate.
Dataset make_rings(const RingParams& params, std::uint64_t seed);

/// IDX image + label files (big-endian; magics 0x00000803 / 0x00000801).
/// Pixels are scaled to [0, 1]. Throws ParseError naming the byte offset.
Dataset load_idx(const std::filesystem::path& images,
                 const std::filesystem::path& labels,
                 std::optional<std::size_t> limit = std::nullopt);

Dataset parse_idx(std::span<const unsigned char> images,
                  std::span<const unsigned char> labels,
                  std::optional<std::size_t> limit = std::nullopt);

/// Dataset CSV: header "label,x0,x1,...", one sample per row, 17
/// significant digits. Lines starting with '#' are comments.
void write_dataset_csv(std::ostream& os, const Dataset& data);
Dataset read_dataset_csv(std::istream& is, std::string name = "");

void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace pertfool
