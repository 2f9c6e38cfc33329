#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "datasignal/kernel.hpp"

namespace datasignal::mnist {

inline constexpr int kSide = 28;
inline constexpr int kPixels = kSide * kSide;
inline constexpr int kDigits = 10;
inline constexpr std::uint32_t kImageMagic = 0x00000803;
inline constexpr std::uint32_t kLabelMagic = 0x00000801;

/// Augmentation variants, in the order augment() emits them.
enum class Variant : std::uint8_t {
  Original,
  RotatePlus10,
  RotateMinus10,
  ShiftRight,  // (+2, 0): pixel (r, c) -> (r, c + 2)
  ShiftLeft,   // (-2, 0)
  ShiftDown,   // (0, +2): pixel (r, c) -> (r + 2, c)
  ShiftUp,     // (0, -2)
};

const char* to_string(Variant v) noexcept;

struct Provenance {
  std::uint32_t source = 0;
  Variant variant = Variant::Original;
};

/// count x 28 x 28 bytes plus one label (0-9) per image.
struct MnistSet {
  std::vector<std::uint8_t> pixels;
  std::vector<std::uint8_t> labels;
  std::vector<Provenance> provenance;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const std::uint8_t> image(std::size_t i) const {
    return {pixels.data() + i * kPixels, static_cast<std::size_t>(kPixels)};
  }
  /// Throws DimensionMismatch/InvalidArgument when the invariants break.
  void validate() const;
  /// The first `count` images (or all, if fewer).
  MnistSet head(std::size_t count) const;
};

struct IdxImages {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;
  std::size_t count() const { return rows && cols ? pixels.size() / (rows * cols) : 0; }
};

/// Big-endian IDX parsing. The payload length must match the header exactly.
IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);
IdxImages load_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

/// Pairs an image file with a label file; requires 28 x 28 images and equal counts.
MnistSet load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels);

struct MnistFiles {
  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;
};

inline constexpr const char* kDefaultBaseUrl = "https://ossci-datasets.s3.amazonaws.com/mnist";

/// Cache directory: $DATASIGNAL_CACHE_DIR if set, else ~/.cache/datasignal/mnist.
std::filesystem::path default_cache_dir();

/// Ensures the four canonical files are in `cache_dir`. Files already present
/// with the canonical length are used as-is (no network). Otherwise a cached
/// `<name>.gz` is inflated, or `<base_url>/<name>.gz` (then `<base_url>/<name>`)
/// is downloaded. Wrong lengths raise ChecksumMismatch, transfer failures
/// NetworkError.
MnistFiles fetch_mnist(const std::filesystem::path& cache_dir,
                       const std::string& base_url = kDefaultBaseUrl);

/// Canonical byte length of each file (60,000 train / 10,000 test items).
std::uintmax_t expected_file_size(const std::string& name);

/// Bilinear rotation about the pixel center (13.5, 13.5) by `degrees`
/// (counter-clockwise as displayed), zero fill, rounded and clamped to [0,255].
std::array<std::uint8_t, kPixels> rotate(std::span<const std::uint8_t> image, double degrees);

/// Shift by dx columns and dy rows with zero fill.
std::array<std::uint8_t, kPixels> translate(std::span<const std::uint8_t> image, int dx, int dy);

/// Seven variants per image: original, +-10 degree rotations, +-2 pixel
/// shifts along each axis. Provenance records the source index and variant.
MnistSet augment(const MnistSet& set);

/// Unit-norm feature rows. The bytes are kept with the reciprocal norm of
/// each image: row(i) = pixels(i) / |pixels(i)|, which is exact up to one
/// rounding per entry and keeps 420,000 rows at one byte per pixel.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;

  std::size_t size() const noexcept { return labels_.size(); }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  const std::vector<Provenance>& provenance() const noexcept { return provenance_; }
  std::span<const std::uint8_t> raw(std::size_t i) const {
    return {pixels_.data() + i * kPixels, static_cast<std::size_t>(kPixels)};
  }
  double inverse_norm(std::size_t i) const { return inv_norm_[i]; }

  /// The normalized 784-vector of row i.
  Vector row(std::size_t i) const;
  /// Rows `indices` stacked as a dense matrix.
  Matrix rows(std::span<const std::size_t> indices) const;

  /// Squared Euclidean distance between normalized rows, from an exact
  /// integer dot product: max(0, 2 - 2 <a,b> / sqrt(|a|^2 |b|^2)).
  /// Identical rows give exactly 0.
  double squared_distance(std::size_t i, const FeatureMatrix& other, std::size_t j) const;

 private:
  friend FeatureMatrix normalize(MnistSet set);
  std::vector<std::uint8_t> pixels_;
  std::vector<double> inv_norm_;
  std::vector<double> sq_norm_;
  std::vector<std::uint8_t> labels_;
  std::vector<Provenance> provenance_;
};

/// x -> x / |x| for every image; all-zero images raise ZeroImage.
FeatureMatrix normalize(MnistSet set);

/// 50 candidates (k per digit) around one query.
struct LocalProblem {
  Vector query;
  Matrix candidates;
  std::vector<int> candidate_labels;
  std::vector<std::size_t> candidate_index;
  std::vector<double> squared_distances;
  /// Column d is the indicator of digit d.
  Matrix one_hot;
};

/// Exact per-class k nearest neighbours of row `query_index` of `queries`.
/// Ties go to the lower training index. Needs >= k members per digit.
LocalProblem knn_per_class(const FeatureMatrix& train, const FeatureMatrix& queries,
                           std::size_t query_index, int k = 5);

/// Same search for an arbitrary real query vector (distances in double).
LocalProblem knn_per_class(const FeatureMatrix& train, std::span<const double> query, int k = 5);

struct DigitPrediction {
  int digit = 0;
  std::array<double, kDigits> signals{};
  double residual = 0.0;
};

inline constexpr KernelConfig kMnistConfig{1.0, 1.5};

/// Fits the local 10-column problem and returns argmax_d u_d(query); ties go
/// to the lower digit.
DigitPrediction classify_local(const LocalProblem& problem, const KernelConfig& config = kMnistConfig);
DigitPrediction classify_digit(const FeatureMatrix& train, const FeatureMatrix& queries,
                               std::size_t query_index, const KernelConfig& config = kMnistConfig,
                               int k = 5);

/// Label of the single nearest training row (ties to the lower index).
int nn_baseline(const FeatureMatrix& train, const FeatureMatrix& queries, std::size_t query_index);

struct Evaluation {
  double accuracy = 0.0;
  std::size_t total = 0;
  /// confusion[true digit][predicted label]
  std::array<std::array<std::size_t, kDigits>, kDigits> confusion{};
};

Evaluation evaluate_run(std::span<const int> predictions, std::span<const int> truth);

struct RunOptions {
  KernelConfig config = kMnistConfig;
  int k = 5;
  std::size_t limit = 0;  // 0 = all test images
  unsigned threads = 1;
};

struct RunResult {
  std::vector<int> predictions;
  std::vector<int> nn_predictions;
  std::vector<int> truth;
  double max_residual = 0.0;
};

/// Classifies the first `limit` test rows. One distance scan per query feeds
/// both the local signal classifier and the 1-NN baseline. Results do not
/// depend on the thread count.
RunResult run(const FeatureMatrix& train, const FeatureMatrix& test, const RunOptions& options);

}  // namespace datasignal::mnist
