#include "datasignal/mnist.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <thread>

#include "datasignal/classifier.hpp"

namespace datasignal::mnist {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void check_payload(std::size_t have, std::size_t want, const char* what) {
  if (have < want) {
    throw Error(ErrorCode::TruncatedFile, std::string(what) + " payload has " + std::to_string(have) +
                                              " bytes, header promises " + std::to_string(want));
  }
  if (have > want) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " payload has " +
                                                  std::to_string(have - want) + " trailing bytes");
  }
}

std::int32_t dot_u8(const std::uint8_t* a, const std::uint8_t* b) {
  std::int32_t sum = 0;
  for (int k = 0; k < kPixels; ++k) sum += std::int32_t{a[k]} * std::int32_t{b[k]};
  return sum;
}

// Per-class top-k by (distance, index); rows arrive in increasing index order.
class ClassTopK {
 public:
  explicit ClassTopK(int k) : k_(static_cast<std::size_t>(k)) {
    for (auto& b : best_) b.reserve(k_ + 1);
  }

  void offer(int label, double dist, std::size_t index) {
    auto& b = best_[static_cast<std::size_t>(label)];
    if (b.size() == k_ && !(dist < b.back().first)) return;
    auto pos = std::upper_bound(b.begin(), b.end(), dist,
                                [](double d, const std::pair<double, std::size_t>& e) { return d < e.first; });
    b.insert(pos, {dist, index});
    if (b.size() > k_) b.pop_back();
  }

  const std::vector<std::pair<double, std::size_t>>& of(int label) const {
    return best_[static_cast<std::size_t>(label)];
  }

 private:
  std::size_t k_;
  std::array<std::vector<std::pair<double, std::size_t>>, kDigits> best_;
};

LocalProblem assemble(const FeatureMatrix& train, const ClassTopK& top, int k, Vector query) {
  LocalProblem p;
  p.query = std::move(query);
  for (int d = 0; d < kDigits; ++d) {
    const auto& b = top.of(d);
    if (static_cast<int>(b.size()) < k) {
      throw Error(ErrorCode::InsufficientClassMembers,
                  "digit " + std::to_string(d) + " has fewer than " + std::to_string(k) + " training rows");
    }
    for (const auto& [dist, idx] : b) {
      p.candidate_index.push_back(idx);
      p.candidate_labels.push_back(d);
      p.squared_distances.push_back(dist);
    }
  }
  p.candidates = train.rows(p.candidate_index);
  p.one_hot = one_hot(p.candidate_labels, kDigits);
  return p;
}

void check_k(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
}

}  // namespace

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Original: return "original";
    case Variant::RotatePlus10: return "rot+10";
    case Variant::RotateMinus10: return "rot-10";
    case Variant::ShiftRight: return "shift(+2,0)";
    case Variant::ShiftLeft: return "shift(-2,0)";
    case Variant::ShiftDown: return "shift(0,+2)";
    case Variant::ShiftUp: return "shift(0,-2)";
  }
  return "?";
}

void MnistSet::validate() const {
  if (pixels.size() != labels.size() * kPixels) {
    throw Error(ErrorCode::DimensionMismatch, "image and label counts differ");
  }
  if (!provenance.empty() && provenance.size() != labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "provenance count differs from label count");
  }
  for (auto l : labels) {
    if (l > 9) throw Error(ErrorCode::InvalidArgument, "label out of range: " + std::to_string(l));
  }
}

MnistSet MnistSet::head(std::size_t count) const {
  count = std::min(count, size());
  MnistSet out;
  out.pixels.assign(pixels.begin(), pixels.begin() + static_cast<std::ptrdiff_t>(count * kPixels));
  out.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(count));
  if (!provenance.empty()) {
    out.provenance.assign(provenance.begin(), provenance.begin() + static_cast<std::ptrdiff_t>(count));
  }
  return out;
}

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw Error(ErrorCode::TruncatedFile, "IDX image header is 16 bytes");
  if (read_be32(bytes, 0) != kImageMagic) throw Error(ErrorCode::BadMagic, "not an IDX image file");
  const std::size_t count = read_be32(bytes, 4);
  IdxImages out;
  out.rows = read_be32(bytes, 8);
  out.cols = read_be32(bytes, 12);
  check_payload(bytes.size() - 16, count * out.rows * out.cols, "image");
  out.pixels.assign(bytes.begin() + 16, bytes.end());
  return out;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw Error(ErrorCode::TruncatedFile, "IDX label header is 8 bytes");
  if (read_be32(bytes, 0) != kLabelMagic) throw Error(ErrorCode::BadMagic, "not an IDX label file");
  const std::size_t count = read_be32(bytes, 4);
  check_payload(bytes.size() - 8, count, "label");
  return {bytes.begin() + 8, bytes.end()};
}

IdxImages load_idx_images(const std::filesystem::path& path) { return parse_idx_images(read_file(path)); }

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
  return parse_idx_labels(read_file(path));
}

MnistSet load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels) {
  IdxImages img = load_idx_images(images);
  if (img.rows != kSide || img.cols != kSide) {
    throw Error(ErrorCode::DimensionMismatch, "expected 28 x 28 images");
  }
  MnistSet set;
  set.labels = load_idx_labels(labels);
  if (img.count() != set.labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(img.count()) + " images but " +
                                                  std::to_string(set.labels.size()) + " labels");
  }
  set.pixels = std::move(img.pixels);
  set.validate();
  return set;
}

std::array<std::uint8_t, kPixels> rotate(std::span<const std::uint8_t> image, double degrees) {
  constexpr double center = (kSide - 1) / 2.0;
  const double t = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(t);
  const double s = std::sin(t);
  auto pixel = [&](int r, int col) -> double {
    if (r < 0 || r >= kSide || col < 0 || col >= kSide) return 0.0;
    return image[static_cast<std::size_t>(r * kSide + col)];
  };
  std::array<std::uint8_t, kPixels> out{};
  for (int r = 0; r < kSide; ++r) {
    for (int col = 0; col < kSide; ++col) {
      // Inverse map with y pointing up: source = R(-t) * destination.
      const double x = col - center;
      const double y = center - r;
      const double sx = c * x + s * y;
      const double sy = -s * x + c * y;
      const double src_r = center - sy;
      const double src_c = center + sx;
      const int r0 = static_cast<int>(std::floor(src_r));
      const int c0 = static_cast<int>(std::floor(src_c));
      const double fr = src_r - r0;
      const double fc = src_c - c0;
      const double v = (1 - fr) * ((1 - fc) * pixel(r0, c0) + fc * pixel(r0, c0 + 1)) +
                       fr * ((1 - fc) * pixel(r0 + 1, c0) + fc * pixel(r0 + 1, c0 + 1));
      out[static_cast<std::size_t>(r * kSide + col)] =
          static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

std::array<std::uint8_t, kPixels> translate(std::span<const std::uint8_t> image, int dx, int dy) {
  std::array<std::uint8_t, kPixels> out{};
  for (int r = 0; r < kSide; ++r) {
    for (int col = 0; col < kSide; ++col) {
      const int sr = r - dy;
      const int sc = col - dx;
      if (sr >= 0 && sr < kSide && sc >= 0 && sc < kSide) {
        out[static_cast<std::size_t>(r * kSide + col)] = image[static_cast<std::size_t>(sr * kSide + sc)];
      }
    }
  }
  return out;
}

MnistSet augment(const MnistSet& set) {
  set.validate();
  MnistSet out;
  out.pixels.reserve(set.pixels.size() * 7);
  out.labels.reserve(set.size() * 7);
  out.provenance.reserve(set.size() * 7);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto img = set.image(i);
    const std::uint32_t source = set.provenance.empty() ? static_cast<std::uint32_t>(i) : set.provenance[i].source;
    auto emit = [&](std::span<const std::uint8_t> pixels, Variant v) {
      out.pixels.insert(out.pixels.end(), pixels.begin(), pixels.end());
      out.labels.push_back(set.labels[i]);
      out.provenance.push_back({source, v});
    };
    emit(img, Variant::Original);
    emit(rotate(img, 10.0), Variant::RotatePlus10);
    emit(rotate(img, -10.0), Variant::RotateMinus10);
    emit(translate(img, 2, 0), Variant::ShiftRight);
    emit(translate(img, -2, 0), Variant::ShiftLeft);
    emit(translate(img, 0, 2), Variant::ShiftDown);
    emit(translate(img, 0, -2), Variant::ShiftUp);
  }
  return out;
}

Vector FeatureMatrix::row(std::size_t i) const {
  Vector v(kPixels);
  const auto px = raw(i);
  for (int k = 0; k < kPixels; ++k) v[k] = px[static_cast<std::size_t>(k)] * inv_norm_[i];
  return v;
}

Matrix FeatureMatrix::rows(std::span<const std::size_t> indices) const {
  Matrix m(static_cast<Eigen::Index>(indices.size()), kPixels);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    m.row(static_cast<Eigen::Index>(r)) = row(indices[r]).transpose();
  }
  return m;
}

double FeatureMatrix::squared_distance(std::size_t i, const FeatureMatrix& other, std::size_t j) const {
  const double dot = dot_u8(raw(i).data(), other.raw(j).data());
  return std::max(0.0, 2.0 - 2.0 * dot / std::sqrt(sq_norm_[i] * other.sq_norm_[j]));
}

FeatureMatrix normalize(MnistSet set) {
  set.validate();
  FeatureMatrix f;
  f.inv_norm_.resize(set.size());
  f.sq_norm_.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto img = set.image(i);
    const std::int64_t sq = dot_u8(img.data(), img.data());
    if (sq == 0) throw Error(ErrorCode::ZeroImage, "image " + std::to_string(i) + " is all zero");
    f.sq_norm_[i] = static_cast<double>(sq);
    f.inv_norm_[i] = 1.0 / std::sqrt(f.sq_norm_[i]);
  }
  f.pixels_ = std::move(set.pixels);
  f.labels_ = std::move(set.labels);
  f.provenance_ = std::move(set.provenance);
  return f;
}

LocalProblem knn_per_class(const FeatureMatrix& train, const FeatureMatrix& queries,
                           std::size_t query_index, int k) {
  check_k(k);
  ClassTopK top(k);
  for (std::size_t i = 0; i < train.size(); ++i) {
    top.offer(train.label(i), train.squared_distance(i, queries, query_index), i);
  }
  return assemble(train, top, k, queries.row(query_index));
}

LocalProblem knn_per_class(const FeatureMatrix& train, std::span<const double> query, int k) {
  check_k(k);
  if (query.size() != static_cast<std::size_t>(kPixels)) {
    throw Error(ErrorCode::DimensionMismatch, "query must have 784 entries");
  }
  ClassTopK top(k);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto px = train.raw(i);
    const double inv = train.inverse_norm(i);
    double sq = 0.0;
    for (int p = 0; p < kPixels; ++p) {
      const double diff = px[static_cast<std::size_t>(p)] * inv - query[static_cast<std::size_t>(p)];
      sq += diff * diff;
    }
    top.offer(train.label(i), sq, i);
  }
  return assemble(train, top, k, Eigen::Map<const Vector>(query.data(), kPixels));
}

DigitPrediction classify_local(const LocalProblem& problem, const KernelConfig& config) {
  const Signal signal = fit_signal(LabeledPointSet(problem.candidates, problem.one_hot), config);
  const Matrix u = evaluate_signal(signal, problem.query.transpose());
  DigitPrediction out;
  for (int d = 0; d < kDigits; ++d) out.signals[static_cast<std::size_t>(d)] = u(0, d);
  out.digit = argmax_rows(u).front();
  out.residual = signal.residual();
  return out;
}

DigitPrediction classify_digit(const FeatureMatrix& train, const FeatureMatrix& queries,
                               std::size_t query_index, const KernelConfig& config, int k) {
  return classify_local(knn_per_class(train, queries, query_index, k), config);
}

int nn_baseline(const FeatureMatrix& train, const FeatureMatrix& queries, std::size_t query_index) {
  if (train.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty training set");
  std::size_t best = 0;
  double best_dist = train.squared_distance(0, queries, query_index);
  for (std::size_t i = 1; i < train.size(); ++i) {
    const double d = train.squared_distance(i, queries, query_index);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return train.label(best);
}

Evaluation evaluate_run(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                               std::to_string(truth.size()) + " labels");
  }
  Evaluation e;
  e.total = truth.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predictions[i];
    if (t < 0 || t >= kDigits || p < 0 || p >= kDigits) {
      throw Error(ErrorCode::InvalidArgument, "digit out of range at item " + std::to_string(i));
    }
    ++e.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    if (t == p) ++correct;
  }
  e.accuracy = e.total ? static_cast<double>(correct) / static_cast<double>(e.total) : 0.0;
  return e;
}

RunResult run(const FeatureMatrix& train, const FeatureMatrix& test, const RunOptions& options) {
  check_k(options.k);
  const std::size_t count = options.limit ? std::min(options.limit, test.size()) : test.size();
  RunResult result;
  result.predictions.assign(count, 0);
  result.nn_predictions.assign(count, 0);
  result.truth.reserve(count);
  for (std::size_t q = 0; q < count; ++q) result.truth.push_back(test.label(q));
  std::vector<double> residuals(count, 0.0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (std::size_t q = next++; q < count && !failed; q = next++) {
        ClassTopK top(options.k);
        std::size_t nearest = 0;
        double nearest_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < train.size(); ++i) {
          const double d = train.squared_distance(i, test, q);
          top.offer(train.label(i), d, i);
          if (d < nearest_dist) {
            nearest_dist = d;
            nearest = i;
          }
        }
        const DigitPrediction pred = classify_local(assemble(train, top, options.k, test.row(q)), options.config);
        result.predictions[q] = pred.digit;
        result.nn_predictions[q] = train.label(nearest);
        residuals[q] = pred.residual;
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  result.max_residual = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  return result;
}

}  // namespace datasignal::mnist
