#include "datasignal/classifier.hpp"

#include <algorithm>
#include <unordered_map>

namespace datasignal {

ClassifierModel::ClassifierModel(std::vector<std::string> class_labels, Signal signal)
    : labels_(std::move(class_labels)), signal_(std::move(signal)) {
  if (labels_.size() < 2) {
    throw Error(ErrorCode::SingleClass, "a classifier needs at least two classes");
  }
  if (static_cast<Eigen::Index>(labels_.size()) != signal_.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "one coefficient column per class is required");
  }
  std::vector<std::string> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "class labels must be distinct");
  }
}

int ClassifierModel::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

ClassifierModel fit_classifier(const Matrix& points, const std::vector<std::string>& labels,
                               const KernelConfig& config,
                               const std::optional<std::vector<std::string>>& label_order) {
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "one label per point is required");
  }
  std::vector<std::string> classes;
  std::unordered_map<std::string, int> index;
  if (label_order) {
    classes = *label_order;
    for (std::size_t l = 0; l < classes.size(); ++l) {
      if (!index.emplace(classes[l], static_cast<int>(l)).second) {
        throw Error(ErrorCode::InvalidArgument, "duplicate label in label order: " + classes[l]);
      }
    }
  } else {
    for (const auto& label : labels) {
      if (index.emplace(label, static_cast<int>(classes.size())).second) classes.push_back(label);
    }
  }

  std::vector<int> class_index;
  class_index.reserve(labels.size());
  std::vector<int> counts(classes.size(), 0);
  for (const auto& label : labels) {
    auto it = index.find(label);
    if (it == index.end()) throw Error(ErrorCode::InvalidArgument, "label not in label order: " + label);
    class_index.push_back(it->second);
    ++counts[static_cast<std::size_t>(it->second)];
  }
  const auto present = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; });
  if (present < 2) throw Error(ErrorCode::SingleClass, "fewer than two distinct labels");
  if (present != static_cast<long>(classes.size())) {
    throw Error(ErrorCode::InvalidArgument, "every class in the label order needs a member");
  }

  LabeledPointSet data(points, one_hot(class_index, static_cast<int>(classes.size())));
  return ClassifierModel(std::move(classes), fit_signal(data, config));
}

Matrix signal_values(const ClassifierModel& model, const Matrix& queries) {
  return evaluate_signal(model.signal(), queries);
}

std::vector<int> argmax_rows(const Matrix& values) {
  std::vector<int> out(static_cast<std::size_t>(values.rows()), 0);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < values.cols(); ++c) {
      if (values(i, c) > values(i, best)) best = static_cast<int>(c);
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

std::vector<int> decision_boundary_indicator(const ClassifierModel& model, const Matrix& queries) {
  return argmax_rows(signal_values(model, queries));
}

std::vector<std::string> predict(const ClassifierModel& model, const Matrix& queries) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (int idx : decision_boundary_indicator(model, queries)) {
    out.push_back(model.class_labels()[static_cast<std::size_t>(idx)]);
  }
  return out;
}

}  // namespace datasignal
