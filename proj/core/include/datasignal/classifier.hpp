#pragma once

#include <optional>
#include <string>
#include <vector>

#include "datasignal/kernel.hpp"

namespace datasignal {

/// N one-vs-rest signals over one shared center set. Column l of the
/// coefficient matrix is the signal of class_labels()[l].
class ClassifierModel {
 public:
  ClassifierModel(std::vector<std::string> class_labels, Signal signal);

  const std::vector<std::string>& class_labels() const noexcept { return labels_; }
  const Signal& signal() const noexcept { return signal_; }
  const KernelConfig& config() const noexcept { return signal_.config(); }
  int classes() const noexcept { return static_cast<int>(labels_.size()); }
  Eigen::Index dim() const noexcept { return signal_.dim(); }

  /// Index of a label in class_labels(), or -1.
  int index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  Signal signal_;
};

/// Fits all class signals against one factorization of (alpha I + M).
/// Labels are mapped to indices in first-appearance order unless
/// `label_order` is supplied, in which case it must list every label.
ClassifierModel fit_classifier(const Matrix& points, const std::vector<std::string>& labels,
                               const KernelConfig& config,
                               const std::optional<std::vector<std::string>>& label_order = {});

/// q x N matrix of per-class signal values.
Matrix signal_values(const ClassifierModel& model, const Matrix& queries);

/// Row-wise argmax of signal values; exact ties go to the lowest index.
std::vector<int> argmax_rows(const Matrix& values);

/// Index of the strongest class signal per query.
std::vector<int> decision_boundary_indicator(const ClassifierModel& model, const Matrix& queries);

/// Label of the strongest class signal per query.
std::vector<std::string> predict(const ClassifierModel& model, const Matrix& queries);

}  // namespace datasignal
