#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>

#include <json.hpp>

#include "recode/bug_type.hpp"
#include "recode/report.hpp"

namespace recode {

/// Binary metrics with "consistent" as the positive class. Ratios with a
/// zero denominator are reported as 0.
struct BinaryMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

BinaryMetrics binary_metrics(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);
BinaryMetrics binary_metrics(std::span<const bool> truth, std::span<const bool> predicted);
nlohmann::json to_json(const BinaryMetrics& m);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

using ConfusionMatrix = std::array<std::array<std::size_t, kBugTypeCount>, kBugTypeCount>;

/// Accuracy counts top-k hits. Per-class scores use the effective label at
/// k (the truth on a hit, top-1 otherwise); the confusion matrix is always
/// top-1, rows = truth. Macro averages cover classes with support > 0.
struct MulticlassMetrics {
  int k = 1;
  std::size_t total = 0;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::map<BugType, ClassScores> per_class;
  ConfusionMatrix confusion{};
};

MulticlassMetrics multiclass_metrics(std::span<const BugType> truth, std::span<const TopKPrediction> predictions, int k);
/// Top-1 metrics straight from a confusion matrix.
MulticlassMetrics metrics_from_confusion(const ConfusionMatrix& confusion);
nlohmann::json to_json(const MulticlassMetrics& m);

}  // namespace recode
