#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "recode/bug_type.hpp"
#include "recode/corpus.hpp"
#include "recode/lexicon.hpp"
#include "recode/metrics.hpp"
#include "recode/report.hpp"

namespace recode {

class PluginProcess;

/// Case-folded Latin words split on non-alphanumerics, CJK runs as
/// overlapping character bigrams (a lone CJK character stays a unigram).
/// Multiword Latin phrases from `phrases` are kept whole when their words
/// appear consecutively.
std::vector<std::string> tokenize_for_classifier(std::string_view text, std::span<const std::string> phrases = {});

/// Multiword Latin surfaces from every lexicon category.
std::vector<std::string> lexicon_phrases(const LexiconSet& lexicons);

/// Multinomial naive Bayes over classifier tokens.
class BaselineModel {
 public:
  static constexpr int kFormatVersion = 1;

  BaselineModel(double smoothing, std::vector<std::string> phrases, std::array<std::size_t, kBugTypeCount> class_counts,
                std::array<std::map<std::string, std::size_t>, kBugTypeCount> token_counts);

  double smoothing() const { return smoothing_; }
  const std::vector<std::string>& phrases() const { return phrases_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  const std::array<double, kBugTypeCount>& log_priors() const { return log_prior_; }

  /// Log P(c) + sum of log P(token|c) over known tokens.
  std::array<double, kBugTypeCount> log_scores(std::string_view text) const;
  /// Softmax of log_scores over all ten classes.
  std::array<double, kBugTypeCount> posterior(std::string_view text) const;
  TopKPrediction predict_top3(std::string_view text) const;

  nlohmann::json to_json() const;
  static BaselineModel from_json(const nlohmann::json& j);

 private:
  double smoothing_;
  std::vector<std::string> phrases_;
  std::array<std::size_t, kBugTypeCount> class_counts_;
  std::array<std::map<std::string, std::size_t>, kBugTypeCount> token_counts_;
  std::map<std::string, std::size_t> vocabulary_;
  std::array<double, kBugTypeCount> log_prior_{};
  std::vector<std::array<double, kBugTypeCount>> log_likelihood_;  // by vocabulary index
};

BaselineModel train_baseline(std::span<const LabeledDescription> corpus, double smoothing = 1.0,
                             std::vector<std::string> phrases = {});
void save_model(const BaselineModel& model, const std::filesystem::path& path);
BaselineModel load_model(const std::filesystem::path& path);

/// Top-3 from ten class scores: descending, ties by declaration order.
TopKPrediction top3_from_scores(const std::array<double, kBugTypeCount>& scores);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual TopKPrediction predict(std::string_view text) = 0;
  virtual std::string name() const = 0;
};

class BaselineClassifier : public Classifier {
 public:
  explicit BaselineClassifier(std::shared_ptr<const BaselineModel> model) : model_(std::move(model)) {}
  TopKPrediction predict(std::string_view text) override { return model_->predict_top3(text); }
  std::string name() const override { return "baseline"; }
  const BaselineModel& model() const { return *model_; }

 private:
  std::shared_ptr<const BaselineModel> model_;
};

/// Classifier plugin client ("recode-classifier" protocol). When a fallback
/// is set, a dead plugin degrades to it instead of raising.
class PluginClassifier : public Classifier {
 public:
  explicit PluginClassifier(std::shared_ptr<PluginProcess> process, std::shared_ptr<Classifier> fallback = nullptr)
      : process_(std::move(process)), fallback_(std::move(fallback)) {}
  TopKPrediction predict(std::string_view text) override;
  std::string name() const override { return "plugin"; }

 private:
  std::shared_ptr<PluginProcess> process_;
  std::shared_ptr<Classifier> fallback_;
};

/// Parses a plugin "top" array; any schema fault raises PluginUnavailable.
TopKPrediction prediction_from_plugin(const nlohmann::json& response);

MulticlassMetrics evaluate_classifier(Classifier& classifier, std::span<const LabeledDescription> labeled, int k);

struct CorpusSplit {
  std::vector<LabeledDescription> train;
  std::vector<LabeledDescription> validation;
  std::vector<LabeledDescription> test;
};

/// Per-class shuffled split in the given proportions (default 6:2:2).
CorpusSplit split_corpus(std::span<const LabeledDescription> corpus, std::uint64_t seed, double train = 0.6,
                         double validation = 0.2);

}  // namespace recode
