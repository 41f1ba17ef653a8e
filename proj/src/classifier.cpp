#include "recode/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recode/plugin.hpp"
#include "recode/rng.hpp"
#include "recode/text_util.hpp"

namespace recode {

namespace {

struct Word {
  std::string text;
  std::size_t begin;
  std::size_t end;
};

std::vector<std::string> split_words(std::string_view phrase) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : phrase) {
    if (is_ascii_alnum(c)) {
      cur += ascii_lower(c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool phrase_gap(std::string_view gap) {
  return !gap.empty() && std::all_of(gap.begin(), gap.end(), [](char c) { return is_ascii_space(c) || c == '-'; });
}

}  // namespace

std::vector<std::string> tokenize_for_classifier(std::string_view text, std::span<const std::string> phrases) {
  std::vector<std::string> tokens;
  const auto cps = decode_utf8(text);

  // Latin word runs and CJK runs, in order, as segments.
  std::vector<Word> words;  // Latin only, for phrase lookup
  std::vector<std::pair<bool, std::size_t>> order;  // (is_latin, index into words or tokens)
  std::vector<std::string> cjk_tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t v = cps[i].value;
    if (v < 0x80 && is_ascii_alnum(static_cast<char>(v))) {
      std::size_t j = i;
      std::string w;
      while (j < cps.size() && cps[j].value < 0x80 && is_ascii_alnum(static_cast<char>(cps[j].value))) {
        w += ascii_lower(static_cast<char>(cps[j].value));
        ++j;
      }
      const std::size_t end = j < cps.size() ? cps[j].offset : text.size();
      words.push_back({std::move(w), cps[i].offset, end});
      order.emplace_back(true, words.size() - 1);
      i = j;
    } else if (is_cjk(v)) {
      std::size_t j = i;
      while (j < cps.size() && is_cjk(cps[j].value)) ++j;
      if (j - i == 1) {
        cjk_tokens.push_back(encode_utf8(v));
        order.emplace_back(false, cjk_tokens.size() - 1);
      }
      for (std::size_t k = i; k + 1 < j; ++k) {
        cjk_tokens.push_back(encode_utf8(cps[k].value) + encode_utf8(cps[k + 1].value));
        order.emplace_back(false, cjk_tokens.size() - 1);
      }
      i = j;
    } else {
      ++i;
    }
  }

  std::vector<std::vector<std::string>> phrase_words;
  for (const auto& p : phrases) {
    auto w = split_words(p);
    if (w.size() >= 2) phrase_words.push_back(std::move(w));
  }
  std::stable_sort(phrase_words.begin(), phrase_words.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::size_t k = 0;
  while (k < order.size()) {
    if (!order[k].first) {
      tokens.push_back(cjk_tokens[order[k].second]);
      ++k;
      continue;
    }
    std::size_t consumed = 1;
    std::string token = words[order[k].second].text;
    for (const auto& pw : phrase_words) {
      if (k + pw.size() > order.size()) continue;
      bool ok = true;
      for (std::size_t n = 0; n < pw.size() && ok; ++n) {
        const auto& [latin, idx] = order[k + n];
        ok = latin && words[idx].text == pw[n];
        if (ok && n > 0) {
          const auto& prev = words[order[k + n - 1].second];
          ok = phrase_gap(text.substr(prev.end, words[idx].begin - prev.end));
        }
      }
      if (!ok) continue;
      consumed = pw.size();
      token = pw.front();
      for (std::size_t n = 1; n < pw.size(); ++n) token += " " + pw[n];
      break;
    }
    tokens.push_back(std::move(token));
    k += consumed;
  }
  return tokens;
}

std::vector<std::string> lexicon_phrases(const LexiconSet& lexicons) {
  std::vector<std::string> out;
  for (const auto& cat : lexicons.category_names()) {
    for (const auto& e : lexicons.entries(cat)) {
      const bool latin = std::all_of(e.surface.begin(), e.surface.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
      if (latin && split_words(e.surface).size() >= 2) out.push_back(e.surface);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BaselineModel::BaselineModel(double smoothing, std::vector<std::string> phrases,
                             std::array<std::size_t, kBugTypeCount> class_counts,
                             std::array<std::map<std::string, std::size_t>, kBugTypeCount> token_counts)
    : smoothing_(smoothing), phrases_(std::move(phrases)), class_counts_(class_counts), token_counts_(std::move(token_counts)) {
  if (!(smoothing_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing must be positive");
  for (const auto& counts : token_counts_) {
    for (const auto& [tok, n] : counts) vocabulary_.emplace(tok, 0);
  }
  std::size_t idx = 0;
  for (auto& [tok, slot] : vocabulary_) slot = idx++;

  const double n_docs = static_cast<double>(std::accumulate(class_counts_.begin(), class_counts_.end(), std::size_t{0}));
  const double classes = static_cast<double>(kBugTypeCount);
  const double v = static_cast<double>(std::max<std::size_t>(vocabulary_.size(), 1));
  log_likelihood_.assign(vocabulary_.size(), {});
  for (std::size_t c = 0; c < kBugTypeCount; ++c) {
    log_prior_[c] = std::log((static_cast<double>(class_counts_[c]) + smoothing_) / (n_docs + classes * smoothing_));
    double total = 0.0;
    for (const auto& [tok, n] : token_counts_[c]) total += static_cast<double>(n);
    const double denom = total + smoothing_ * v;
    for (const auto& [tok, slot] : vocabulary_) {
      const auto it = token_counts_[c].find(tok);
      const double count = it == token_counts_[c].end() ? 0.0 : static_cast<double>(it->second);
      log_likelihood_[slot][c] = std::log((count + smoothing_) / denom);
    }
  }
}

std::array<double, kBugTypeCount> BaselineModel::log_scores(std::string_view text) const {
  auto scores = log_prior_;
  for (const auto& tok : tokenize_for_classifier(text, phrases_)) {
    const auto it = vocabulary_.find(tok);
    if (it == vocabulary_.end()) continue;
    for (std::size_t c = 0; c < kBugTypeCount; ++c) scores[c] += log_likelihood_[it->second][c];
  }
  return scores;
}

std::array<double, kBugTypeCount> BaselineModel::posterior(std::string_view text) const {
  auto s = log_scores(text);
  const double top = *std::max_element(s.begin(), s.end());
  double sum = 0.0;
  for (auto& x : s) {
    x = std::exp(x - top);
    sum += x;
  }
  for (auto& x : s) x /= sum;
  return s;
}

TopKPrediction BaselineModel::predict_top3(std::string_view text) const { return top3_from_scores(posterior(text)); }

nlohmann::json BaselineModel::to_json() const {
  nlohmann::json classes = nlohmann::json::object();
  for (std::size_t c = 0; c < kBugTypeCount; ++c) {
    classes[std::string(recode::to_string(kAllBugTypes[c]))] = {{"documents", class_counts_[c]},
                                                                {"tokens", token_counts_[c]}};
  }
  return {{"format", "recode-baseline"},
          {"version", kFormatVersion},
          {"smoothing", smoothing_},
          {"phrases", phrases_},
          {"classes", classes}};
}

BaselineModel BaselineModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "recode-baseline") throw Error(ErrorCode::InvalidArgument, "not a baseline model");
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::InvalidArgument, "unsupported model version " + j.at("version").dump());
    }
    std::array<std::size_t, kBugTypeCount> class_counts{};
    std::array<std::map<std::string, std::size_t>, kBugTypeCount> token_counts;
    for (const auto& [name, body] : j.at("classes").items()) {
      const auto type = parse_bug_type(name);
      if (!type) throw Error(ErrorCode::InvalidArgument, "unknown class " + name);
      class_counts[index_of(*type)] = body.at("documents").get<std::size_t>();
      token_counts[index_of(*type)] = body.at("tokens").get<std::map<std::string, std::size_t>>();
    }
    return BaselineModel(j.at("smoothing").get<double>(), j.value("phrases", std::vector<std::string>{}), class_counts,
                         std::move(token_counts));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed model: ") + e.what());
  }
}

BaselineModel train_baseline(std::span<const LabeledDescription> corpus, double smoothing, std::vector<std::string> phrases) {
  std::array<std::size_t, kBugTypeCount> class_counts{};
  std::array<std::map<std::string, std::size_t>, kBugTypeCount> token_counts;
  for (const auto& d : corpus) {
    const auto c = index_of(d.bug_type);
    ++class_counts[c];
    for (auto& tok : tokenize_for_classifier(d.text, phrases)) ++token_counts[c][std::move(tok)];
  }
  const auto present = std::count_if(class_counts.begin(), class_counts.end(), [](std::size_t n) { return n > 0; });
  if (present < 2) throw Error(ErrorCode::DegenerateCorpus, "training corpus needs at least two classes");
  return BaselineModel(smoothing, std::move(phrases), class_counts, std::move(token_counts));
}

void save_model(const BaselineModel& model, const std::filesystem::path& path) {
  write_text_file(path, model.to_json().dump(1) + "\n");
}

BaselineModel load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
  return BaselineModel::from_json(j);
}

TopKPrediction top3_from_scores(const std::array<double, kBugTypeCount>& scores) {
  std::array<std::size_t, kBugTypeCount> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::array<RankedType, TopKPrediction::kSize> top{};
  for (std::size_t i = 0; i < top.size(); ++i) {
    top[i] = {kAllBugTypes[order[i]], std::clamp(scores[order[i]], 0.0, 1.0)};
  }
  return TopKPrediction(top);
}

TopKPrediction prediction_from_plugin(const nlohmann::json& response) {
  try {
    const auto& top = response.at("top");
    if (!top.is_array() || top.size() < TopKPrediction::kSize) {
      throw Error(ErrorCode::PluginUnavailable, "plugin returned fewer than 3 entries");
    }
    std::array<RankedType, TopKPrediction::kSize> entries{};
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto name = top[i].at("type").get<std::string>();
      const auto type = parse_bug_type(name);
      if (!type) throw Error(ErrorCode::PluginUnavailable, "plugin returned unknown type " + name);
      entries[i] = {*type, top[i].at("confidence").get<double>()};
    }
    return TopKPrediction(entries);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::PluginUnavailable, std::string("malformed prediction: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PluginUnavailable) throw;
    throw Error(ErrorCode::PluginUnavailable, e.what());
  }
}

TopKPrediction PluginClassifier::predict(std::string_view text) {
  try {
    if (!process_ || !process_->alive()) throw Error(ErrorCode::PluginUnavailable, "classifier plugin is not running");
    return prediction_from_plugin(process_->request({{"op", "predict"}, {"text", std::string(text)}}));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PluginUnavailable || !fallback_) throw;
    return fallback_->predict(text);
  }
}

MulticlassMetrics evaluate_classifier(Classifier& classifier, std::span<const LabeledDescription> labeled, int k) {
  if (labeled.empty()) throw Error(ErrorCode::EmptySet, "no labeled descriptions");
  std::vector<BugType> truth;
  std::vector<TopKPrediction> predictions;
  truth.reserve(labeled.size());
  predictions.reserve(labeled.size());
  for (const auto& d : labeled) {
    truth.push_back(d.bug_type);
    predictions.push_back(classifier.predict(d.text));
  }
  return multiclass_metrics(truth, predictions, k);
}

CorpusSplit split_corpus(std::span<const LabeledDescription> corpus, std::uint64_t seed, double train, double validation) {
  CorpusSplit out;
  for (const auto type : kAllBugTypes) {
    std::vector<LabeledDescription> items;
    for (const auto& d : corpus) {
      if (d.bug_type == type) items.push_back(d);
    }
    Rng rng(derive_seed(seed, index_of(type)));
    rng.shuffle(items);
    const auto n = items.size();
    const auto n_train = static_cast<std::size_t>(std::llround(train * static_cast<double>(n)));
    const auto n_val = std::min(n - n_train, static_cast<std::size_t>(std::llround(validation * static_cast<double>(n))));
    for (std::size_t i = 0; i < n; ++i) {
      auto& dest = i < n_train ? out.train : (i < n_train + n_val ? out.validation : out.test);
      dest.push_back(std::move(items[i]));
    }
  }
  return out;
}

}  // namespace recode
