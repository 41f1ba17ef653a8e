#include "recode/text_analysis.hpp"

#include <algorithm>
#include <array>

#include "recode/text_util.hpp"

namespace recode {

std::string_view to_string(Polarity p) { return p == Polarity::Negative ? "negative" : "positive"; }

namespace {

bool is_clause_break(char32_t cp) {
  switch (cp) {
    case U'.': case U',': case U'!': case U'?': case U';': case U'\n':
    case U'。': case U'，': case U'！': case U'？': case U'；': case U'、':
      return true;
    default:
      return false;
  }
}

bool is_sentence_break(char32_t cp) {
  switch (cp) {
    case U'.': case U'!': case U'?': case U'\n': case U'。': case U'！': case U'？':
      return true;
    default:
      return false;
  }
}

char32_t closer_for(char32_t open) {
  switch (open) {
    case U'\'': return U'\'';
    case U'"': return U'"';
    case U'‘': return U'’';
    case U'“': return U'”';
    case U'「': return U'」';
    case U'『': return U'』';
    default: return 0;
  }
}

enum class TokenKind { Word, Cjk, Quote };

struct Token {
  CharSpan span;
  int clause = 0;
  TokenKind kind = TokenKind::Word;
  std::size_t quote_index = 0;
};

std::vector<Token> tokenize(std::string_view text, const std::vector<QuotedSpan>& quotes) {
  std::vector<Token> tokens;
  const auto cps = decode_utf8(text);
  int clause = 0;
  std::size_t q = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    const auto& cp = cps[i];
    if (q < quotes.size() && cp.offset == quotes[q].outer.begin) {
      tokens.push_back({quotes[q].outer, clause, TokenKind::Quote, q});
      while (i < cps.size() && cps[i].offset < quotes[q].outer.end) ++i;
      ++q;
      continue;
    }
    if (is_clause_break(cp.value)) {
      ++clause;
      ++i;
      continue;
    }
    if (cp.value < 0x80 && is_ascii_alnum(static_cast<char>(cp.value))) {
      std::size_t j = i + 1;
      while (j < cps.size()) {
        const char32_t v = cps[j].value;
        const bool alnum = v < 0x80 && is_ascii_alnum(static_cast<char>(v));
        const bool joiner = (v == U'\'' || v == U'-') && j + 1 < cps.size() && cps[j + 1].value < 0x80 &&
                            is_ascii_alnum(static_cast<char>(cps[j + 1].value));
        if (!alnum && !joiner) break;
        ++j;
      }
      const std::size_t end = j < cps.size() ? cps[j].offset : text.size();
      tokens.push_back({{cp.offset, end}, clause, TokenKind::Word, 0});
      i = j;
      continue;
    }
    if (is_cjk(cp.value)) tokens.push_back({{cp.offset, cp.offset + cp.length}, clause, TokenKind::Cjk, 0});
    ++i;
  }
  return tokens;
}

struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Token range covering a byte span; false when the span hits no token.
bool token_range(const std::vector<Token>& tokens, CharSpan span, TokenRange& out) {
  bool found = false;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t].span.end <= span.begin || tokens[t].span.begin >= span.end) continue;
    if (!found) out.first = t;
    out.last = t;
    found = true;
  }
  return found;
}

bool overlaps_any(CharSpan s, const std::vector<QuotedSpan>& quotes) {
  return std::any_of(quotes.begin(), quotes.end(),
                     [&s](const QuotedSpan& q) { return s.begin < q.outer.end && q.outer.begin < s.end; });
}

struct Anchor {
  TokenRange tokens;
  int clause = 0;
  WidgetMention mention;
};

struct Feature {
  TokenRange tokens;
  int clause = 0;
  bool is_color = false;
  Color color{};
  Position position{};
};

constexpr std::array<std::string_view, 9> kDeterminers = {"the", "a", "an", "this", "that", "these", "those", "my", "its"};

}  // namespace

std::vector<QuotedSpan> find_quoted_spans(std::string_view text) {
  std::vector<QuotedSpan> out;
  const auto cps = decode_utf8(text);
  auto alnum_at = [&cps](std::size_t k) {
    return k < cps.size() && cps[k].value < 0x80 && is_ascii_alnum(static_cast<char>(cps[k].value));
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t open = cps[i].value;
    const char32_t close = closer_for(open);
    if (close == 0 || (open == U'\'' && i > 0 && alnum_at(i - 1))) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    for (; j < cps.size(); ++j) {
      if (cps[j].value != close) continue;
      if (open == U'\'' && alnum_at(j + 1)) continue;
      break;
    }
    if (j >= cps.size()) {
      ++i;
      continue;
    }
    const std::size_t content_begin = cps[i].offset + cps[i].length;
    const std::size_t content_end = cps[j].offset;
    if (trim(text.substr(content_begin, content_end - content_begin)).empty()) {
      i = j + 1;
      continue;
    }
    out.push_back({{cps[i].offset, cps[j].offset + cps[j].length}, {content_begin, content_end}});
    i = j + 1;
  }
  return out;
}

std::vector<WidgetMention> extract_mentions(std::string_view text, const LexiconSet& lexicons,
                                            const TextDecomposerConfig& cfg) {
  const auto quotes = find_quoted_spans(text);
  const auto tokens = tokenize(text, quotes);

  std::vector<Anchor> anchors;
  std::vector<bool> token_used(tokens.size(), false);

  // Type-word anchors.
  for (const auto& m : match_terms(text, lexicons, category::kType)) {
    const CharSpan span{m.begin, m.end};
    TokenRange r;
    if (overlaps_any(span, quotes) || !token_range(tokens, span, r)) continue;
    Anchor a;
    a.tokens = r;
    a.clause = tokens[r.first].clause;
    a.mention.head_span = span;
    a.mention.type_name = parse_widget_kind(m.canonical);
    anchors.push_back(std::move(a));
    for (std::size_t t = r.first; t <= r.last; ++t) token_used[t] = true;
  }

  // Quoted literals join an adjacent type word (following first), or stand alone.
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t].kind != TokenKind::Quote) continue;
    const auto& q = quotes[tokens[t].quote_index];
    const std::string literal = trim(text.substr(q.content.begin, q.content.end - q.content.begin));
    Anchor* host = nullptr;
    for (auto& a : anchors) {
      if (a.clause == tokens[t].clause && a.tokens.first == t + 1 && !a.mention.text_literal) host = &a;
    }
    if (host == nullptr) {
      for (auto& a : anchors) {
        if (a.clause == tokens[t].clause && a.tokens.last + 1 == t && !a.mention.text_literal) host = &a;
      }
    }
    token_used[t] = true;
    if (host != nullptr) {
      host->mention.text_literal = literal;
      host->mention.structures.push_back("ATT");
      host->tokens.first = std::min(host->tokens.first, t);
      host->tokens.last = std::max(host->tokens.last, t);
      host->mention.head_span = {std::min(host->mention.head_span.begin, q.outer.begin),
                                 std::max(host->mention.head_span.end, q.outer.end)};
      continue;
    }
    Anchor a;
    a.tokens = {t, t};
    a.clause = tokens[t].clause;
    a.mention.head_span = q.outer;
    a.mention.text_literal = literal;
    anchors.push_back(std::move(a));
  }
  std::sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) { return a.tokens.first < b.tokens.first; });

  // Locating-feature words.
  std::vector<Feature> features;
  for (const auto cat : {category::kColor, category::kPosition}) {
    for (const auto& m : match_terms(text, lexicons, cat)) {
      const CharSpan span{m.begin, m.end};
      TokenRange r;
      if (overlaps_any(span, quotes) || !token_range(tokens, span, r)) continue;
      Feature f;
      f.tokens = r;
      f.clause = tokens[r.first].clause;
      f.is_color = cat == category::kColor;
      if (f.is_color) {
        const auto c = parse_color(m.canonical);
        if (!c) continue;
        f.color = *c;
      } else {
        const auto p = parse_position(m.canonical);
        if (!p) continue;
        f.position = *p;
      }
      features.push_back(f);
      for (std::size_t t = r.first; t <= r.last; ++t) token_used[t] = true;
    }
  }
  std::sort(features.begin(), features.end(),
            [](const Feature& a, const Feature& b) { return a.tokens.first < b.tokens.first; });

  // Capitalized words next to a type word name the widget.
  for (auto& a : anchors) {
    if (a.mention.text_literal) continue;
    for (const std::size_t t : {a.tokens.first - 1, a.tokens.last + 1}) {
      if (t >= tokens.size() || (t == a.tokens.first - 1 && a.tokens.first == 0)) continue;
      const Token& tok = tokens[t];
      if (tok.kind != TokenKind::Word || tok.clause != a.clause || token_used[t]) continue;
      const std::string word(text.substr(tok.span.begin, tok.span.end - tok.span.begin));
      if (word.empty() || word.front() < 'A' || word.front() > 'Z') continue;
      const std::string lower = to_lower(word);
      if (std::find(kDeterminers.begin(), kDeterminers.end(), lower) != kDeterminers.end()) continue;
      a.mention.text_literal = word;
      a.mention.structures.push_back("ATT");
      a.mention.head_span = {std::min(a.mention.head_span.begin, tok.span.begin),
                             std::max(a.mention.head_span.end, tok.span.end)};
      token_used[t] = true;
      break;
    }
  }

  // Attach each feature to the nearest anchor in its clause; ties go to the
  // preceding anchor.
  const auto window = static_cast<std::size_t>(cfg.attach_window);
  for (const auto& f : features) {
    Anchor* best = nullptr;
    std::size_t best_d = window + 1;
    for (auto& a : anchors) {
      if (a.clause != f.clause) continue;
      const std::size_t d = a.tokens.first > f.tokens.last ? a.tokens.first - f.tokens.last
                                                           : (f.tokens.first > a.tokens.last ? f.tokens.first - a.tokens.last : 0);
      const bool occupied = f.is_color ? a.mention.color.has_value() : a.mention.position.has_value();
      if (occupied || d > window) continue;
      if (d < best_d) {
        best = &a;
        best_d = d;
      }
    }
    if (best == nullptr) continue;
    if (f.is_color) {
      best->mention.color = f.color;
      best->mention.structures.push_back("ATT");
    } else {
      best->mention.position = f.position;
      best->mention.structures.push_back("F");
    }
  }

  std::vector<WidgetMention> out;
  for (auto& a : anchors) {
    if (a.mention.has_feature()) out.push_back(std::move(a.mention));
  }
  return out;
}

Polarity polarity(std::string_view text, const LexiconSet& lexicons) {
  const auto doubles = match_terms(text, lexicons, category::kDoubleNegative);
  std::size_t unpaired = 0;
  for (const auto& m : match_terms(text, lexicons, category::kNegative)) {
    const bool inside = std::any_of(doubles.begin(), doubles.end(),
                                    [&m](const TermMatch& d) { return m.begin >= d.begin && m.end <= d.end; });
    if (!inside) ++unpaired;
  }
  return unpaired >= 1 ? Polarity::Negative : Polarity::Positive;
}

std::optional<std::string> extract_prompt_text(std::string_view raw, const LexiconSet& lexicons) {
  const std::string text = normalize_whitespace(raw);
  const auto quotes = find_quoted_spans(text);
  const auto cps = decode_utf8(text);
  for (const auto& m : match_terms(text, lexicons, category::kPrompt)) {
    // A quoted span later in the same sentence wins.
    std::size_t sentence_end = text.size();
    for (const auto& cp : cps) {
      if (cp.offset < m.end || !is_sentence_break(cp.value)) continue;
      const bool quoted = std::any_of(quotes.begin(), quotes.end(), [&cp](const QuotedSpan& q) {
        return cp.offset > q.outer.begin && cp.offset < q.outer.end;
      });
      if (quoted) continue;
      sentence_end = cp.offset;
      break;
    }
    for (const auto& q : quotes) {
      if (q.outer.begin >= m.end && q.outer.begin < sentence_end) {
        std::string inner = trim(std::string_view(text).substr(q.content.begin, q.content.end - q.content.begin));
        if (!inner.empty()) return inner;
      }
    }
    std::size_t clause_end = text.size();
    for (const auto& cp : cps) {
      if (cp.offset >= m.end && is_clause_break(cp.value)) {
        clause_end = cp.offset;
        break;
      }
    }
    std::string_view rest = std::string_view(text).substr(m.end, clause_end - m.end);
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == ':')) rest.remove_prefix(1);
    for (const auto det : {std::string_view("the "), std::string_view("a "), std::string_view("an "),
                           std::string_view("that ")}) {
      if (to_lower(rest.substr(0, det.size())) == det) {
        rest.remove_prefix(det.size());
        break;
      }
    }
    std::string remainder = trim(rest);
    if (!remainder.empty()) return remainder;
  }
  return std::nullopt;
}

TextAnalysis analyze_text(std::string_view text, const LexiconSet& lexicons, const TextDecomposerConfig& cfg) {
  TextAnalysis out;
  out.mentions = extract_mentions(text, lexicons, cfg);
  out.polarity = polarity(text, lexicons);
  out.prompt_text = extract_prompt_text(text, lexicons);
  return out;
}

}  // namespace recode
