#include <doctest.h>

#include <algorithm>

#include "recode/rng.hpp"
#include "recode/synth.hpp"
#include "recode/text_analysis.hpp"
#include "recode/text_util.hpp"

using namespace recode;

namespace {

const LexiconSet& lex() { return default_lexicons(); }

PlantedMention as_planted(const WidgetMention& m) {
  return PlantedMention{m.color, m.position, m.text_literal, m.type_name};
}

}  // namespace

TEST_SUITE("text-decomposer") {
  TEST_CASE("quoted text, type and position form one mention") {
    const auto m = extract_mentions("Click on the 'telephone' button at the top-right corner", lex());
    REQUIRE(m.size() == 1);
    CHECK(m[0].text_literal == "telephone");
    CHECK(m[0].type_name == WidgetKind::Button);
    CHECK(m[0].position == Position::TopRight);
    CHECK_FALSE(m[0].color.has_value());
  }

  TEST_CASE("generic widget anchor and a coloured button") {
    const auto m = extract_mentions("the widget on the left of the green 'confirm' button", lex());
    REQUIRE(m.size() == 2);
    const auto button = std::find_if(m.begin(), m.end(), [](const auto& x) { return x.type_name == WidgetKind::Button; });
    REQUIRE(button != m.end());
    CHECK(button->color == Color::Green);
    CHECK(button->text_literal == "confirm");
    const auto generic = std::find_if(m.begin(), m.end(), [](const auto& x) { return !x.type_name; });
    REQUIRE(generic != m.end());
    CHECK(generic->position == Position::Left);
  }

  TEST_CASE("no anchors, no mentions") {
    CHECK(extract_mentions("everything is fine", lex()).empty());
    CHECK(extract_mentions("", lex()).empty());
  }

  TEST_CASE("unquoted capitalized name next to a type word") {
    const auto m = extract_mentions("The Submit button does nothing.", lex());
    REQUIRE(m.size() == 1);
    CHECK(m[0].text_literal == "Submit");
    CHECK(m[0].type_name == WidgetKind::Button);
  }

  TEST_CASE("features do not cross clause breaks") {
    const auto m = extract_mentions("It is red. The button fails", lex());
    REQUIRE(m.size() == 1);
    CHECK_FALSE(m[0].color.has_value());
  }

  TEST_CASE("every mention carries a feature") {
    Rng rng(12);
    const std::vector<std::string> words = {"the", "red", "'OK'", "button", "at", "top", "left", "image", ",", ".",
                                            "label", "Blue", "widget", "corner", "upper right", "not", "Save"};
    for (int i = 0; i < 300; ++i) {
      std::string s;
      for (int k = rng.range(0, 14); k > 0; --k) s += rng.pick(words) + " ";
      for (const auto& m : extract_mentions(s, lex())) CHECK(m.has_feature());
    }
  }

  TEST_CASE("polarity") {
    CHECK(polarity("I cannot manually refresh the contents", lex()) == Polarity::Negative);
    CHECK(polarity("the button works", lex()) == Polarity::Positive);
    CHECK(polarity("it is not impossible to click", lex()) == Polarity::Positive);
    CHECK(polarity("页面无法加载", lex()) == Polarity::Negative);
  }

  TEST_CASE("polarity ignores case and repeated whitespace") {
    const std::vector<std::string> samples = {"I cannot manually refresh", "it is not impossible to click",
                                              "the button works", "the page did not jump", "never  shows"};
    Rng rng(4);
    for (const auto& s : samples) {
      const auto base = polarity(s, lex());
      std::string v;
      for (const char c : s) {
        v += rng.chance(0.5) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
        if (c == ' ') v += std::string(rng.index(3), ' ');
      }
      CHECK(polarity(v, lex()) == base);
    }
  }

  TEST_CASE("prompt text") {
    CHECK(extract_prompt_text("The app indicates the 'SQL ERROR'.", lex()) == "SQL ERROR");
    CHECK_FALSE(extract_prompt_text("the app crashed suddenly", lex()).has_value());
    CHECK(extract_prompt_text("a dialog shows connection failed, then closes", lex()) == "connection failed");
    CHECK(extract_prompt_text("The page says: 404 not found.", lex()) == "404 not found");
  }

  TEST_CASE("prompt text is a substring of the normalized input") {
    const std::vector<std::string> samples = {"It shows  'Disk   full' now", "the page says\tnetwork error!",
                                              "A hint: try again", "it says", "Shows, nothing"};
    for (const auto& s : samples) {
      const auto p = extract_prompt_text(s, lex());
      if (p) CHECK(normalize_whitespace(s).find(*p) != std::string::npos);
    }
  }

  TEST_CASE("quoted spans") {
    const auto q = find_quoted_spans("press \"OK\" and the user's 'Next' and 「确定」");
    REQUIRE(q.size() == 3);
    CHECK(q[0].content.end - q[0].content.begin == 2);
  }

  TEST_CASE("generated descriptions yield exactly the planted mentions") {
    CorpusSpec spec;
    spec.n_reports = 400;
    spec.seed = 31;
    std::size_t with_mentions = 0;
    for (const auto& g : generate_reports(spec)) {
      std::vector<PlantedMention> got;
      for (const auto& m : extract_mentions(g.report.description, lex())) got.push_back(as_planted(m));
      auto want = g.mentions;
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      CHECK_MESSAGE(got == want, g.report.description);
      if (!want.empty()) ++with_mentions;
    }
    CHECK(with_mentions > 100);
  }
}
