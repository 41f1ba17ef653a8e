#include <doctest.h>

#include "oracles.hpp"
#include "recode/detector.hpp"
#include "recode/plugin.hpp"
#include "recode/rng.hpp"
#include "recode/synth.hpp"
#include "support.hpp"

using namespace recode;

namespace {

const LexiconSet& lex() { return default_lexicons(); }

constexpr Rgb kWhite{255, 255, 255};

class FixedClassifier : public Classifier {
 public:
  explicit FixedClassifier(TopKPrediction p) : p_(p) {}
  TopKPrediction predict(std::string_view) override { return p_; }
  std::string name() const override { return "fixed"; }

 private:
  TopKPrediction p_;
};

TopKPrediction top(BugType a, BugType b, BugType c, double ca = 0.7, double cb = 0.2, double cc = 0.1) {
  return TopKPrediction({RankedType{a, ca}, RankedType{b, cb}, RankedType{c, cc}});
}

ScreenDecomposition screen_with_texts(std::vector<TextRegion> texts) {
  ScreenDecomposition s;
  s.texts = std::move(texts);
  return s;
}

TextAnalysis analysis_of(std::string_view text) { return analyze_text(text, lex()); }

WidgetRegion widget(Box b, std::optional<std::string> text, std::optional<WidgetKind> kind, Color c, Position p) {
  WidgetRegion w;
  w.bbox = b;
  w.text = std::move(text);
  w.kind = kind;
  w.color = c;
  w.position = p;
  return w;
}

WidgetMention mention(std::optional<Color> c, std::optional<Position> p, std::optional<std::string> t,
                      std::optional<WidgetKind> k) {
  WidgetMention m;
  m.color = c;
  m.position = p;
  m.text_literal = std::move(t);
  m.type_name = k;
  return m;
}

// Dimmed page with a centred white dialog carrying `message`.
TestReport dialog_report(const std::string& message, const std::string& description) {
  TestReport r;
  r.id = "fixture";
  r.description = description;
  r.screenshot = RgbImage(240, 400, {40, 40, 40});
  const Box dialog{36, 144, 168, 112};
  r.screenshot.fill_rect(dialog, kWhite);
  const Box ink = draw_text(r.screenshot, 60, 180, message, {0, 0, 0});
  r.ocr_annotations = std::vector<TextRegion>{{ink, message}};
  return r;
}

TestReport plain_report(const std::string& description) {
  TestReport r;
  r.id = "plain";
  r.description = description;
  r.screenshot = RgbImage(240, 400, kWhite);
  r.screenshot.fill_rect({0, 0, 240, 40}, {33, 150, 243});
  for (int y : {122, 200, 278}) r.screenshot.fill_rect({0, y, 240, 1}, {200, 200, 200});
  r.screenshot.fill_rect({20, 70, 60, 24}, reference_rgb(Color::Red));
  const Box ink = draw_text(r.screenshot, 28, 78, "Login", kWhite);
  r.ocr_annotations = std::vector<TextRegion>{{ink, "Login"}};
  return r;
}

}  // namespace

TEST_SUITE("detector") {
  TEST_CASE("general strategy scores") {
    const std::vector<WidgetRegion> ws = {
        widget({10, 10, 50, 20}, "Login", WidgetKind::Button, Color::Red, Position::TopLeft),
        widget({100, 200, 40, 10}, "Help", WidgetKind::TextView, Color::Black, Position::Center)};
    const StrategyWeights w;
    const auto all = score_mention(mention(Color::Red, Position::TopLeft, "login", WidgetKind::Button), ws, {}, w);
    CHECK(all.score == 1.0);
    CHECK(all.widget == 0u);
    CHECK(score_mention(mention(std::nullopt, std::nullopt, "Login", std::nullopt), ws, {}, w).score == 0.45);
    // Features are matched jointly on one widget, never across widgets.
    const auto split = score_mention(mention(Color::Red, Position::Center, std::nullopt, std::nullopt), ws, {}, w);
    CHECK(split.score == doctest::Approx(0.20));
    ScreenDecomposition s;
    s.widgets = ws;
    CHECK(general_strategy({}, s, w) == 0.0);
    const std::vector<WidgetMention> two = {mention(std::nullopt, std::nullopt, "Login", std::nullopt),
                                            mention(std::nullopt, std::nullopt, "Nope", std::nullopt)};
    CHECK(general_strategy(two, s, w) == doctest::Approx(0.225));
  }

  TEST_CASE("text feature can match through contained OCR text") {
    const std::vector<WidgetRegion> ws = {widget({10, 10, 80, 30}, std::nullopt, std::nullopt, Color::Blue, Position::TopLeft)};
    const std::vector<TextRegion> texts = {{{20, 20, 30, 8}, "Confirm order"}};
    CHECK(score_mention(mention(std::nullopt, std::nullopt, "confirm", std::nullopt), ws, texts, {}).score == 0.45);
  }

  TEST_CASE("crash strategy") {
    ScreenDecomposition s = screen_with_texts({{{60, 150, 60, 8}, "The app stop running"}});
    s.popup = widget({40, 120, 160, 100}, std::nullopt, std::nullopt, Color::White, Position::Center);
    CHECK(crash_strategy(s, lex()) == 1.0);
    CHECK(crash_strategy(ScreenDecomposition{}, lex()) == 0.0);
    ScreenDecomposition save = screen_with_texts({{{60, 150, 60, 8}, "Save file?"}});
    save.popup = s.popup;
    CHECK(crash_strategy(save, lex()) == 0.0);
    // Keyword outside the popup only counts through the no-popup fallback.
    ScreenDecomposition outside = screen_with_texts({{{5, 5, 60, 8}, "App has stopped"}});
    CHECK(crash_strategy(outside, lex(), true) == 1.0);
    CHECK(crash_strategy(outside, lex(), false) == 0.0);
  }

  TEST_CASE("network strategy") {
    const auto s = screen_with_texts({{{0, 0, 50, 8}, "404 not found"}});
    CHECK(network_strategy(s, analysis_of("page says 404 not found"), lex()) == 1.0);
    CHECK(network_strategy(screen_with_texts({{{0, 0, 50, 8}, "Welcome"}}), analysis_of("page says hi"), lex()) == 0.0);
    const auto server = screen_with_texts({{{0, 0, 50, 8}, "server error"}});
    CHECK(network_strategy(server, analysis_of("it says database corrupt"), lex()) == 0.0);
    CHECK(network_strategy(server, analysis_of("the page is broken"), lex()) == 1.0);
    CHECK(has_http_error_code("Error 502"));
    CHECK_FALSE(has_http_error_code("Order 15021"));
    CHECK_FALSE(has_http_error_code("SQL ERROR (1044)"));
  }

  TEST_CASE("null screen strategy") {
    CHECK(null_screen_strategy(RgbImage(100, 100, kWhite), 0.75) == 1.0);
    RgbImage half(100, 100, kWhite);
    half.fill_rect({50, 0, 1, 100}, {0, 0, 0});
    CHECK(oracle::blank_ratio(oracle::edges(half, 32.0)) < 0.75);
    CHECK(null_screen_strategy(half, 0.75) == 0.0);
    RgbImage mostly(100, 100, kWhite);
    mostly.fill_rect({0, 80, 100, 20}, {0, 0, 0});
    CHECK(oracle::blank_ratio(oracle::edges(mostly, 32.0)) >= 0.75);
    CHECK(null_screen_strategy(mostly, 0.75) == 1.0);
  }

  TEST_CASE("performance strategy") {
    RgbImage img(240, 400, kWhite);
    draw_icon(img, default_loading_templates()[0], 104, 184, 2, {60, 60, 60});
    SidecarOcr none({});
    HeuristicTyper typer;
    const auto s = decompose_screen(img, none, typer, lex());
    CHECK(performance_strategy(s, lex()) == 1.0);
    CHECK(performance_strategy(screen_with_texts({{{0, 0, 40, 8}, "loading…"}}), lex()) == 1.0);
    const auto blank = decompose_screen(RgbImage(240, 400, kWhite), none, typer, lex());
    CHECK(performance_strategy(blank, lex()) == 0.0);
  }

  TEST_CASE("error prompt strategy") {
    const auto s = screen_with_texts({{{0, 0, 90, 8}, "SQL ERROR (1044)"}});
    CHECK(error_prompt_strategy(s, analysis_of("The app indicates the 'SQL ERROR'.")) == 1.0);
    CHECK(error_prompt_strategy(s, analysis_of("The app failed.")) == 0.0);
    CHECK(error_prompt_strategy(s, analysis_of("It shows disk full")) == 0.0);
  }

  TEST_CASE("garbled strategy") {
    CHECK(garbled_strategy(screen_with_texts({{{0, 0, 9, 8}, "A\xEF\xBF\xBD"}})) == 1.0);
    CHECK(garbled_strategy(screen_with_texts({{{0, 0, 9, 8}, "正常文本 OK"}})) == 0.0);
    CHECK(garbled_strategy(screen_with_texts({{{0, 0, 9, 8}, "x\xEE\x80\x80"}})) == 1.0);
    CHECK(is_garbled_code_point(0x07));
    CHECK_FALSE(is_garbled_code_point(U'\n'));
    CHECK_FALSE(is_garbled_code_point(U'\t'));
    CHECK(is_garbled_code_point(0x9F));
  }

  TEST_CASE("score_type delegates") {
    const DetectorConfig cfg;
    ScreenDecomposition s;
    s.widgets = {widget({10, 10, 50, 20}, "Login", WidgetKind::Button, Color::Red, Position::TopLeft)};
    const auto a = analysis_of("the red 'Login' button at the top-left does not work");
    CHECK(score_type(BugType::FunctionalDefect, {s, a, lex(), cfg}) == 1.0);

    ScreenDecomposition crash = screen_with_texts({{{60, 150, 60, 8}, "No response"}});
    crash.popup = widget({40, 120, 160, 100}, std::nullopt, std::nullopt, Color::White, Position::Center);
    CHECK(score_type(BugType::Crash, {crash, a, lex(), cfg}) == 1.0);

    ScreenDecomposition half;
    half.blank_ratio = 0.5;
    CHECK(score_type(BugType::NullScreen, {half, a, lex(), cfg}) == 0.0);
  }

  TEST_CASE("fusion examples") {
    const FusionConfig cfg;
    const auto p = top(BugType::Crash, BugType::NullScreen, BugType::ErrorPrompt);
    auto v = fuse(p, {{BugType::Crash, 0.0}, {BugType::NullScreen, 0.0}, {BugType::ErrorPrompt, 0.0}}, cfg);
    CHECK(v.s_star == 0.0);
    CHECK_FALSE(v.consistent);
    v = fuse(p, {{BugType::Crash, 0.4}, {BugType::NullScreen, 0.6}, {BugType::ErrorPrompt, 0.0}}, cfg);
    CHECK(v.s_star == 0.9 * 0.6);
    CHECK(v.consistent);
    v = fuse(p, {{BugType::Crash, 0.5}, {BugType::NullScreen, 0.0}, {BugType::ErrorPrompt, 0.0}}, cfg);
    CHECK(v.s_star == 0.5);
    CHECK(v.consistent);
    try {
      (void)fuse(p, {{BugType::Crash, 0.5}}, cfg);
      FAIL("expected MissingScore");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingScore);
    }
  }

  TEST_CASE("fusion: monotone and symmetric under paired permutation") {
    Rng rng(6);
    const std::array<BugType, 3> types = {BugType::Crash, BugType::NullScreen, BugType::ErrorPrompt};
    for (int i = 0; i < 500; ++i) {
      FusionConfig cfg;
      cfg.delta = {rng.unit(), rng.unit(), rng.unit()};
      cfg.lambda = rng.unit();
      std::map<BugType, double> s;
      for (const auto t : types) s[t] = rng.unit();
      const auto p = top(types[0], types[1], types[2]);
      const auto base = fuse(p, s, cfg);
      auto raised = s;
      raised[types[rng.index(3)]] = std::min(1.0, raised[types[rng.index(3)]] + rng.unit());
      for (auto& [t, v] : raised) v = std::max(v, s[t]);
      if (base.consistent) CHECK(fuse(p, raised, cfg).consistent);
      // Swap ranks 0 and 2 together with their deltas.
      FusionConfig swapped = cfg;
      std::swap(swapped.delta[0], swapped.delta[2]);
      const auto q = top(types[2], types[1], types[0], 0.5, 0.3, 0.2);
      CHECK(fuse(q, s, swapped).s_star == base.s_star);
    }
  }

  TEST_CASE("config validation") {
    StrategyWeights w;
    CHECK_NOTHROW(w.validate());
    w.omega_x = 0.9;
    CHECK_THROWS_AS(w.validate(), Error);
    FusionConfig f;
    f.lambda = 1.5;
    CHECK_THROWS_AS(f.validate(), Error);
  }

  TEST_CASE("detect: crash dialog with a crash description") {
    FixedClassifier c(top(BugType::Crash, BugType::FunctionalDefect, BugType::NullScreen));
    const auto rec = detect(dialog_report("App has stopped", "the app crashes"), {c}, lex());
    CHECK(rec.verdict.consistent);
    CHECK(rec.verdict.s_star == 1.0);
    CHECK(rec.trace["classifier"] == "fixed");
    CHECK(rec.trace["screen"]["popup"].is_object());
    const auto j = to_json(rec);
    CHECK(j["verdict"] == "consistent");
    CHECK(j["s_dt"]["crash"] == 1.0);
  }

  TEST_CASE("detect: normal screen with a crash description") {
    FixedClassifier c(top(BugType::Crash, BugType::FunctionalDefect, BugType::NullScreen));
    const auto rec = detect(plain_report("the app crashes"), {c}, lex());
    CHECK_FALSE(rec.verdict.consistent);
    CHECK(rec.verdict.s_star == 0.0);
  }

  TEST_CASE("detect: no mentions and no signatures") {
    FixedClassifier c(top(BugType::FunctionalDefect, BugType::LayoutProblem, BugType::Crash));
    const auto rec = detect(plain_report("something is off"), {c}, lex());
    CHECK_FALSE(rec.verdict.consistent);
    CHECK(rec.verdict.s_star == 0.0);
  }

  TEST_CASE("detect: matched button mention") {
    FixedClassifier c(top(BugType::FunctionalDefect, BugType::LayoutProblem, BugType::Crash));
    const auto rec = detect(plain_report("I tapped the red 'Login' button at the top-left, nothing happened."), {c}, lex());
    CHECK(rec.verdict.consistent);
    CHECK(rec.verdict.s_star == 1.0);
  }

  TEST_CASE("plugin and in-process classifiers give the same verdicts") {
    auto proc = std::make_shared<PluginProcess>(testing::plugin_cmd("classifier"), "recode-classifier");
    PluginClassifier plugin(proc);
    // The fake plugin answers crash / functional-defect / layout-problem for crash texts.
    FixedClassifier fixed(top(BugType::Crash, BugType::FunctionalDefect, BugType::LayoutProblem, 0.7, 0.2, 0.1));
    for (const auto& r : {dialog_report("App has stopped", "the app crashes"), plain_report("the app crashes")}) {
      const auto a = detect(r, {plugin}, lex());
      const auto b = detect(r, {fixed}, lex());
      CHECK(a.top3 == b.top3);
      CHECK(a.verdict.s_star == b.verdict.s_star);
      CHECK(a.verdict.consistent == b.verdict.consistent);
    }
  }

  TEST_CASE("strategy outputs stay in range on generated reports") {
    CorpusSpec spec;
    spec.n_reports = 80;
    spec.seed = 4;
    spec.tier = Tier::Noisy;
    const DetectorConfig cfg;
    SidecarOcr none({});
    HeuristicTyper typer;
    for (const auto& g : generate_reports(spec)) {
      SidecarOcr ocr(*g.report.ocr_annotations);
      const auto screen = decompose_screen(g.report.screenshot, ocr, typer, lex());
      const auto a = analysis_of(g.report.description);
      for (const auto t : kAllBugTypes) {
        const double s = score_type(t, {screen, a, lex(), cfg});
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        if (!uses_general_strategy(t)) CHECK((s == 0.0 || s == 1.0));
      }
    }
  }
}
