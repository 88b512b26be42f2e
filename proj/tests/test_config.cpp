#include "orliczdyn/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace orliczdyn;
using nlohmann::json;

namespace {

const std::filesystem::path kSource{ORLICZDYN_SOURCE_DIR};

std::vector<std::filesystem::path> shipped_configs() {
  std::vector<std::filesystem::path> out;
  for (const auto* dir : {"configs", "tests/data"}) {
    for (const auto& e : std::filesystem::directory_iterator(kSource / dir)) {
      if (e.path().extension() == ".json" && e.path().filename().string().rfind("vector_", 0) != 0) {
        out.push_back(e.path());
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

json minimal() {
  return json::parse(R"({"group":{"kind":"Z"},"a":[1],"weight":{"family":"constant","c":0.5},
                         "young":{"family":"power","p":2},"K":[[0]]})");
}

std::string error_of(const json& j) {
  try {
    (void)parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST(Config, RoundTripShipped) {
  const auto files = shipped_configs();
  ASSERT_GE(files.size(), 4u);
  for (const auto& f : files) {
    const auto c = load_config(f.string());
    const auto canon = emit_config(c);
    EXPECT_EQ(parse_config(canon), c) << f;
    EXPECT_EQ(emit_config(parse_config(canon)), canon) << f;
  }
}

TEST(Config, RoundTripAllFamilies) {
  const std::vector<std::string> texts{
      R"({"group":{"kind":"Zd","d":2},"a":[1,0],"weight":{"family":"table","entries":[[[0,0],2],{"element":[1,0],"value":0.25}],"default":1.5},
          "young":{"family":"custom","table":[[0,0],[1,0.5],[2,2]]},"K":{"elements":[[0,0],[1,1]]},"property":"all",
          "epsilon_schedule":{"k_max":4},"vector":[[[0,0],1.5]],"probe":{"t_lo":0.01,"t_hi":50,"n_grid":20},"output":"o.json","seed":7})",
      R"({"group":{"kind":"cyclic","m":5},"a":2,"weight":{"family":"two_sided_step","c_neg":3,"c_pos":0.25},
          "young":{"family":"alphalog","alpha":2.5},"K":[0,1,2],"lab_epsilon":0.1,"L":0})",
      R"({"group":{"kind":"heisenberg"},"a":[3,0,2],"weight":{"family":"heisenberg_paper"},"K":{"box":{"lo":[0,0,0],"hi":[1,1,1]}}})",
      R"({"young":{"family":"power","p":1}})"};
  for (const auto& t : texts) {
    const auto c = parse_config_text(t);
    EXPECT_EQ(parse_config(emit_config(c)), c) << t;
  }
  const auto c = parse_config_text(texts[0]);
  EXPECT_EQ(c.epsilons, default_epsilon_schedule(4));
  EXPECT_EQ(c.weight->entries.size(), 2u);
  EXPECT_EQ(c.weight->fallback, 1.5);
  EXPECT_EQ(c.property, "all");
  EXPECT_EQ(c.seed, 7u);
  const auto d = parse_config_text(texts[1]);
  EXPECT_EQ(*d.a, (Coords{2}));
  EXPECT_EQ(d.K->elements.size(), 3u);
  EXPECT_EQ(d.L, 0u);
}

TEST(Config, Defaults) {
  const auto c = parse_config(json::object());
  EXPECT_EQ(c.property, "multiply_recurrent");
  EXPECT_EQ(c.L, 1u);
  EXPECT_EQ(c.n_max, 256u);
  EXPECT_EQ(c.l_max, 64u);
  EXPECT_EQ(c.epsilons, default_epsilon_schedule());
  EXPECT_EQ(c.young.family, "power");
  EXPECT_FALSE(c.group);
}

TEST(Config, FieldDiagnostics) {
  struct Case {
    std::function<void(json&)> edit;
    std::string field;
  };
  const std::vector<Case> cases{
      {[](json& j) { j["weight"]["c"] = -1; }, "weight.c"},
      {[](json& j) { j["weight"].erase("c"); }, "weight.c"},
      {[](json& j) { j["weight"]["family"] = "bogus"; }, "weight.family"},
      {[](json& j) { j["weight"]["extra"] = 1; }, "weight.extra"},
      {[](json& j) { j["young"]["p"] = 0.5; }, "young.p"},
      {[](json& j) { j["young"] = {{"family", "alphalog"}, {"alpha", 1}}; }, "young.alpha"},
      {[](json& j) { j["young"] = {{"family", "custom"}, {"table", {{0, 0}, {1, 0.5}}}}; }, "young.table"},
      {[](json& j) { j["group"]["kind"] = "SL2"; }, "group.kind"},
      {[](json& j) { j["group"] = {{"kind", "Zd"}}; }, "group.d"},
      {[](json& j) { j["a"] = "x"; }, "a"},
      {[](json& j) { j["K"] = json::array(); }, "K"},
      {[](json& j) { j["K"] = {{"box", {{"lo", {0}}, {"hi", {1, 2}}}}}; }, "K.box"},
      {[](json& j) { j["epsilons"] = {0.5, 1.5}; }, "epsilons[1]"},
      {[](json& j) {
         j["epsilons"] = {0.5};
         j["epsilon_schedule"] = {{"k_max", 3}};
       },
       "epsilons"},
      {[](json& j) { j["property"] = "ergodic"; }, "property"},
      {[](json& j) { j["N_max"] = 0; }, "N_max"},
      {[](json& j) { j["L"] = -1; }, "L"},
      {[](json& j) { j["schema_version"] = 2; }, "schema_version"},
      {[](json& j) { j["colour"] = "red"; }, "colour"},
      {[](json& j) { j["probe"] = {{"t_lo", 5}, {"t_hi", 1}}; }, "probe.t_hi"},
      {[](json& j) { j["seed"] = -3; }, "seed"},
      {[](json& j) { j["vector"] = {{{0}, "x"}}; }, "vector"},
  };
  for (const auto& c : cases) {
    auto j = minimal();
    c.edit(j);
    const auto msg = error_of(j);
    EXPECT_NE(msg.find("'" + c.field), std::string::npos) << c.field << " -> " << msg;
  }
  EXPECT_EQ(error_of(minimal()), "");
  EXPECT_THROW(parse_config(json::array()), ConfigError);
}

TEST(Config, SyntaxErrorLineColumn) {
  try {
    (void)parse_config_text("{\n  \"L\": 2,\n  \"N_max\": ,\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("column 12"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, BuildRequest) {
  const auto c = load_config((kSource / "configs/z_shift_chaotic.json").string());
  const auto req = build_request(Integers{}, c, 2);
  EXPECT_EQ(req.depth, 3u);
  EXPECT_EQ(req.K.measure(), 5u);
  EXPECT_EQ(req.n_max, 128u);
  EXPECT_EQ(req.property, Property::Chaotic);
  EXPECT_EQ(req.jobs, 2u);
  EXPECT_EQ(req.system.weight(-1), 2.0);
  EXPECT_EQ(req.system.weight(1), 0.5);

  const auto h = load_config((kSource / "configs/heisenberg_paper.json").string());
  EXPECT_EQ(with_group(*h.group, [&](const auto& g) { return build_K(g, *h.K).measure(); }), 27u);

  auto bad = parse_config(minimal());
  bad.a = Coords{1, 2};
  EXPECT_THROW(build_request(Integers{}, bad, 1), ConfigError);
  bad.a.reset();
  EXPECT_THROW(require_fields(bad, {"group", "a"}, "check"), ConfigError);
}
