#include "transfix/scenario.hpp"

#include <algorithm>

#include "transfix/errors.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "scenario";

[[noreturn]] void fail(const std::string& path, const std::string& expected) {
  throw ParseError(kModule, path + ": expected " + expected);
}

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "a value (field is missing)");
  return *it;
}

void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "an object");
}

void expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "an array");
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(path + "." + key, "no such field");
    }
  }
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "a string");
  return j.get<std::string>();
}

std::uint64_t get_natural(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(path, "a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::vector<std::string> get_strings(const Json& j, const std::string& path) {
  expect_array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Ordinal get_ordinal(const Json& j, const std::string& path) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    return Ordinal::natural(j.get<std::uint64_t>());
  }
  const std::string text = get_string(j, path);
  try {
    return Ordinal::parse(text);
  } catch (const ParseError& e) {
    fail(path, "an ordinal such as \"w*2+1\" (" + std::string(e.what()) + ")");
  }
}

Rational get_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const Error&) {
    }
  }
  fail(path, "an integer or a rational string such as \"1/2\"");
}

Json rational_json(const Rational& r) { return r.is_integer() ? Json(r.numerator()) : Json(r.to_string()); }

// ---- lattices --------------------------------------------------------------

std::uint32_t mask_of(const std::vector<std::string>& universe, const Json& subset, const std::string& path) {
  expect_array(subset, path);
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const std::string atom = get_string(subset[i], path + "[" + std::to_string(i) + "]");
    auto it = std::find(universe.begin(), universe.end(), atom);
    if (it == universe.end()) fail(path + "[" + std::to_string(i) + "]", "an atom of the universe, got \"" + atom + "\"");
    mask |= 1u << (it - universe.begin());
  }
  return mask;
}

LatticeSource parse_lattice_source(const Json& obj, const std::string& path) {
  LatticeSource src;
  if (obj.contains("chain")) {
    if (obj.contains("universe") || obj.contains("elements")) fail(path, "either \"chain\" or \"universe\", not both");
    src.chain = get_natural(obj["chain"], path + ".chain");
    if (*src.chain == 0) fail(path + ".chain", "a chain length of at least 1");
    return src;
  }
  src.universe = get_strings(field(obj, "universe", path), path + ".universe");
  if (obj.contains("elements")) {
    const Json& els = obj["elements"];
    expect_array(els, path + ".elements");
    std::vector<std::vector<std::string>> family;
    for (std::size_t i = 0; i < els.size(); ++i) {
      family.push_back(get_strings(els[i], path + ".elements[" + std::to_string(i) + "]"));
    }
    src.elements = std::move(family);
  }
  return src;
}

/// Resolves an op key or value to an element id.
ElementId element_ref(const FiniteLattice& l, const LatticeSource& src, const Json& ref, const std::string& path) {
  if (!src.chain && ref.is_array()) {
    auto id = l.find_mask(mask_of(src.universe, ref, path));
    if (!id) fail(path, "an element of the lattice");
    return *id;
  }
  if (ref.is_string()) {
    const std::string text = ref.get<std::string>();
    if (auto id = l.find(text)) return *id;
    if (!src.chain) {
      const Json parsed = Json::parse(text, nullptr, false);
      if (!parsed.is_discarded() && parsed.is_array()) return element_ref(l, src, parsed, path);
    }
  }
  if (src.chain && ref.is_number_unsigned() && ref.get<std::uint64_t>() < l.size()) {
    return static_cast<ElementId>(ref.get<std::uint64_t>());
  }
  fail(path, src.chain ? "a chain element \"0\"..\"" + std::to_string(*src.chain - 1) + "\""
                       : "a subset given as a sorted atom array");
}

std::vector<ElementId> parse_op(const FiniteLattice& l, const LatticeSource& src, const Json& op,
                                const std::string& path) {
  expect_object(op, path);
  std::vector<std::optional<ElementId>> table(l.size());
  for (const auto& [key, value] : op.items()) {
    const std::string key_path = path + "[" + Json(key).dump() + "]";
    const ElementId x = element_ref(l, src, Json(key), key_path);
    if (table[x]) fail(key_path, "each element at most once");
    table[x] = element_ref(l, src, value, key_path);
  }
  std::vector<ElementId> out;
  for (ElementId x = 0; x < l.size(); ++x) {
    if (!table[x]) fail(path, "an entry for every element; missing " + l.label(x));
    out.push_back(*table[x]);
  }
  return out;
}

Json element_json(const FiniteLattice& l, const LatticeSource& src, ElementId x) {
  if (src.chain) return l.label(x);
  return Json::parse(l.label(x));
}

Json lattice_source_json(const LatticeSource& src) {
  Json j = Json::object();
  if (src.chain) {
    j["chain"] = *src.chain;
    return j;
  }
  j["universe"] = src.universe;
  if (src.elements) j["elements"] = *src.elements;
  return j;
}

Json op_json(const FiniteLattice& l, const LatticeSource& src, const std::vector<ElementId>& op) {
  Json j = Json::object();
  for (ElementId x = 0; x < l.size(); ++x) j[l.label(x)] = element_json(l, src, op[x]);
  return j;
}

FiniteLattice build_or_fail(const LatticeSource& src, const std::string& path) {
  try {
    return src.build();
  } catch (const Error& e) {
    fail(path, std::string("a valid lattice (") + e.what() + ")");
  }
}

// ---- sentences --------------------------------------------------------------

Expr parse_expr(const Json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) fail(path, "an object with exactly one of atom, tr, not, and, or");
  const auto& [key, value] = *j.items().begin();
  const std::string sub = path + "." + key;
  if (key == "atom") {
    if (!value.is_boolean()) fail(sub, "true or false");
    return Expr::atom(value.get<bool>());
  }
  if (key == "tr") return Expr::tr(get_string(value, sub));
  if (key == "not") return Expr::negation(parse_expr(value, sub));
  if (key == "and" || key == "or") {
    if (!value.is_array() || value.size() != 2) fail(sub, "an array of two sentences");
    Expr a = parse_expr(value[0], sub + "[0]");
    Expr b = parse_expr(value[1], sub + "[1]");
    return key == "and" ? Expr::conjunction(std::move(a), std::move(b)) : Expr::disjunction(std::move(a), std::move(b));
  }
  fail(path, "one of atom, tr, not, and, or; got \"" + key + "\"");
}

Json expr_json(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kAtom:
      return {{"atom", e.truth}};
    case Expr::Kind::kTr:
      return {{"tr", e.ref}};
    case Expr::Kind::kNot:
      return {{"not", expr_json(e.operands[0])}};
    case Expr::Kind::kAnd:
      return {{"and", Json::array({expr_json(e.operands[0]), expr_json(e.operands[1])})}};
    case Expr::Kind::kOr:
      return {{"or", Json::array({expr_json(e.operands[0]), expr_json(e.operands[1])})}};
  }
  return nullptr;
}

// ---- games --------------------------------------------------------------------

template <class T, class F>
std::vector<std::vector<T>> parse_table(const Json& j, std::size_t rows, std::size_t cols, const std::string& path,
                                        F cell) {
  if (!j.is_array() || j.size() != rows) fail(path, "an array of " + std::to_string(rows) + " rows (one per T action)");
  std::vector<std::vector<T>> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(row_path, "an array of " + std::to_string(cols) + " entries (one per M action)");
    }
    for (std::size_t c = 0; c < cols; ++c) out[r].push_back(cell(j[r][c], row_path + "[" + std::to_string(c) + "]"));
  }
  return out;
}

StageGame parse_stage(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, {"actions_t", "actions_m", "payoff_t", "payoff_m", "labels"}, path);
  StageGame g;
  g.actions_t = get_strings(field(j, "actions_t", path), path + ".actions_t");
  g.actions_m = get_strings(field(j, "actions_m", path), path + ".actions_m");
  if (g.actions_t.empty()) fail(path + ".actions_t", "at least one action");
  if (g.actions_m.empty()) fail(path + ".actions_m", "at least one action");
  const std::size_t rows = g.actions_t.size(), cols = g.actions_m.size();
  g.payoff_t = parse_table<Rational>(field(j, "payoff_t", path), rows, cols, path + ".payoff_t", get_rational);
  g.payoff_m = j.contains("payoff_m")
                   ? parse_table<Rational>(j["payoff_m"], rows, cols, path + ".payoff_m", get_rational)
                   : g.payoff_t;
  g.labels = parse_table<std::string>(field(j, "labels", path), rows, cols, path + ".labels", get_string);
  return g;
}

Json stage_json(const StageGame& g) {
  auto table = [](const std::vector<std::vector<Rational>>& t) {
    Json out = Json::array();
    for (const auto& row : t) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(rational_json(v));
      out.push_back(r);
    }
    return out;
  };
  return {{"actions_t", g.actions_t},
          {"actions_m", g.actions_m},
          {"payoff_t", table(g.payoff_t)},
          {"payoff_m", table(g.payoff_m)},
          {"labels", g.labels}};
}

std::size_t action_index(const std::vector<std::string>& actions, const Json& j, const std::string& path) {
  const std::string name = get_string(j, path);
  auto it = std::find(actions.begin(), actions.end(), name);
  if (it == actions.end()) fail(path, "an action of the next stage, got \"" + name + "\"");
  return static_cast<std::size_t>(it - actions.begin());
}

ReflectiveGameSpec parse_game(const Json& j) {
  ReflectiveGameSpec spec;
  const Json& stages = field(j, "stages", "$");
  expect_array(stages, "$.stages");
  if (stages.empty()) fail("$.stages", "at least one stage");
  for (std::size_t a = 0; a < stages.size(); ++a) spec.stages.push_back(parse_stage(stages[a], "$.stages[" + std::to_string(a) + "]"));

  const Json promotion = j.value("promotion", Json::object());
  expect_object(promotion, "$.promotion");
  for (const auto& [key, _] : promotion.items()) {
    std::size_t idx = 0;
    if (key.empty() || !std::all_of(key.begin(), key.end(), ::isdigit) || (idx = std::stoul(key)) + 1 >= stages.size()) {
      fail("$.promotion." + key, "a stage index between 0 and " + std::to_string(stages.size() - 2));
    }
  }
  for (std::size_t a = 0; a + 1 < spec.stages.size(); ++a) {
    const std::string path = "$.promotion." + std::to_string(a);
    const Json& rule = field(promotion, std::to_string(a), "$.promotion");
    expect_object(rule, path);
    const StageGame& next = spec.stages[a + 1];
    std::map<std::string, std::vector<Profile>> parsed;
    for (const auto& [label, profiles] : rule.items()) {
      const std::string lpath = path + "[" + Json(label).dump() + "]";
      expect_array(profiles, lpath);
      std::vector<Profile> adm;
      for (std::size_t i = 0; i < profiles.size(); ++i) {
        const std::string ppath = lpath + "[" + std::to_string(i) + "]";
        if (!profiles[i].is_array() || profiles[i].size() != 2) fail(ppath, "a [T action, M action] pair");
        adm.push_back({action_index(next.actions_t, profiles[i][0], ppath + "[0]"),
                       action_index(next.actions_m, profiles[i][1], ppath + "[1]")});
      }
      parsed.emplace(label, std::move(adm));
    }
    for (Profile p : spec.stages[a].all_profiles()) {
      const std::string& label = spec.stages[a].label(p);
      auto it = parsed.find(label);
      if (it == parsed.end() || it->second.empty()) {
        fail(path, "a nonempty admissible set for outcome \"" + label + "\" of stage " + std::to_string(a));
      }
    }
    spec.promotion.push_back(std::move(parsed));
  }
  const auto win = get_strings(field(j, "win", "$"), "$.win");
  spec.win = {win.begin(), win.end()};
  return spec;
}

Json game_json(const ReflectiveGameSpec& spec) {
  Json stages = Json::array();
  for (const auto& g : spec.stages) stages.push_back(stage_json(g));
  Json promotion = Json::object();
  for (std::size_t a = 0; a < spec.promotion.size(); ++a) {
    const StageGame& next = spec.stages[a + 1];
    Json rule = Json::object();
    for (const auto& [label, profiles] : spec.promotion[a]) {
      Json list = Json::array();
      for (Profile p : profiles) list.push_back({next.actions_t[p.t], next.actions_m[p.m]});
      rule[label] = list;
    }
    promotion[std::to_string(a)] = rule;
  }
  return {{"stages", stages}, {"promotion", promotion}, {"win", std::vector<std::string>(spec.win.begin(), spec.win.end())}};
}

const char* mode_name(LatticeMode m) {
  switch (m) {
    case LatticeMode::kLfp:
      return "lfp";
    case LatticeMode::kGfp:
      return "gfp";
    case LatticeMode::kAllFixedPoints:
      return "all-fixed-points";
  }
  return "lfp";
}

}  // namespace

FiniteLattice LatticeSource::build() const {
  if (chain) return make_chain(*chain);
  if (!elements) return make_powerset(universe);
  if (universe.size() > 31) throw CapExceeded(kModule, "universe of a subset family is limited to 31 atoms");
  std::vector<std::uint32_t> masks;
  for (std::size_t i = 0; i < elements->size(); ++i) {
    masks.push_back(mask_of(universe, Json((*elements)[i]), "$.elements[" + std::to_string(i) + "]"));
  }
  return FiniteLattice::from_set_family(universe, masks);
}

std::string Scenario::kind() const {
  static constexpr const char* kinds[] = {"lattice-lfp", "ordinal-transfinite", "initial-algebra",
                                          "kripke",      "reflective-game",     "correspondence"};
  return kinds[body.index()];
}

Scenario parse_scenario(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError(kModule, "malformed JSON");
  return parse_scenario(doc);
}

Scenario parse_scenario(const Json& doc) {
  expect_object(doc, "$");
  Scenario s;
  const std::string kind = get_string(field(doc, "kind", "$"), "$.kind");
  if (doc.contains("id")) s.id = get_string(doc["id"], "$.id");

  if (kind == "lattice-lfp") {
    reject_unknown(doc, {"kind", "id", "universe", "elements", "chain", "op", "mode"}, "$");
    LatticeScenario body;
    body.source = parse_lattice_source(doc, "$");
    const FiniteLattice l = build_or_fail(body.source, "$");
    body.op = parse_op(l, body.source, field(doc, "op", "$"), "$.op");
    const std::string mode = doc.contains("mode") ? get_string(doc["mode"], "$.mode") : "lfp";
    if (mode == "lfp") {
      body.mode = LatticeMode::kLfp;
    } else if (mode == "gfp") {
      body.mode = LatticeMode::kGfp;
    } else if (mode == "all-fixed-points") {
      body.mode = LatticeMode::kAllFixedPoints;
    } else {
      fail("$.mode", "one of \"lfp\", \"gfp\", \"all-fixed-points\"");
    }
    s.body = std::move(body);
  } else if (kind == "ordinal-transfinite") {
    reject_unknown(doc, {"kind", "id", "regions", "start", "budget"}, "$");
    OrdinalScenario body;
    const Json& regions = field(doc, "regions", "$");
    expect_array(regions, "$.regions");
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const std::string path = "$.regions[" + std::to_string(i) + "]";
      expect_object(regions[i], path);
      reject_unknown(regions[i], {"lo", "hi", "inc"}, path);
      StepRegion r;
      r.lower = get_ordinal(field(regions[i], "lo", path), path + ".lo");
      if (regions[i].contains("hi")) r.upper = get_ordinal(regions[i]["hi"], path + ".hi");
      r.increment = get_ordinal(field(regions[i], "inc", path), path + ".inc");
      body.regions.push_back(std::move(r));
    }
    body.start = doc.contains("start") ? get_ordinal(doc["start"], "$.start") : Ordinal();
    if (doc.contains("budget")) {
      const Json& b = doc["budget"];
      expect_object(b, "$.budget");
      reject_unknown(b, {"steps", "jumps"}, "$.budget");
      if (b.contains("steps")) body.budget.max_finite_steps = get_natural(b["steps"], "$.budget.steps");
      if (b.contains("jumps")) body.budget.max_limit_jumps = get_natural(b["jumps"], "$.budget.jumps");
    }
    try {
      OrdinalStepOperator(body.regions, body.start);
    } catch (const PreconditionViolation& e) {
      const std::string msg = e.what();
      fail("$.regions", "a monotone partition of [0, inf); " + msg.substr(msg.find(": ") + 2));
    }
    s.body = std::move(body);
  } else if (kind == "initial-algebra") {
    reject_unknown(doc, {"kind", "id", "summands", "budget"}, "$");
    AlgebraScenario body;
    const Json& summands = field(doc, "summands", "$");
    expect_array(summands, "$.summands");
    for (std::size_t i = 0; i < summands.size(); ++i) {
      const std::string path = "$.summands[" + std::to_string(i) + "]";
      expect_object(summands[i], path);
      reject_unknown(summands[i], {"labels", "arity"}, path);
      body.functor.summands.push_back({get_strings(field(summands[i], "labels", path), path + ".labels"),
                                       get_natural(field(summands[i], "arity", path), path + ".arity")});
    }
    if (doc.contains("budget")) body.budget = get_natural(doc["budget"], "$.budget");
    try {
      body.functor.validate();
    } catch (const PreconditionViolation& e) {
      const std::string msg = e.what();
      fail("$.summands", "a valid polynomial functor; " + msg.substr(msg.find(": ") + 2));
    }
    s.body = std::move(body);
  } else if (kind == "kripke") {
    reject_unknown(doc, {"kind", "id", "sentences"}, "$");
    const Json& sentences = field(doc, "sentences", "$");
    expect_object(sentences, "$.sentences");
    if (sentences.empty()) fail("$.sentences", "at least one sentence");
    std::map<std::string, Expr> bodies;
    for (const auto& [name, ast] : sentences.items()) bodies.emplace(name, parse_expr(ast, "$.sentences." + name));
    try {
      s.body = KripkeScenario{SentenceSystem(std::move(bodies))};
    } catch (const PreconditionViolation& e) {
      const std::string msg = e.what();
      fail("$.sentences", "a closed sentence system; " + msg.substr(msg.find(": ") + 2));
    }
  } else if (kind == "reflective-game") {
    reject_unknown(doc, {"kind", "id", "stages", "promotion", "win"}, "$");
    s.body = GameScenario{parse_game(doc)};
  } else if (kind == "correspondence") {
    reject_unknown(doc, {"kind", "id", "lattice", "op"}, "$");
    CorrespondenceScenario body;
    const Json& lat = field(doc, "lattice", "$");
    expect_object(lat, "$.lattice");
    reject_unknown(lat, {"universe", "elements", "chain"}, "$.lattice");
    body.source = parse_lattice_source(lat, "$.lattice");
    const FiniteLattice l = build_or_fail(body.source, "$.lattice");
    body.op = parse_op(l, body.source, field(doc, "op", "$"), "$.op");
    s.body = std::move(body);
  } else {
    throw ParseError(kModule, "unknown scenario kind \"" + kind +
                                  "\" (expected lattice-lfp, ordinal-transfinite, initial-algebra, kripke, "
                                  "reflective-game or correspondence)");
  }
  return s;
}

Json to_json(const Scenario& s) {
  Json j = Json::object();
  j["kind"] = s.kind();
  if (!s.id.empty()) j["id"] = s.id;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, LatticeScenario>) {
          const FiniteLattice l = body.source.build();
          j.update(lattice_source_json(body.source));
          j["op"] = op_json(l, body.source, body.op);
          j["mode"] = mode_name(body.mode);
        } else if constexpr (std::is_same_v<T, OrdinalScenario>) {
          Json regions = Json::array();
          for (const auto& r : body.regions) {
            Json rj = {{"lo", r.lower.to_string()}, {"inc", r.increment.to_string()}};
            if (r.upper) rj["hi"] = r.upper->to_string();
            regions.push_back(rj);
          }
          j["regions"] = regions;
          j["start"] = body.start.to_string();
          j["budget"] = {{"steps", body.budget.max_finite_steps}, {"jumps", body.budget.max_limit_jumps}};
        } else if constexpr (std::is_same_v<T, AlgebraScenario>) {
          Json summands = Json::array();
          for (const auto& sm : body.functor.summands) summands.push_back({{"labels", sm.labels}, {"arity", sm.arity}});
          j["summands"] = summands;
          j["budget"] = body.budget;
        } else if constexpr (std::is_same_v<T, KripkeScenario>) {
          Json sentences = Json::object();
          for (const auto& [name, e] : body.system.sentences()) sentences[name] = expr_json(e);
          j["sentences"] = sentences;
        } else if constexpr (std::is_same_v<T, GameScenario>) {
          j.update(game_json(body.spec));
        } else {
          const FiniteLattice l = body.source.build();
          j["lattice"] = lattice_source_json(body.source);
          j["op"] = op_json(l, body.source, body.op);
        }
      },
      s.body);
  return j;
}

}  // namespace transfix
