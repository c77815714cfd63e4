#include <algorithm>
#include <chrono>
#include <sstream>

#include "transfix/errors.hpp"
#include "transfix/scenario.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "scenario";

Json fixed_verdict(const Ordinal& theta) { return {{"status", "fixed"}, {"theta", theta.to_string()}}; }

MonotoneOp verified_op(const FiniteLattice& l, std::vector<ElementId> table) {
  MonotoneOp f(std::move(table));
  if (!check_monotone(l, f)) {
    const auto [a, b] = *monotonicity_witness(l, f);
    throw PreconditionViolation("lattice", "operator is not monotone: " + l.label(a) + " <= " + l.label(b) +
                                               " but f(" + l.label(a) + ") = " + l.label(f(a)) + " is not below f(" +
                                               l.label(b) + ") = " + l.label(f(b)));
  }
  return f;
}

Json lattice_stages(const FiniteLattice& l, const TransfiniteTrace<ElementId>& t) {
  Json stages = Json::array();
  for (const auto& s : t.stages) stages.push_back({{"stage", s.stage.to_string()}, {"value", l.label(s.value)}});
  return stages;
}

std::vector<std::string> labels_of(const FiniteLattice& l, const std::vector<ElementId>& ids) {
  std::vector<std::string> out;
  for (ElementId x : ids) out.push_back(l.label(x));
  return out;
}

void run_lattice(const LatticeScenario& sc, const RunOptions& opt, RunReport& r) {
  const FiniteLattice l = sc.source.build();
  const MonotoneOp f = verified_op(l, sc.op);
  const std::uint64_t budget = opt.budget_steps.value_or(1000);
  const auto fps = fixed_points(l, f);
  Json checks = Json::object();
  Json trace = Json::object();
  trace["fixed_points"] = labels_of(l, fps);

  const bool greatest = sc.mode == LatticeMode::kGfp;
  const FiniteLattice iter_lattice = greatest ? l.dual() : l;
  const MonotoneOp g = verified_op(iter_lattice, sc.op);
  const auto t = run_finite(LatticeDomain{&iter_lattice, &g}, budget);
  trace["stages"] = lattice_stages(l, t);
  if (!t.theta) {
    r.verdict = Verdict::kDiverged;
    r.json["verdict"] = {{"status", "diverged"}, {"exhausted", "steps"}, {"steps", t.diverged->steps}};
    r.json["trace"] = trace;
    r.json["checks"] = checks;
    return;
  }
  trace["fixed_value"] = l.label(*t.fixed_value);
  r.json["verdict"] = fixed_verdict(*t.theta);
  checks["verify_fixed"] = verify_fixed(LatticeDomain{&iter_lattice, &g}, t);
  const ElementId x = *t.fixed_value;
  checks[greatest ? "greatest" : "least"] = std::all_of(fps.begin(), fps.end(), [&](ElementId y) {
    return greatest ? l.leq(y, x) : l.leq(x, y);
  });
  checks["stage_within_height"] = *t.theta <= Ordinal::natural(l.height());
  if (sc.mode == LatticeMode::kAllFixedPoints) {
    checks["nonempty"] = !fps.empty();
    trace["greatest"] = l.label(gfp(l, f).element);
  }
  r.json["trace"] = trace;
  r.json["checks"] = checks;
}

void run_ordinal(const OrdinalScenario& sc, RunReport& r) {
  const OrdinalStepOperator op(sc.regions, sc.start);
  const auto t = run_transfinite(op, sc.budget);
  Json stages = Json::array();
  for (const auto& s : t.stages) stages.push_back({{"stage", s.stage.to_string()}, {"value", s.value.to_string()}});
  Json trace = {{"stages", stages}, {"potentially_divergent", t.potentially_divergent}};
  Json checks = Json::object();
  if (t.theta) {
    r.json["verdict"] = fixed_verdict(*t.theta);
    trace["fixed_value"] = t.fixed_value->to_string();
    checks["verify_fixed"] = verify_fixed(OrdinalDomain{&op}, t);
  } else {
    r.verdict = Verdict::kDiverged;
    const Divergence& d = *t.diverged;
    r.json["verdict"] = {{"status", "diverged"},
                         {"exhausted", d.exhausted == Divergence::Exhausted::kSteps ? "steps" : "jumps"},
                         {"steps", d.steps},
                         {"jumps", d.jumps},
                         {"stage", d.stage.to_string()}};
  }
  r.json["trace"] = trace;
  r.json["checks"] = checks;
}

void run_algebra(const AlgebraScenario& sc, RunReport& r) {
  const auto result = initial_algebra(sc.functor, sc.budget);
  Json checks = Json::object();
  if (const auto* init = std::get_if<InitialAlgebra>(&result)) {
    const Algebra& alg = init->algebra;
    Json carrier = Json::array();
    for (const Element& e : alg.carrier.elements()) carrier.push_back(e.to_string());
    const FinSet fx = apply_functor(sc.functor, alg.carrier);
    Json structure = Json::array();
    for (std::size_t i = 0; i < fx.size(); ++i) {
      structure.push_back({fx[i].to_string(), alg.carrier[alg.structure(i)].to_string()});
    }
    r.json["verdict"] = fixed_verdict(Ordinal::natural(init->theta));
    r.json["trace"] = {{"sizes", init->sizes}, {"carrier", carrier}, {"structure", structure}};
    checks["lambek"] = lambek_check(sc.functor, alg);
    if (alg.carrier.size() <= kMaxHomSourceSize && alg.carrier.size() <= kMaxHomTargetSize) {
      const auto self = unique_homomorphism(sc.functor, alg, alg);
      checks["unique_endomorphism"] =
          std::holds_alternative<FinMap>(self) && std::get<FinMap>(self) == FinMap::identity(alg.carrier.size());
    }
  } else {
    const auto& div = std::get<DivergenceReport>(result);
    r.verdict = Verdict::kDiverged;
    r.json["verdict"] = {{"status", "diverged"}, {"reason", div.reason}};
    r.json["trace"] = {{"growth", div.growth}};
  }
  r.json["checks"] = checks;
}

Json valuation_json(const SentenceSystem& sys, const PartialValuation& v) {
  Json j = Json::object();
  for (std::size_t i = 0; i < v.size(); ++i) j[sys.names()[i]] = std::string(1, truth_char(v[i]));
  return j;
}

void run_kripke(const KripkeScenario& sc, RunReport& r) {
  const SentenceSystem& sys = sc.system;
  const auto fp = minimal_fixed_point(sys);
  Json stages = Json::array();
  for (std::size_t n = 0; n < fp.chain.size(); ++n) {
    stages.push_back({{"stage", std::to_string(n)}, {"value", valuation_json(sys, fp.chain[n])}});
  }
  Json classification = Json::object();
  for (const auto& [name, g] : classify(sys)) classification[name] = to_string(g);
  r.json["verdict"] = fixed_verdict(Ordinal::natural(fp.stage));
  r.json["trace"] = {{"stages", stages}, {"fixed_value", valuation_json(sys, fp.valuation)},
                     {"classification", classification}};
  Json checks = Json::object();
  checks["fixed"] = jump(sys, fp.valuation) == fp.valuation;
  bool increasing = true;
  for (std::size_t n = 0; n + 1 < fp.chain.size(); ++n) increasing = increasing && info_leq(fp.chain[n], fp.chain[n + 1]);
  checks["increasing"] = increasing;
  checks["stage_within_size"] = fp.stage <= sys.size();
  if (sys.size() <= 8) {
    // Below every fixed point: exhaustive over all 3^k valuations.
    bool minimal = true;
    PartialValuation v(sys.size(), Truth::kUndefined);
    for (bool more = true; more && minimal;) {
      if (jump(sys, v) == v) minimal = info_leq(fp.valuation, v);
      more = false;
      for (std::size_t i = 0; i < v.size() && !more; ++i) {
        v[i] = v[i] == Truth::kUndefined ? Truth::kTrue : v[i] == Truth::kTrue ? Truth::kFalse : Truth::kUndefined;
        more = v[i] != Truth::kUndefined;
      }
    }
    checks["minimal"] = minimal;
  }
  r.json["checks"] = checks;
}

EnumerationBounds bounds_from(const RunOptions& opt) {
  EnumerationBounds b;
  if (opt.max_stages) b.max_stages = *opt.max_stages;
  return b;
}

Json assumptions_json(const ReflectiveGameSpec& spec, const RunOptions& opt) {
  try {
    const AssumptionReport a = check_assumptions(spec, bounds_from(opt));
    return {{"kind", "sufficient-condition check"},
            {"continuity_of_payoffs", a.continuity_of_payoffs},
            {"monotone_best_response", a.monotone_best_response},
            {"finitary_local", a.finitary_local},
            {"witnesses", a.witnesses}};
  } catch (const CapExceeded& e) {
    return {{"kind", "skipped"}, {"reason", e.what()}};
  }
}

void run_game(const GameScenario& sc, const RunOptions& opt, RunReport& r) {
  const ReflectiveGameSpec& spec = sc.spec;
  const StitchResult res = stitch_equilibrium(spec);
  Json trace = Json::object();
  trace["assumptions"] = assumptions_json(spec, opt);
  Json checks = Json::object();
  if (const auto* failure = std::get_if<StitchFailure>(&res)) {
    r.verdict = Verdict::kFailure;
    r.json["verdict"] = {{"status", "failure"}, {"stage", failure->stage}, {"reason", failure->reason}};
  } else {
    const auto& eq = std::get<ReflectiveEquilibrium>(res);
    Json stages = Json::array();
    for (std::size_t a = 0; a < eq.profiles.size(); ++a) {
      stages.push_back({{"stage", std::to_string(a)},
                        {"profile", spec.stages[a].describe(eq.profiles[a])},
                        {"value", eq.outcomes[a]}});
    }
    trace["stages"] = stages;
    trace["fixed_value"] = eq.final_outcome;
    r.json["verdict"] = fixed_verdict(Ordinal::natural(stabilization_stage(eq)));
    checks["coherent"] = eq.coherent;
    checks["verified"] = !verify_equilibrium(spec, eq).has_value();
  }
  r.json["trace"] = trace;
  r.json["checks"] = checks;
}

void run_correspondence(const CorrespondenceScenario& sc, RunReport& r) {
  const FiniteLattice l = sc.source.build();
  const MonotoneOp f = verified_op(l, sc.op);
  const CorrespondenceResult res = correspondence_check(l, f);
  Json stages = Json::array();
  for (std::size_t a = 0; a < res.game_states.size(); ++a) {
    stages.push_back({{"stage", std::to_string(a)},
                      {"value", l.label(res.game_states[a])},
                      {"lattice", a < res.lattice_sequence.size() ? l.label(res.lattice_sequence[a]) : ""}});
  }
  Json trace = {{"stages", stages},
                {"game_states", labels_of(l, res.game_states)},
                {"lattice_sequence", labels_of(l, res.lattice_sequence)}};
  if (res.ok) {
    trace["fixed_value"] = l.label(res.game_states.back());
    r.json["verdict"] = fixed_verdict(Ordinal::natural(res.game_states.size() - 1));
  } else {
    r.verdict = Verdict::kFailure;
    r.json["verdict"] = {{"status", "failure"}, {"reason", res.diagnostics}};
  }
  r.json["trace"] = trace;
  r.json["checks"] = {{"correspondence", res.ok}};
}

/// Budget overrides are folded into the scenario so the embedded copy
/// reproduces the run.
Scenario with_overrides(Scenario s, const RunOptions& opt) {
  if (auto* o = std::get_if<OrdinalScenario>(&s.body)) {
    if (opt.budget_steps) o->budget.max_finite_steps = *opt.budget_steps;
    if (opt.budget_jumps) o->budget.max_limit_jumps = *opt.budget_jumps;
  } else if (auto* a = std::get_if<AlgebraScenario>(&s.body)) {
    if (opt.budget_steps) a->budget = *opt.budget_steps;
  }
  return s;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string cell_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object()) {
    std::string out;
    for (const auto& [k, v] : j.items()) {
      if (!out.empty()) out += ' ';
      out += k + "=" + cell_text(v);
    }
    return out;
  }
  return j.dump();
}

}  // namespace

RunReport run_scenario(const Scenario& input, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const Scenario s = with_overrides(input, options);
  RunReport r;
  r.json = Json::object();
  r.json["id"] = s.id;
  r.json["kind"] = s.kind();
  r.json["scenario"] = to_json(s);
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, LatticeScenario>) {
          run_lattice(body, options, r);
        } else if constexpr (std::is_same_v<T, OrdinalScenario>) {
          run_ordinal(body, r);
        } else if constexpr (std::is_same_v<T, AlgebraScenario>) {
          run_algebra(body, r);
        } else if constexpr (std::is_same_v<T, KripkeScenario>) {
          run_kripke(body, r);
        } else if constexpr (std::is_same_v<T, GameScenario>) {
          run_game(body, options, r);
        } else {
          run_correspondence(body, r);
        }
      },
      s.body);
  if (options.timing) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    r.json["timing_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  return r;
}

std::string format_text(const Json& report) {
  std::ostringstream out;
  const std::string kind = report.value("kind", "");
  const std::string id = report.value("id", "");
  out << "scenario " << (id.empty() ? "(unnamed)" : id) << " [" << kind << "]\n";
  const Json& trace = report.at("trace");
  if (trace.contains("stages") && !trace["stages"].empty()) {
    std::vector<std::string> columns{"stage"};
    if (kind == "reflective-game") columns.push_back("profile");
    columns.push_back(kind == "reflective-game" ? "outcome" : "value");
    if (kind == "correspondence") columns.push_back("lattice");
    std::vector<std::vector<std::string>> rows;
    for (const Json& s : trace["stages"]) {
      std::vector<std::string> row{s.at("stage").get<std::string>()};
      if (kind == "reflective-game") row.push_back(s.at("profile").get<std::string>());
      row.push_back(cell_text(s.at("value")));
      if (kind == "correspondence") row.push_back(s.at("lattice").get<std::string>());
      rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      width[c] = columns[c].size();
      for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }
    auto emit = [&](const std::vector<std::string>& row) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) line += (c ? "  " : "") + (c + 1 < row.size() ? pad(row[c], width[c]) : row[c]);
      out << line << "\n";
    };
    emit(columns);
    for (const auto& row : rows) emit(row);
  }
  if (trace.contains("growth")) {
    out << "growth:";
    for (const Json& n : trace["growth"]) out << ' ' << n.dump();
    out << "\n";
  }
  if (trace.contains("sizes")) {
    out << "sizes:";
    for (const Json& n : trace["sizes"]) out << ' ' << n.dump();
    out << "\n";
  }

  const Json& verdict = report.at("verdict");
  const std::string status = verdict.at("status");
  if (status == "fixed") {
    out << "theta = " << verdict.at("theta").get<std::string>() << "\n";
    if (trace.contains("fixed_value")) out << "value = " << cell_text(trace["fixed_value"]) << "\n";
  } else if (status == "diverged") {
    out << "diverged:";
    if (verdict.contains("exhausted")) {
      out << " " << verdict["exhausted"].get<std::string>() << " budget exhausted";
      if (verdict.contains("stage")) out << " at stage " << verdict["stage"].get<std::string>();
    }
    if (verdict.contains("reason")) out << " " << verdict["reason"].get<std::string>();
    out << "\n";
  } else {
    out << "failure";
    if (verdict.contains("stage")) out << " at stage " << verdict["stage"].dump();
    out << ": " << verdict.value("reason", "") << "\n";
  }

  if (trace.contains("classification")) {
    for (const auto& [name, g] : trace["classification"].items()) out << name << ": " << g.get<std::string>() << "\n";
  }
  if (kind == "lattice-lfp" && report.at("scenario").value("mode", "") == "all-fixed-points") {
    out << "fixed points:";
    for (const Json& x : trace["fixed_points"]) out << ' ' << x.get<std::string>();
    out << "\n";
  }
  if (trace.contains("assumptions") && trace["assumptions"].value("kind", "") != "skipped") {
    const Json& a = trace["assumptions"];
    auto yn = [](const Json& b) { return b.get<bool>() ? "yes" : "no"; };
    out << "assumptions (sufficient-condition check): continuity " << yn(a["continuity_of_payoffs"])
        << ", monotone best response " << yn(a["monotone_best_response"]) << ", finitary " << yn(a["finitary_local"])
        << "\n";
    for (const Json& w : a["witnesses"]) out << "  " << w.get<std::string>() << "\n";
  }
  if (kind == "correspondence") {
    out << "correspondence: " << (report["checks"].value("correspondence", false) ? "OK" : "FAILED") << "\n";
  }
  for (const auto& [name, ok] : report.at("checks").items()) {
    if (name == "correspondence") continue;
    out << "check " << name << ": " << (ok.get<bool>() ? "ok" : "FAILED") << "\n";
  }
  if (report.contains("timing_ms")) out << "time: " << report["timing_ms"].dump() << " ms\n";
  return out.str();
}

namespace {

Ordinal stage_of(const Json& s) { return Ordinal::parse(s.at("stage").get<std::string>()); }

/// Re-checks a recorded trace against the scenario's operator.
std::optional<std::string> structural_check(const Scenario& s, const Json& report) {
  const Json& verdict = report.at("verdict");
  if (verdict.at("status") != "fixed") return std::nullopt;
  const Json& trace = report.at("trace");
  const Ordinal theta = Ordinal::parse(verdict.at("theta").get<std::string>());
  if (const auto* o = std::get_if<OrdinalScenario>(&s.body)) {
    const OrdinalStepOperator op(o->regions, o->start);
    TransfiniteTrace<Ordinal> t;
    for (const Json& st : trace.at("stages")) t.stages.push_back({stage_of(st), Ordinal::parse(st.at("value").get<std::string>())});
    t.theta = theta;
    t.fixed_value = Ordinal::parse(trace.at("fixed_value").get<std::string>());
    if (!verify_fixed(OrdinalDomain{&op}, t)) return "recorded trace fails verify_fixed";
  } else if (const auto* lsc = std::get_if<LatticeScenario>(&s.body)) {
    const FiniteLattice base = lsc->source.build();
    const FiniteLattice l = lsc->mode == LatticeMode::kGfp ? base.dual() : base;
    MonotoneOp f(lsc->op);
    if (!check_monotone(l, f)) return "operator is not monotone";
    TransfiniteTrace<ElementId> t;
    auto id = [&](const Json& label) {
      auto x = l.find(label.get<std::string>());
      if (!x) throw ParseError(kModule, "trace names unknown element " + label.dump());
      return *x;
    };
    for (const Json& st : trace.at("stages")) t.stages.push_back({stage_of(st), id(st.at("value"))});
    t.theta = theta;
    t.fixed_value = id(trace.at("fixed_value"));
    if (!verify_fixed(LatticeDomain{&l, &f}, t)) return "recorded trace fails verify_fixed";
  }
  return std::nullopt;
}

void compare_field(const Json& claimed, const Json& fresh, const std::string& key, VerifyResult& v) {
  if (!claimed.contains(key)) {
    v.problems.push_back("report has no " + key);
    return;
  }
  if (claimed[key] == fresh[key]) return;
  const Json patch = Json::diff(claimed[key], fresh[key]);
  const std::string where = patch.empty() ? "" : patch[0].value("path", "");
  v.problems.push_back(key + where + " differs from the recomputed value");
}

}  // namespace

VerifyResult verify_document(const Json& doc, const RunOptions& options) {
  VerifyResult v;
  const bool is_report = doc.is_object() && doc.contains("verdict") && doc.contains("scenario");
  const Scenario s = parse_scenario(is_report ? doc["scenario"] : doc);
  const RunReport fresh = run_scenario(s, is_report ? RunOptions{} : options);
  if (is_report) {
    if (doc.value("kind", "") != fresh.json["kind"]) v.problems.push_back("kind does not match the embedded scenario");
    for (const char* key : {"verdict", "trace", "checks"}) compare_field(doc, fresh.json, key, v);
    try {
      if (auto problem = structural_check(s, doc)) v.problems.push_back(*problem);
    } catch (const std::exception& e) {
      v.problems.push_back(std::string("malformed trace: ") + e.what());
    }
  }
  for (const auto& [name, ok] : fresh.json["checks"].items()) {
    if (!ok.get<bool>()) v.problems.push_back("check " + name + " fails");
  }
  v.ok = v.problems.empty();
  return v;
}

Json enumerate_scenario(const Scenario& s, const RunOptions& options) {
  ReflectiveGameSpec spec;
  if (const auto* g = std::get_if<GameScenario>(&s.body)) {
    spec = g->spec;
  } else if (const auto* c = std::get_if<CorrespondenceScenario>(&s.body)) {
    const FiniteLattice l = c->source.build();
    const MonotoneOp f = verified_op(l, c->op);
    spec = alignment_game(l, f, std::max<std::size_t>(lfp(l, f).stage, 1));
  } else {
    throw PreconditionViolation(kModule, "enumerate needs a reflective-game or correspondence scenario, got " + s.kind());
  }
  const auto eqs = enumerate_reflective_equilibria(spec, bounds_from(options));
  Json list = Json::array();
  for (const auto& eq : eqs) {
    std::vector<std::string> profiles;
    for (std::size_t a = 0; a < eq.profiles.size(); ++a) profiles.push_back(spec.stages[a].describe(eq.profiles[a]));
    list.push_back({{"profiles", profiles}, {"outcomes", eq.outcomes}, {"final_outcome", eq.final_outcome}});
  }
  const bool unique = std::all_of(eqs.begin(), eqs.end(), [&](const auto& e) { return e.outcomes == eqs.front().outcomes; });
  return {{"id", s.id},
          {"kind", s.kind()},
          {"count", eqs.size()},
          {"equilibria", list},
          {"unique_outcome_sequence", !eqs.empty() && unique},
          {"assumptions", assumptions_json(spec, options)}};
}

}  // namespace transfix
