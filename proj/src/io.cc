// SPDX-License-Identifier: Apache-2.0

#include "bcd/io.h"

#include <fstream>
#include <sstream>

namespace bcd {
namespace {

const Json& Field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw FormatError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

const Json& Array(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  return j;
}

Matrix MatrixFromJson(const Json& j) {
  Matrix out;
  for (const Json& row : Array(j, "matrix")) out.push_back(VectorFromJson(row));
  return out;
}

Json MatrixJson(const Matrix& a) {
  Json out = Json::array();
  for (const Vector& row : a) out.push_back(ToJson(row));
  return out;
}

Json IntArray(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x);
  return out;
}

Json SqrtJson(const SqrtValue& s) {
  return Json{{"value", ToJson(s.value)}, {"exact", s.exact}, {"error_bound", ToJson(s.error_bound)}};
}

}  // namespace

Json ToJson(const Rational& x) { return ToString(x); }

Json ToJson(const Vector& v) {
  Json out = Json::array();
  for (const Rational& x : v) out.push_back(ToString(x));
  return out;
}

Json ToJson(const MultiParamInstance& instance) {
  Json j;
  j["kind"] = "multi";
  j["rewards"] = ToJson(instance.rewards);
  if (!instance.type_labels.empty()) {
    j["type_labels"] = instance.type_labels;
  }
  Json transitions = Json::array();
  for (const Matrix& F : instance.transitions) transitions.push_back(MatrixJson(F));
  j["transitions"] = std::move(transitions);
  j["costs"] = MatrixJson(instance.costs);
  j["prior"] = ToJson(instance.prior);
  return j;
}

Json ToJson(const SingleParamInstance& instance) {
  Json j;
  j["kind"] = "single";
  j["rewards"] = ToJson(instance.rewards);
  j["transitions"] = MatrixJson(instance.transitions);
  j["costs"] = ToJson(instance.unit_costs);
  j["types"] = ToJson(instance.types);
  j["prior"] = ToJson(instance.prior);
  return j;
}

Json ToJson(const AnyInstance& instance) {
  return std::visit([](const auto& x) { return ToJson(x); }, instance);
}

Json ToJson(const Menu& menu) {
  Json contracts = Json::array();
  for (const Contract& c : menu.contracts) {
    contracts.push_back(
        Json{{"payments", ToJson(c.payments)}, {"limited_liability", c.limited_liability}});
  }
  return Json{{"contracts", std::move(contracts)}, {"actions", IntArray(menu.actions)}};
}

Json ToJson(const RandomizedMenu& menu) {
  Json contracts = Json::array();
  for (const auto& per_type : menu.contracts) contracts.push_back(MatrixJson(per_type));
  return Json{{"probabilities", MatrixJson(menu.probabilities)}, {"contracts", std::move(contracts)}};
}

Json ToJson(const IcCertificate& c) {
  Json violations = Json::array();
  for (const IcViolation& v : c.violations) {
    violations.push_back(Json{{"type", v.type},
                              {"reported", v.reported},
                              {"action", v.action},
                              {"deficit", ToJson(v.deficit)}});
  }
  return Json{{"passed", c.passed},
              {"slack", ToJson(c.slack)},
              {"constant_menu", c.constant_menu},
              {"constraints_checked", c.constraints_checked},
              {"misreport_constraints_checked", c.misreport_constraints_checked},
              {"ir_constraints_checked", c.ir_constraints_checked},
              {"tie_break", c.tie_break},
              {"violations", std::move(violations)}};
}

Json ToJson(const SolveReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["objective"] = ToJson(r.objective);
  j["objective_decimal"] = ToDecimal(r.objective);
  j["profile"] = IntArray(r.profile);
  j["menu"] = ToJson(r.menu);
  if (r.randomized) j["randomized"] = ToJson(*r.randomized);
  j["agent_utility"] = ToJson(r.agent_utility);
  j["principal_utility"] = ToJson(r.principal_utility);
  j["lps_solved"] = r.lps_solved;
  j["infeasible_profiles"] = r.infeasible_profiles;
  j["duality_checked"] = r.duality_checked;
  j["certificate"] = ToJson(r.certificate);
  return j;
}

Json ToJson(const ReductionMap& map) {
  const ReductionParams& p = map.params;
  return Json{{"n", map.n},
              {"m", map.m},
              {"K", map.K},
              {"epsilon", ToJson(p.epsilon)},
              {"l", p.l},
              {"alpha", ToJson(p.alpha)},
              {"H", ToJson(p.H)},
              {"mu_min", ToJson(p.mu_min)},
              {"dummy_action", map.dummy_action},
              {"dummy_outcome", map.dummy_outcome},
              {"extra_type", map.extra_type},
              {"extra_type_value", ToJson(map.extra_type_value)},
              {"type_values", ToJson(map.type_values)}};
}

Json ToJson(const LiftTrace& t) {
  Json j;
  j["direction"] = t.direction;
  if (t.direction == "forward") {
    j["case"] = ForwardCaseName(t.forward_case);
    if (t.blowup_type >= 0) {
      j["blowup"] = Json{{"type", t.blowup_type},
                         {"reported", t.blowup_reported},
                         {"action", t.blowup_action}};
    }
  } else {
    j["case"] = BackwardCaseName(t.backward_case);
    j["theta_hat"] = IntArray(t.theta_hat);
    j["theta_hat_1"] = IntArray(t.theta_hat_1);
    j["theta_hat_2"] = IntArray(t.theta_hat_2);
    j["reassigned_contract"] = IntArray(t.reassigned_contract);
    j["repair_choice"] = IntArray(t.repair_choice);
    j["repair_blend"] = ToJson(t.repair_blend);
  }
  j["eta"] = ToJson(t.eta);
  j["gamma"] = ToJson(t.gamma);
  j["delta"] = ToJson(t.delta);
  j["sqrt_epsilon"] = SqrtJson(t.sqrt_epsilon);
  j["sqrt_delta"] = SqrtJson(t.sqrt_delta);
  j["nu"] = ToJson(t.nu);
  j["utility_single"] = ToJson(t.utility_single);
  j["utility_multi"] = ToJson(t.utility_multi);
  j["bound"] = ToJson(t.bound);
  j["bound_holds"] = t.bound_holds;
  if (t.direction == "backward" && t.backward_case == BackwardCase::kPipeline) {
    j["breve"] = ToJson(t.breve);
    j["breve_star"] = ToJson(t.breve_star);
    j["hat_star"] = ToJson(t.hat_star);
  }
  j["output_certificate"] = ToJson(t.output_certificate);
  return j;
}

Json ToJson(const BackwardDiagnostics& d) {
  Json predicates = Json::array();
  for (const PredicateResult& p : d.predicates) {
    predicates.push_back(
        Json{{"name", p.name}, {"passed", p.passed}, {"slack", ToJson(p.slack)}});
  }
  return Json{{"precondition", d.precondition},
              {"vacuous", d.vacuous},
              {"contradiction", d.contradiction},
              {"predicates", std::move(predicates)}};
}

Json ToJson(const std::vector<Violation>& violations) {
  Json out = Json::array();
  for (const Violation& v : violations) {
    out.push_back(Json{{"field", v.field},
                       {"message", v.message},
                       {"severity", v.warning ? "warning" : "error"}});
  }
  return out;
}

Json ToJson(const UnrestrictedDiagnostics& d) {
  Json j{{"best_responses_match", d.best_responses_match},
         {"individually_rational", d.individually_rational},
         {"welfare_identity", d.welfare_identity},
         {"virtual_welfare", ToJson(d.virtual_welfare)}};
  if (d.randomized_checked) {
    j["dominates_randomized"] = d.dominates_randomized;
    j["randomized_value"] = ToJson(d.randomized_value);
  }
  j["messages"] = d.messages;
  return j;
}

Rational RationalFromJson(const Json& j) {
  if (!j.is_string()) {
    throw FormatError("numbers must be strings \"p/q\", got " + j.dump());
  }
  try {
    return ParseRational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Vector VectorFromJson(const Json& j) {
  Vector out;
  for (const Json& x : Array(j, "vector")) out.push_back(RationalFromJson(x));
  return out;
}

AnyInstance InstanceFromJson(const Json& j) {
  const Json& kind = Field(j, "kind");
  if (kind == "multi") {
    MultiParamInstance inst;
    inst.rewards = VectorFromJson(Field(j, "rewards"));
    if (j.contains("type_labels")) {
      for (const Json& s : Array(j.at("type_labels"), "type_labels")) {
        if (!s.is_string()) throw FormatError("type labels must be strings");
        inst.type_labels.push_back(s.get<std::string>());
      }
    }
    for (const Json& F : Array(Field(j, "transitions"), "transitions")) {
      inst.transitions.push_back(MatrixFromJson(F));
    }
    inst.costs = MatrixFromJson(Field(j, "costs"));
    inst.prior = VectorFromJson(Field(j, "prior"));
    return inst;
  }
  if (kind == "single") {
    SingleParamInstance inst;
    inst.rewards = VectorFromJson(Field(j, "rewards"));
    inst.transitions = MatrixFromJson(Field(j, "transitions"));
    inst.unit_costs = VectorFromJson(Field(j, "costs"));
    inst.types = VectorFromJson(Field(j, "types"));
    inst.prior = VectorFromJson(Field(j, "prior"));
    return inst;
  }
  throw FormatError("kind must be \"multi\" or \"single\"");
}

Menu MenuFromJson(const Json& j) {
  const Json& doc = j.contains("menu") ? j.at("menu") : j;
  Menu menu;
  for (const Json& c : Array(Field(doc, "contracts"), "contracts")) {
    Contract contract;
    if (c.is_array()) {
      contract.payments = VectorFromJson(c);
    } else {
      contract.payments = VectorFromJson(Field(c, "payments"));
      if (c.contains("limited_liability")) {
        if (!c.at("limited_liability").is_boolean()) {
          throw FormatError("limited_liability must be a boolean");
        }
        contract.limited_liability = c.at("limited_liability").get<bool>();
      }
    }
    menu.contracts.push_back(std::move(contract));
  }
  for (const Json& a : Array(Field(doc, "actions"), "actions")) {
    if (!a.is_number_integer()) throw FormatError("actions must be integers");
    menu.actions.push_back(a.get<int>());
  }
  return menu;
}

std::string ExactAndDecimal(const Rational& x) {
  return ToString(x) + " (" + ToDecimal(x) + ")";
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << Dump(j);
}

}  // namespace bcd
