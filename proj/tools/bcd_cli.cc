// SPDX-License-Identifier: Apache-2.0
//
// bcd: command-line front end.
//
// Exit codes: 0 success, 1 invalid input or failed IC check, 2 LP budget
// exceeded, 3 a theoretical guarantee failed on this input.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bcd/agent.h"
#include "bcd/gap.h"
#include "bcd/io.h"
#include "bcd/lifting.h"
#include "bcd/reduction.h"
#include "bcd/solvers.h"
#include "bcd/unrestricted.h"

namespace {

using namespace bcd;  // NOLINT

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kBudget = 2;
constexpr int kTheory = 3;

struct Flags {
  std::string instance;
  std::string menu;
  std::string output;
  std::string epsilon = "1/400";
  std::string eta = "0";
  std::string ironing = "mass";
  std::string menu_output;
  bool require_square = true;
  bool no_liability = false;
  bool single = false;
  bool pad_even = false;
  bool assume_precondition = false;
  int workers = 1;
  int n = 3;
};

class Exit : public std::exception {
 public:
  explicit Exit(int code) : code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

[[noreturn]] void Fail(int code, const std::string& message) {
  std::cerr << "bcd: " << message << "\n";
  throw Exit(code);
}

// Summary lines go to stdout when the document goes to a file, otherwise to
// stderr so that stdout stays valid JSON.
std::ostream& Summary(const Flags& f) { return f.output.empty() ? std::cerr : std::cout; }

void Emit(const Flags& f, const Json& doc) {
  if (f.output.empty()) {
    std::cout << Dump(doc);
  } else {
    WriteJsonFile(f.output, doc);
  }
}

SolverOptions Options(const Flags& f) {
  SolverOptions o;
  o.workers = f.workers;
  o.limited_liability = !f.no_liability;
  if (const char* env = std::getenv("BCD_LP_BUDGET")) {
    try {
      o.lp_budget = std::stoll(env);
    } catch (const std::exception&) {
      Fail(kInvalid, std::string("BCD_LP_BUDGET is not an integer: ") + env);
    }
  }
  return o;
}

AnyInstance LoadInstance(const Flags& f) {
  AnyInstance inst = InstanceFromJson(ReadJsonFile(f.instance));
  std::vector<Violation> v = std::visit([](const auto& x) { return Validate(x); }, inst);
  for (const Violation& x : v) {
    std::cerr << (x.warning ? "warning: " : "error: ") << x.field << ": " << x.message << "\n";
  }
  if (HasErrors(v)) Fail(kInvalid, "instance fails validation");
  return inst;
}

MultiParamInstance LoadMulti(const Flags& f) {
  AnyInstance inst = LoadInstance(f);
  if (!std::holds_alternative<MultiParamInstance>(inst)) {
    Fail(kInvalid, "this command needs a multi-parameter instance");
  }
  return std::get<MultiParamInstance>(inst);
}

Rational Epsilon(const Flags& f) {
  Rational eps;
  try {
    eps = ParseRational(f.epsilon);
  } catch (const std::invalid_argument& e) {
    Fail(kInvalid, e.what());
  }
  if (sgn(eps) <= 0) Fail(kInvalid, "epsilon must be positive");
  Rational root;
  if (f.require_square && !ExactSqrt(eps, &root)) {
    Fail(kInvalid, "epsilon " + ToString(eps) +
                       " is not the square of a rational (pass --no-require-square to allow)");
  }
  return eps;
}

void PrintObjective(const Flags& f, const char* label, const Rational& x) {
  Summary(f) << label << ": " << ExactAndDecimal(x) << "\n";
}

int RunSolve(const Flags& f, const std::string& which) {
  AnyInstance inst = LoadInstance(f);
  SolverOptions opt = Options(f);
  SolveReport report;
  Json extra;
  if (which == "randomized" || which == "unrestricted") {
    if (!std::holds_alternative<SingleParamInstance>(inst)) {
      Fail(kInvalid, "solve-" + which + " needs a single-parameter instance");
    }
    const auto& s = std::get<SingleParamInstance>(inst);
    if (which == "randomized") {
      report = SolveRandomizedMenu(s, opt);
    } else {
      UnrestrictedOptions uo;
      uo.ironing = f.ironing == "index" ? IroningMode::kIndexWeighted : IroningMode::kMassWeighted;
      UnrestrictedDiagnostics diag;
      try {
        report = SolveUnrestricted(s, uo, &diag);
      } catch (const RankDeficient& e) {
        Fail(kInvalid, e.what());
      }
      extra = ToJson(diag);
      if (!diag.ok()) {
        Json doc = ToJson(report);
        doc["diagnostics"] = extra;
        Emit(f, doc);
        for (const std::string& m : diag.messages) std::cerr << "theory violation: " << m << "\n";
        throw Exit(kTheory);
      }
    }
  } else {
    InstanceView view = std::visit([](const auto& x) { return InstanceView(x); }, inst);
    report = which == "menu" ? SolveOptimalMenu(view, opt) : SolveOptimalSingle(view, opt);
  }
  Json doc = ToJson(report);
  if (!extra.is_null()) doc["diagnostics"] = extra;
  Emit(f, doc);
  PrintObjective(f, "objective", report.objective);
  if (!report.duality_checked || !report.certificate.passed) {
    Fail(kTheory, "solution failed its optimality or IC certificate");
  }
  return kOk;
}

int RunValidate(const Flags& f) {
  AnyInstance inst = InstanceFromJson(ReadJsonFile(f.instance));
  std::vector<Violation> v = std::visit([](const auto& x) { return Validate(x); }, inst);
  Emit(f, Json{{"valid", !HasErrors(v)}, {"violations", ToJson(v)}});
  return HasErrors(v) ? kInvalid : kOk;
}

int RunReduce(const Flags& f) {
  MultiParamInstance multi = LoadMulti(f);
  Reduction r = Reduce(multi, Epsilon(f));
  Json doc = ToJson(r.instance);
  doc["reduction"] = ToJson(r.map);
  RegularityReport reg = CheckRegularity(r.instance);
  doc["regular"] = reg.regular;
  Emit(f, doc);
  Summary(f) << "reduced: " << r.instance.num_outcomes() << " outcomes, "
             << r.instance.num_actions() << " actions, " << r.instance.num_types()
             << " types, l = " << r.map.params.l << "\n";
  return kOk;
}

int RunLift(const Flags& f, bool forward) {
  MultiParamInstance multi = LoadMulti(f);
  Reduction r = Reduce(multi, Epsilon(f));
  Menu menu = MenuFromJson(ReadJsonFile(f.menu));
  LiftResult res;
  try {
    res = forward ? LiftForward(multi, r, menu) : LiftBackward(multi, r, menu);
  } catch (const IcRejected& e) {
    Emit(f, Json{{"error", e.what()}, {"certificate", ToJson(e.certificate())}});
    Fail(kInvalid, e.what());
  }
  Emit(f, Json{{"menu", ToJson(res.menu)}, {"trace", ToJson(res.trace)}});
  PrintObjective(f, "reduced-side utility", res.trace.utility_single);
  PrintObjective(f, "original-side utility", res.trace.utility_multi);
  PrintObjective(f, "bound", res.trace.bound);
  if (!res.trace.bound_holds || !res.trace.output_certificate.passed) {
    Fail(kTheory, "lifted menu breaks the lifting inequality or IC");
  }
  return kOk;
}

int RunExactRecover(const Flags& f) {
  MultiParamInstance multi = LoadMulti(f);
  Reduction r = Reduce(multi, Epsilon(f));
  SolverOptions opt = Options(f);
  InstanceView vs(r.instance);
  SolveReport reduced = f.single ? SolveOptimalSingle(vs, opt) : SolveOptimalMenu(vs, opt);
  ExactRecovery rec = ExactRecover(multi, r, reduced.menu, f.single, opt);
  SolveReport report;
  report.kind = f.single ? "single" : "menu";
  report.menu = rec.menu;
  report.objective = rec.value;
  report.profile = rec.profile;
  FillMenuReport(InstanceView(multi), &report);
  Json doc = ToJson(report);
  doc["reduced_objective"] = ToJson(reduced.objective);
  doc["trace"] = ToJson(rec.backward.trace);
  Emit(f, doc);
  PrintObjective(f, "reduced objective", reduced.objective);
  PrintObjective(f, "objective", rec.value);
  if (!report.certificate.passed) Fail(kTheory, "recovered menu is not IC");
  return kOk;
}

int RunGap(const Flags& f) {
  GapParams gp;
  SingleParamInstance inst;
  try {
    inst = BuildGapInstance(f.n, f.pad_even, &gp);
  } catch (const std::invalid_argument& e) {
    Fail(kInvalid, e.what());
  }
  Json doc = ToJson(inst);
  doc["gap"] = Json{{"n", gp.n}, {"n_bar", gp.n_bar}, {"l", gp.l},
                    {"C", ToJson(gp.C)}, {"padded", gp.padded}};
  Emit(f, doc);
  if (!f.menu_output.empty()) WriteJsonFile(f.menu_output, ToJson(BuildGapMenu(f.n, f.pad_even)));
  Summary(f) << "C: " << ToString(gp.C) << "\n";
  PrintObjective(f, "3/C", 3 / gp.C);
  return kOk;
}

int RunVerify(const Flags& f) {
  AnyInstance inst = LoadInstance(f);
  Menu menu = MenuFromJson(ReadJsonFile(f.menu));
  Rational eta;
  try {
    eta = ParseRational(f.eta);
  } catch (const std::invalid_argument& e) {
    Fail(kInvalid, e.what());
  }
  InstanceView view = std::visit([](const auto& x) { return InstanceView(x); }, inst);
  IcCertificate cert = VerifyIc(view, menu, eta);
  Emit(f, ToJson(cert));
  if (!cert.passed) {
    const IcViolation& v = cert.violations.front();
    if (v.action < 0) {
      Fail(kInvalid, "IR violated for type " + std::to_string(v.type) + " by " +
                         ToString(v.deficit));
    }
    Fail(kInvalid, "IC violated at (theta, theta', i) = (" + std::to_string(v.type) + ", " +
                       std::to_string(v.reported) + ", " + std::to_string(v.action) +
                       ") by " + ToString(v.deficit));
  }
  Summary(f) << "IC holds with slack " << ToString(eta) << " (" << cert.constraints_checked
             << " constraints)\n";
  return kOk;
}

int RunDiagnose(const Flags& f) {
  MultiParamInstance multi = LoadMulti(f);
  Reduction r = Reduce(multi, Epsilon(f));
  Menu menu = MenuFromJson(ReadJsonFile(f.menu));
  BackwardDiagnostics d = DiagnoseBackward(multi, r, menu, f.assume_precondition);
  Emit(f, ToJson(d));
  for (const PredicateResult& p : d.predicates) {
    Summary(f) << p.name << ": " << (p.passed ? "pass" : "fail") << ", slack "
               << ExactAndDecimal(p.slack) << "\n";
  }
  if (d.contradiction) Fail(kTheory, "a predicate failed although its precondition holds");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Bayesian contract design"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sub) {
    sub->add_option("-o,--output", f.output, "write the result document here");
    sub->add_option("--workers", f.workers, "threads for profile enumeration")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--no-liability", f.no_liability, "allow negative payments");
  };
  auto with_instance = [&](CLI::App* sub) {
    sub->add_option("instance", f.instance, "instance document")->required();
    common(sub);
  };
  auto with_epsilon = [&](CLI::App* sub) {
    sub->add_option("--epsilon", f.epsilon, "reduction accuracy as a rational string");
    sub->add_flag("--require-square,!--no-require-square", f.require_square,
                  "epsilon must be the square of a rational (default on)");
  };

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help) {
    subs[name] = app.add_subcommand(name, help);
    return subs[name];
  };

  with_instance(add("validate", "check an instance document"));
  with_instance(add("solve-menu", "optimal menu of deterministic contracts"));
  with_instance(add("solve-single", "optimal single contract"));
  with_instance(add("solve-randomized", "optimal menu of randomized contracts"));
  CLI::App* unres = add("solve-unrestricted", "optimal single contract without limited liability");
  with_instance(unres);
  unres->add_option("--ironing", f.ironing, "mass or index")
      ->check(CLI::IsMember({"mass", "index"}));
  CLI::App* red = add("reduce", "multi- to single-parameter reduction");
  with_instance(red);
  with_epsilon(red);
  for (const char* name : {"lift-forward", "lift-backward", "diagnose-backward"}) {
    CLI::App* sub = add(name, std::string(name) == "lift-forward"
                                  ? "lift an IC menu to the reduced instance"
                                  : std::string(name) == "lift-backward"
                                        ? "lift a reduced-side menu back"
                                        : "evaluate the backward-lift predicates");
    with_instance(sub);
    sub->add_option("menu", f.menu, "menu document")->required();
    with_epsilon(sub);
  }
  subs["diagnose-backward"]->add_flag("--assume-precondition", f.assume_precondition,
                                      "judge predicates as if the precondition held");
  CLI::App* rec = add("exact-recover", "optimal menu through the reduction");
  with_instance(rec);
  with_epsilon(rec);
  rec->add_flag("--single", f.single, "recover an optimal single contract");
  CLI::App* gap = add("gap-instance", "instance with a linear menu/single gap");
  gap->add_option("--n", f.n, "number of actions (odd, at least 3)")->required();
  gap->add_flag("--pad-even", f.pad_even, "accept even n by padding with an opt-out copy");
  gap->add_option("--menu-output", f.menu_output, "also write the certified menu");
  common(gap);
  CLI::App* verify = add("verify-ic", "check incentive compatibility of a menu");
  with_instance(verify);
  verify->add_option("menu", f.menu, "menu document")->required();
  verify->add_option("--eta", f.eta, "allowed slack as a rational string");

  CLI11_PARSE(app, argc, argv);

  try {
    if (subs["validate"]->parsed()) return RunValidate(f);
    if (subs["solve-menu"]->parsed()) return RunSolve(f, "menu");
    if (subs["solve-single"]->parsed()) return RunSolve(f, "single");
    if (subs["solve-randomized"]->parsed()) return RunSolve(f, "randomized");
    if (subs["solve-unrestricted"]->parsed()) return RunSolve(f, "unrestricted");
    if (subs["reduce"]->parsed()) return RunReduce(f);
    if (subs["lift-forward"]->parsed()) return RunLift(f, true);
    if (subs["lift-backward"]->parsed()) return RunLift(f, false);
    if (subs["diagnose-backward"]->parsed()) return RunDiagnose(f);
    if (subs["exact-recover"]->parsed()) return RunExactRecover(f);
    if (subs["gap-instance"]->parsed()) return RunGap(f);
    if (subs["verify-ic"]->parsed()) return RunVerify(f);
  } catch (const Exit& e) {
    return e.code();
  } catch (const BudgetExceeded& e) {
    std::cerr << "bcd: " << e.what() << "\n";
    return kBudget;
  } catch (const FormatError& e) {
    std::cerr << "bcd: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bcd: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
