// SPDX-License-Identifier: Apache-2.0
//
// Moving menus across the multi- to single-parameter reduction.
//
// LiftForward turns an IC menu P of the multi-parameter instance I^M into a
// menu of the reduced instance I^S with U^S >= H (U^M - 2 eps).
// LiftBackward goes the other way with U^S <= H (U^M + nu), where
// nu = 13 eps / 4 + 4 sqrt(eps). The backward pipeline is
//   (a) negative utility: zero menu,
//   (b) drop the dummy-outcome payment (P-breve),
//   (c) collect the types whose action sits outside their own block,
//   (d) give each such type its favourite contract among P-breve,
//   (e) send those that now lose the principal money to the opt-out,
//   (f) repair the remaining 3 eps slack in IC by blending with r, skipped
//       when the menu is already exactly IC.

#ifndef BCD_LIFTING_H_
#define BCD_LIFTING_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "bcd/agent.h"
#include "bcd/instance.h"
#include "bcd/reduction.h"
#include "bcd/solvers.h"

namespace bcd {

class IcRejected : public std::invalid_argument {
 public:
  IcRejected(const std::string& what, IcCertificate certificate)
      : std::invalid_argument(what), certificate_(std::move(certificate)) {}
  const IcCertificate& certificate() const { return certificate_; }

 private:
  IcCertificate certificate_;
};

// A square root used by the pipeline: exact when the argument is the square
// of a rational, otherwise an upper bound with error at most error_bound.
struct SqrtValue {
  Rational value;
  bool exact = false;
  Rational error_bound;
};

SqrtValue RationalSqrt(const Rational& x);

enum class ForwardCase { kPaymentBlowup, kShift };
enum class BackwardCase { kNegativeUtility, kPipeline };

struct LiftTrace {
  std::string direction;  // "forward" or "backward"
  ForwardCase forward_case = ForwardCase::kShift;
  BackwardCase backward_case = BackwardCase::kPipeline;
  // Payment-blowup witness: <F^theta_a, p^theta'> > 2 / mu_min.
  int blowup_type = -1;
  int blowup_action = -1;
  int blowup_reported = -1;

  std::vector<int> theta_hat;
  std::vector<int> theta_hat_1;
  std::vector<int> theta_hat_2;
  std::vector<int> reassigned_contract;  // per type in theta_hat, index into P-breve

  Rational eta;    // alpha / (1 - alpha)
  Rational gamma;  // 2^{-l}
  Rational delta;  // 3 eps
  SqrtValue sqrt_epsilon;
  SqrtValue sqrt_delta;
  Rational nu;  // 13 eps / 4 + 4 sqrt_epsilon.value

  Menu breve;       // P-breve, on the reduced outcomes
  Menu breve_star;  // P-breve-star, on the original outcomes
  Menu hat_star;    // P-hat-star
  std::vector<int> repair_choice;  // contract picked for each type by the repair
  Rational repair_blend;           // weight on r used by the repair; 0 if already IC

  Rational utility_single;  // U^S of the reduced-side menu
  Rational utility_multi;   // U^M of the original-side menu
  Rational bound;           // right-hand side of the lifting inequality
  bool bound_holds = false;
  IcCertificate output_certificate;
};

const char* ForwardCaseName(ForwardCase c);
const char* BackwardCaseName(BackwardCase c);

struct LiftResult {
  Menu menu;
  LiftTrace trace;
};

// Rejects a non-IC input with IcRejected.
LiftResult LiftForward(const MultiParamInstance& multi, const Reduction& reduction,
                       const Menu& menu);

LiftResult LiftBackward(const MultiParamInstance& multi, const Reduction& reduction,
                        const Menu& menu);

struct RepairResult {
  Menu menu;
  std::vector<int> choice;  // which auxiliary contract each type takes
  Rational blend;           // weight on r, at least sqrt(delta)
  Rational utility_before;
  Rational utility_after;
  Rational loss_bound;  // 2 * blend
  bool loss_within_bound = false;
};

// Turns a delta-IC menu into an IC one. Each type picks its favourite pair
// among the blended contracts (1 - s) p + s r. A type whose own pair is among
// its favourites keeps it, so s = 0 returns the input unchanged; otherwise
// ties go to the principal, then to the smaller contract and action index.
RepairResult IcRepair(const InstanceView& view, const Menu& menu, const Rational& delta,
                      const SqrtValue& sqrt_delta);

struct ExactRecovery {
  Menu menu;
  Rational value;
  ActionProfile profile;
  LiftResult backward;
};

// Backward lift of an optimal reduced-side menu followed by the profile LP
// on the induced profile. With single_contract the LP shares one contract.
ExactRecovery ExactRecover(const MultiParamInstance& multi, const Reduction& reduction,
                           const Menu& optimal, bool single_contract = false,
                           const SolverOptions& options = {});

struct PredicateResult {
  std::string name;
  bool passed = true;
  Rational slack;  // bound minus measured value; negative when failed
};

struct BackwardDiagnostics {
  bool precondition = false;  // input IC with non-negative principal utility
  bool vacuous = false;
  bool contradiction = false;  // precondition held yet a predicate failed
  std::vector<PredicateResult> predicates;
};

// Evaluates the dummy-payment, block-order, payment, eta-IC, small-loss and
// small-utility bounds on the pipeline's intermediate menus. With
// assume_precondition the predicates are judged as if the precondition held,
// which lets the checker be tested on inputs that break it.
BackwardDiagnostics DiagnoseBackward(const MultiParamInstance& multi,
                                     const Reduction& reduction, const Menu& menu,
                                     bool assume_precondition = false);

// Largest gain any type can get from misreporting or disobeying.
Rational MaxRegret(const InstanceView& view, const Menu& menu);

}  // namespace bcd

#endif  // BCD_LIFTING_H_
