// SPDX-License-Identifier: Apache-2.0
//
// Best responses and incentive-compatibility certificates.
//
// Ties are broken in favor of the principal. Remaining ties go to the smaller
// contract index and then to the smaller action index; this last convention
// is not forced by the model and is stated in every certificate.

#ifndef BCD_AGENT_H_
#define BCD_AGENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bcd/instance.h"

namespace bcd {

inline constexpr char kTieBreakConvention[] =
    "agent utility, then principal utility, then contract index, then action index";

struct BestResponse {
  int action = -1;
  Rational agent_utility;
  Rational principal_utility;
  Vector agent_utilities;      // per action
  Vector principal_utilities;  // per action
};

BestResponse ComputeBestResponse(const InstanceView& view, int type, const Vector& payments);

struct MenuChoice {
  int contract = -1;
  BestResponse response;
};

MenuChoice BestMenuChoice(const InstanceView& view, int type, const Menu& menu);

struct IcViolation {
  int type = -1;      // true type theta
  int reported = -1;  // reported type theta'
  int action = -1;    // deviation action i; -1 marks an IR violation
  Rational deficit;   // how far the constraint misses, > 0
};

struct IcCertificate {
  bool passed = true;
  Rational slack;
  bool constant_menu = false;
  int64_t constraints_checked = 0;
  int64_t misreport_constraints_checked = 0;
  int64_t ir_constraints_checked = 0;
  std::vector<IcViolation> violations;
  std::string tie_break = kTieBreakConvention;
};

// Checks, for all (theta, theta', i),
//   <F_{a(theta)}, p^theta> - c_{a(theta)} >= <F_i, p^theta'> - c_i - eta.
// When every contract is identical only the obedience constraints are
// enumerated. IR is checked for types without a zero-cost action, or when a
// contract has negative payments.
IcCertificate VerifyIc(const InstanceView& view, const Menu& menu, const Rational& eta);

}  // namespace bcd

#endif  // BCD_AGENT_H_
