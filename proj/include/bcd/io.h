// SPDX-License-Identifier: Apache-2.0
//
// JSON documents for instances, menus, reports and lifting traces.
//
// Every number is a string "p/q" (integers may omit "/q"). JSON number
// literals are rejected so that nothing passes through floating point.

#ifndef BCD_IO_H_
#define BCD_IO_H_

#include <stdexcept>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "bcd/instance.h"
#include "bcd/lifting.h"
#include "bcd/reduction.h"
#include "bcd/solvers.h"
#include "bcd/unrestricted.h"

namespace bcd {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyInstance = std::variant<MultiParamInstance, SingleParamInstance>;

Json ToJson(const Rational& x);
Json ToJson(const Vector& v);
Json ToJson(const MultiParamInstance& instance);
Json ToJson(const SingleParamInstance& instance);
Json ToJson(const AnyInstance& instance);
Json ToJson(const Menu& menu);
Json ToJson(const RandomizedMenu& menu);
Json ToJson(const IcCertificate& certificate);
Json ToJson(const SolveReport& report);
Json ToJson(const ReductionMap& map);
Json ToJson(const LiftTrace& trace);
Json ToJson(const BackwardDiagnostics& diagnostics);
Json ToJson(const std::vector<Violation>& violations);
Json ToJson(const UnrestrictedDiagnostics& diagnostics);

Rational RationalFromJson(const Json& j);
Vector VectorFromJson(const Json& j);
AnyInstance InstanceFromJson(const Json& j);
Menu MenuFromJson(const Json& j);

// Objective line used by the command-line tool: "p/q (decimal)".
std::string ExactAndDecimal(const Rational& x);

Json ReadJsonFile(const std::string& path);
// Pretty-printed with a trailing newline; identical input gives identical bytes.
void WriteJsonFile(const std::string& path, const Json& j);
std::string Dump(const Json& j);

}  // namespace bcd

#endif  // BCD_IO_H_
