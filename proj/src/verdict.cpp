#include "homex/verdict.hpp"

#include "homex/errors.hpp"

namespace homex {

std::string to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::Refuted: return "refuted";
    case Status::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidQuiver: return "InvalidQuiver";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::NonAdmissible: return "NonAdmissible";
    case ErrorCode::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorCode::NotElementary: return "NotElementary";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::InvalidModule: return "InvalidModule";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::NotMultiplicative: return "NotMultiplicative";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::NotBimoduleMorphism: return "NotBimoduleMorphism";
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::ArrowInRelations: return "ArrowInRelations";
    case ErrorCode::NotSplit: return "NotSplit";
    case ErrorCode::TestsetNotCertified: return "TestsetNotCertified";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnresolvedName: return "UnresolvedName";
  }
  return "Error";
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json j;
  j["status"] = to_string(status);
  j["clause"] = clause;
  j["witness"] = witness.is_null() ? nlohmann::json::object() : witness;
  return j;
}

Verdict combine(const std::vector<Verdict>& parts, const std::string& clause) {
  nlohmann::json detail = nlohmann::json::array();
  const Verdict* first_refuted = nullptr;
  const Verdict* first_open = nullptr;
  for (const auto& p : parts) {
    detail.push_back(p.to_json());
    if (p.is_refuted() && !first_refuted) first_refuted = &p;
    if (p.is_inconclusive() && !first_open) first_open = &p;
  }
  nlohmann::json w{{"parts", detail}};
  if (first_refuted) {
    w["failing_clause"] = first_refuted->clause;
    return Verdict::refuted(clause, w);
  }
  if (first_open) {
    w["open_clause"] = first_open->clause;
    return Verdict::inconclusive(clause, w);
  }
  return Verdict::certified(clause, w);
}

int exit_code(Status s) {
  switch (s) {
    case Status::Certified: return 0;
    case Status::Refuted: return 2;
    case Status::Inconclusive: return 3;
  }
  return 3;
}

}  // namespace homex
