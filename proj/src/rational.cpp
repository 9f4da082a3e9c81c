#include "semipb/rational.hpp"

#include <cctype>

#include "semipb/error.hpp"

namespace semipb {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  if (text.front() == '-') n = -n;
  Rational value(n, d);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational sum(const RationalVector& values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

void canonicalize(RationalVector& values) {
  for (auto& v : values) v.canonicalize();
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::NotInAlgebra: return "NotInAlgebra";
    case ErrorCode::NotMeasurable: return "NotMeasurable";
    case ErrorCode::NotSubalgebra: return "NotSubalgebra";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ConstantsMissing: return "ConstantsMissing";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NotMeasurePreserving: return "NotMeasurePreserving";
    case ErrorCode::PipelineInfeasible: return "PipelineInfeasible";
    case ErrorCode::ReservedIdCollision: return "ReservedIdCollision";
    case ErrorCode::ParamError: return "ParamError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Schema: return "Schema";
  }
  return "Unknown";
}

}  // namespace semipb
