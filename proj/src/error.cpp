#include "bmv/error.hpp"

namespace bmv {

namespace {

std::string compose(ErrorKind kind, const std::string& message, const std::string& stage) {
  std::string out;
  if (!stage.empty()) out += stage + ": ";
  out += std::string(to_string(kind)) + " error: " + message;
  return out;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::input: return "input";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::domain: return "domain";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::radius_search: return "radius-search";
    case ErrorKind::tracking: return "tracking";
    case ErrorKind::monodromy: return "monodromy";
    case ErrorKind::labeling: return "labeling";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::string stage)
    : std::runtime_error(compose(kind, message, stage)),
      kind_(kind),
      message_(message),
      stage_(std::move(stage)) {}

}  // namespace bmv
