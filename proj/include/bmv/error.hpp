#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmv {

enum class ErrorKind {
  dimension,
  parameter,
  precondition,
  input,
  numeric,
  domain,
  accuracy,
  convergence,
  radius_search,
  tracking,
  monodromy,
  labeling,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library. `stage` names the pipeline step
// (reduce, contour, measure, ...) when the error crossed a stage boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string stage = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }

  Error with_stage(std::string stage) const { return Error(kind_, message_, std::move(stage)); }

 private:
  ErrorKind kind_;
  std::string message_;
  std::string stage_;
};

}  // namespace bmv
