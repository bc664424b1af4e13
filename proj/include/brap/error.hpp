#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace brap {

// Machine-readable error codes. Validation failures carry the timestep and
// vertices involved so callers can report the offending step precisely.
enum class ErrorCode {
  invalid_vertex,
  illegal_action,
  vertex_conflict,
  edge_conflict,
  following_conflict,
  incomplete_target,
  unreachable_goal,
  no_blank,
  constraint_conflict,
  unsupported_goal,
  parse_error,
  too_large,
  parameter_error,
  model_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int t = -1,
        std::vector<std::pair<int, int>> vertices = {})
      : std::runtime_error(format(code, message, t, vertices)),
        code(code),
        t(t),
        vertices(std::move(vertices)) {}

  ErrorCode code;
  int t;  // timestep, -1 when not applicable
  std::vector<std::pair<int, int>> vertices;

 private:
  static std::string format(ErrorCode code, const std::string& message, int t,
                            const std::vector<std::pair<int, int>>& vertices);
};

}  // namespace brap
