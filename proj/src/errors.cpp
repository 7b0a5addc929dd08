#include "notegrade/errors.hpp"

namespace notegrade {
namespace {

std::string render(const std::string& rule_id, SourceLocation where, const std::string& message) {
  std::string out = rule_id;
  if (where.line > 0) {
    out += " at " + std::to_string(where.line) + ":" + std::to_string(where.column);
  }
  return out + ": " + message;
}

}  // namespace

ParseError::ParseError(std::string rule_id, SourceLocation where, const std::string& message)
    : Error(render(rule_id, where, message)), rule_id_(std::move(rule_id)), where_(where), detail_(message) {}

}  // namespace notegrade
