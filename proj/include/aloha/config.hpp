#ifndef ALOHA_CONFIG_HPP
#define ALOHA_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "aloha/run_spec.hpp"

namespace aloha {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Line-oriented key = value text with [section] headers; # starts a comment.
// Keys before any header belong to [scenario].  Unknown sections, unknown
// keys and duplicate keys are rejected with the offending line number.
RunSpec parse_config(const std::string& text);

// Inverse of parse_config: parse_config(render_config(spec)) == spec for any
// valid spec.  Defaulted optional keys are omitted.
std::string render_config(const RunSpec& spec);

}  // namespace aloha

#endif
