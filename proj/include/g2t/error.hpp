#pragma once

#include <stdexcept>
#include <string>

namespace g2t {

/// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorKind {
  kInput,       // malformed or inconsistent input data
  kConfig,      // invalid parameter values
  kDegenerate,  // the pipeline reached a state with nothing to model
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& what) {
  throw Error(ErrorKind::kInput, what);
}

[[noreturn]] inline void throw_config(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

[[noreturn]] inline void throw_degenerate(const std::string& what) {
  throw Error(ErrorKind::kDegenerate, what);
}

}  // namespace g2t
