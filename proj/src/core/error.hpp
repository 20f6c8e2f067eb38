#pragma once

#include <stdexcept>
#include <string>

namespace imtd {

/// Failure categories carried by every Error; the C API and the CLI map
/// these onto status / exit codes.
enum class Errc {
  invalid_argument,
  parse,
  alignment,
  metric,
  io,
  out_of_range,
  insufficient_data,
  degenerate,
  not_static,
  ordering,
  saturation,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace imtd
