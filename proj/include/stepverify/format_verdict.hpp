#pragma once

#include <cstddef>
#include <string>

namespace stepverify {

/// Outcome of a format filter pass over raw ingested text. `reason` is a
/// stable machine-readable code, empty when ok.
struct FormatVerdict {
  bool ok = false;
  std::string reason;  // parse_error, duplicate_target, non_sequential_target,
                       // unsupported_construct, invalid_operator
  std::string detail;
  std::size_t offset = 0;

  static FormatVerdict accept() { return {true, "", "", 0}; }
  static FormatVerdict reject(std::string reason, std::string detail, std::size_t offset = 0) {
    return {false, std::move(reason), std::move(detail), offset};
  }
};

}  // namespace stepverify
