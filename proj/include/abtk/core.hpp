#pragma once

#include <stdexcept>
#include <string>

namespace abtk {

using VertexId = int;
using DiamondId = int;

/// Error thrown by operations whose preconditions fail. The message is the
/// short diagnostic listed in the operation's contract ("no such diamond",
/// "non-composable paths", ...), optionally followed by context.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  Error(const std::string& what, const std::string& context)
      : std::runtime_error(what + ": " + context) {}
};

}  // namespace abtk
