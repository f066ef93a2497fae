#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mobccn {

using NodeId = std::int32_t;

// A face is either a neighbour node id or the local application.
using Face = std::int32_t;
inline constexpr Face kLocalApp = -1;

using RequestId = std::uint32_t;
using ContentId = std::uint32_t;

// Simulation clock, in seconds.
using Seconds = double;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct trace_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct workload_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the kernel when a strategy breaks a kernel contract (e.g. sends
// over an inactive contact). Always a bug, never an input problem.
struct invariant_violation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace mobccn
