#pragma once

namespace replen {

/// Which kernel variant to run. `serial` is the reference implementation;
/// `parallel` distributes independent work items with OpenMP and must
/// reproduce the serial result bit for bit.
enum class Execution { serial, parallel };

struct ExecutionPolicy {
  Execution mode = Execution::parallel;
  int threads = 0;  ///< 0 lets OpenMP choose.
};

}  // namespace replen
