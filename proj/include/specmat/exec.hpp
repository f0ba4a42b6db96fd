#pragma once

namespace specmat {

// Every data-parallel kernel takes one of these.  Serial is the reference
// path used by the tests; Parallel uses OpenMP when it was compiled in.
enum class Exec { Serial, Parallel };

int max_threads();

} // namespace specmat
