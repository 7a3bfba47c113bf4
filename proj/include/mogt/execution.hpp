#pragma once

namespace mogt {

// Every data-parallel kernel has a serial reference. Both produce identical
// results; Parallel is the default for public entry points.
enum class Execution { Serial, Parallel };

}  // namespace mogt
