#pragma once

namespace semirace {

// Worker count for a requested value; 0 means hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

}  // namespace semirace
