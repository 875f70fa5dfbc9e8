#pragma once

#include <mutex>
#include <vector>

#include "mf/ext_real.hpp"

namespace mf::detail {

/// Lazily filled table of mu*(S) for every S of a small finite universe,
/// indexed by bitmask. Shared between copies of a MeasureSpace.
struct OuterCache {
    std::once_flag once;
    bool available = false;
    std::vector<ExtReal> table;
};

}  // namespace mf::detail
