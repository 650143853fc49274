#pragma once

#include <cstdint>
#include <vector>

namespace recbench {

using ItemIndex = int32_t;

/// One leave-one-out evaluation instance. `last` always equals the final
/// element of the (already truncated) prefix; `gt` is the held-out next item.
struct EvalCase {
    int64_t case_id = 0;
    std::vector<ItemIndex> prefix;
    ItemIndex gt = 0;
    ItemIndex last = 0;
};

} // namespace recbench
