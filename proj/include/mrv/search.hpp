#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "mrv/history.hpp"

namespace mrv {

using HistoryPredicate = std::function<bool(const History&)>;

struct HistorySearch {
  std::optional<History> history;
  std::size_t candidates = 0;  // histories tested
  bool exhausted = true;       // false when the budget ran out first
};

// Smallest history drawn from pool, of at most max_size traces, that the
// predicate accepts. Sizes are tried in increasing order and subsets in
// lexicographic order of pool indices. budget == 0 means unlimited.
HistorySearch smallest_history(const std::vector<Trace>& pool, std::size_t max_size, const HistoryPredicate& accept,
                               std::size_t budget = 0);

// Inclusion-minimal sub-history still accepted by a monotone predicate,
// found by dropping one trace at a time. Requires accept(h).
History shrink_history(History h, const HistoryPredicate& accept);

// Traces of pool that are not proper prefixes of another trace in pool.
std::vector<Trace> maximal_traces(const std::vector<Trace>& pool);

}  // namespace mrv
