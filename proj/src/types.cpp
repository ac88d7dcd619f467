#include "maxnorm/types.hpp"

#include <unordered_map>

namespace maxnorm {

AggregatedObservations AggregatedObservations::from(const ObservationSet& obs) {
  AggregatedObservations agg;
  agg.d1 = obs.d1;
  agg.d2 = obs.d2;
  std::unordered_map<std::int64_t, std::size_t> slot;
  slot.reserve(obs.entries.size());
  for (const auto& e : obs.entries) {
    if (e.row < 0 || e.row >= obs.d1 || e.col < 0 || e.col >= obs.d2)
      throw ArgumentError("observation index out of range");
    const std::int64_t key = static_cast<std::int64_t>(e.row) * obs.d2 + e.col;
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(key, agg.cells.size());
      agg.cells.push_back({e.row, e.col, e.value, e.value * e.value, 1.0});
    } else {
      auto& c = agg.cells[it->second];
      c.sum += e.value;
      c.sumsq += e.value * e.value;
      c.count += 1.0;
    }
  }
  for (const auto& c : agg.cells) agg.max_count = std::max(agg.max_count, c.count);
  return agg;
}

}  // namespace maxnorm
