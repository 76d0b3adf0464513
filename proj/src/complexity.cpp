#include "edgescore/complexity.hpp"

#include "edgescore/equilibrium.hpp"
#include "edgescore/ks_entropy.hpp"

namespace edgescore {

ScoreRecord complexity(const EdgeMap& map, const PatternBank& bank) {
  ScoreRecord record;
  record.edge_count = map.edge_count();
  if (map.empty()) {
    record.degenerate = true;
    return record;
  }
  record.q = equilibrium(map, bank);
  record.H = entropy(map);
  record.C = record.q * record.H;
  return record;
}

}  // namespace edgescore
