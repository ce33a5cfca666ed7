#include "smspace/smc.hpp"

#include <string>

#include "smspace/errors.hpp"

namespace smspace {

SmcTable::SmcTable(ScanLayout layout, std::vector<SmcSample> samples, std::vector<Vec2> truth)
    : layout_(layout), samples_(std::move(samples)), truth_(std::move(truth)) {
  if (samples_.size() != layout_.size()) {
    throw ConfigError("scan table has " + std::to_string(samples_.size()) + " samples for a layout of " +
                      std::to_string(layout_.size()) + " nodes");
  }
  if (truth_.size() != samples_.size()) throw ConfigError("scan table truth/sample count mismatch");
  for (const auto &smp : samples_) {
    if (smp.p.size() != samples_.front().p.size() || smp.s.size() != samples_.front().s.size()) {
      throw ConfigError("scan table samples have inconsistent vector lengths");
    }
  }
}

}  // namespace smspace
