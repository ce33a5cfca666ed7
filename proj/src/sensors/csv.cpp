#include <iomanip>
#include <ostream>

#include "smspace/sensors.hpp"

namespace smspace {

void write_smc_csv(std::ostream &os, const SmcTable &table) {
  const std::size_t np = table.proprio_size();
  const std::size_t ns = table.photo_size();
  for (std::size_t j = 0; j < np; ++j) os << (j ? "," : "") << "p_" << (j + 1);
  for (std::size_t j = 0; j < ns; ++j) os << (np + j ? "," : "") << "s_" << (j + 1);
  os << '\n';
  os << std::setprecision(17);
  for (const auto &smp : table.samples()) {
    for (std::size_t j = 0; j < np; ++j) os << (j ? "," : "") << smp.p[j];
    for (std::size_t j = 0; j < ns; ++j) os << (np + j ? "," : "") << smp.s[j];
    os << '\n';
  }
}

}  // namespace smspace
