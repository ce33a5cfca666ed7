#include <iomanip>
#include <ostream>

#include "smspace/phi.hpp"

namespace smspace {

void write_phi_csv(std::ostream &os, const PhiFunction &phi) {
  const std::size_t np = phi.empty() ? 0 : phi.pairs.front().p.size();
  for (std::size_t j = 0; j < np; ++j) os << (j ? "," : "") << "p_" << (j + 1);
  for (std::size_t j = 0; j < np; ++j) os << (np + j ? "," : "") << "pprime_" << (j + 1);
  os << '\n' << std::setprecision(17);
  for (const auto &pr : phi.pairs) {
    for (std::size_t j = 0; j < np; ++j) os << (j ? "," : "") << pr.p[j];
    for (std::size_t j = 0; j < np; ++j) os << ',' << pr.p_image[j];
    os << '\n';
  }
}

}  // namespace smspace
