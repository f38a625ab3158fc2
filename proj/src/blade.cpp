#include "phasegeo/blade.hpp"

#include <mutex>

namespace phasegeo {

const BladeTable& BladeTable::get(int n, int p) {
  static std::array<std::array<BladeTable, 9>, 9> tables;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int nn = 0; nn <= 8; ++nn)
      for (int pp = 0; pp <= nn; ++pp) {
        BladeTable& t = tables[nn][pp];
        t.index.fill(-1);
        for (unsigned m = 0; m < (1u << nn); ++m)
          if (std::popcount(m) == pp) {
            t.index[m] = static_cast<int16_t>(t.masks.size());
            t.masks.push_back(static_cast<uint16_t>(m));
          }
      }
  });
  if (n < 0 || n > 8 || p < 0 || p > n) throw std::out_of_range("blade table");
  return tables[n][p];
}

}  // namespace phasegeo
