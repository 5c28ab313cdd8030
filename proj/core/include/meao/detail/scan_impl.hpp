#pragma once

#include <exception>
#include <sstream>
#include <vector>

#include "meao/error.hpp"

namespace meao {

template <class Family, class Analysis>
std::vector<ScanRow> scan(const std::vector<double>& grid, Family&& family, Analysis&& analysis) {
  std::vector<ScanRow> rows;
  rows.reserve(grid.size());
  for (double p : grid) {
    try {
      rows.push_back({p, analysis(family(p))});
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "scan failed at parameter " << p << ": " << e.what();
      std::throw_with_nested(ScanError(msg.str(), p));
    }
  }
  return rows;
}

}  // namespace meao
