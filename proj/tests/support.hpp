#pragma once

#include <ostream>

#include "mm/word.hpp"

namespace mm {

// gtest printer: raw signed letters, 1 for the empty word
inline void PrintTo(const Word& w, std::ostream* os) {
  if (w.empty()) *os << "1";
  for (std::size_t i = 0; i < w.size(); ++i) *os << (i ? " " : "") << w[i];
}

}  // namespace mm
