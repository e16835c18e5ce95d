#include "oclone/alphabet.hpp"

namespace oclone {

const RankedAlphabet& RankedAlphabet::ab() {
  static const RankedAlphabet sigma({{"a", 2}, {"b", 2}});
  return sigma;
}

}  // namespace oclone
