#pragma once

#include <string>
#include <vector>

#include "oclone/error.hpp"

namespace oclone {

// A letter of a ranked alphabet. rank is the number of children a node
// carrying this letter has in a tree; it is fixed per letter.
struct Letter {
  std::string name;
  int rank = 0;

  friend bool operator==(const Letter& x, const Letter& y) {
    return x.rank == y.rank && x.name == y.name;
  }
  friend bool operator!=(const Letter& x, const Letter& y) { return !(x == y); }
  friend bool operator<(const Letter& x, const Letter& y) {
    if (x.name != y.name) return x.name < y.name;
    return x.rank < y.rank;
  }
};

// rank_of is the single hook the generic tree machinery uses to ask a label
// for its rank. Types other than Letter expose a rank() member.
inline int rank_of(const Letter& l) { return l.rank; }
template <class T>
int rank_of(const T& x) {
  return x.rank();
}

class RankedAlphabet {
 public:
  RankedAlphabet() = default;

  // Letters keep their given order (it is the printing order). Names must be
  // distinct; a repeated name is malformed regardless of rank.
  explicit RankedAlphabet(std::vector<Letter> letters) : letters_(std::move(letters)) {
    for (size_t i = 0; i < letters_.size(); ++i) {
      if (letters_[i].name.empty()) fail(Errc::Malformed, "letter with empty name");
      if (letters_[i].rank < 0) fail(Errc::Malformed, "letter with negative rank");
      for (size_t j = 0; j < i; ++j)
        if (letters_[j].name == letters_[i].name)
          fail(Errc::Malformed, "duplicate letter name '" + letters_[i].name + "'");
    }
  }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }

  const Letter* find(const std::string& name) const {
    for (const Letter& l : letters_)
      if (l.name == name) return &l;
    return nullptr;
  }

  bool contains(const Letter& l) const {
    const Letter* f = find(l.name);
    return f != nullptr && f->rank == l.rank;
  }

  // The binary alphabet {a:2, b:2} every kind computation runs over.
  static const RankedAlphabet& ab();

  friend bool operator==(const RankedAlphabet& x, const RankedAlphabet& y) {
    return x.letters_ == y.letters_;
  }
  friend bool operator!=(const RankedAlphabet& x, const RankedAlphabet& y) { return !(x == y); }

 private:
  std::vector<Letter> letters_;
};

}  // namespace oclone
