#pragma once

#include <stdexcept>
#include <string>

namespace oclone {

// Every throwing operation in the library reports one of these codes.
// Tests match on the code, messages are for humans.
enum class Errc {
  UnknownLetter,
  ArityMismatch,
  PortGap,
  TrivialTerm,
  RankChanged,
  BadAddress,
  TrivialResult,
  WrongAlphabet,
  WrongArity,
  Malformed,
  BudgetZero,
  Undetermined,
  Kind3RankZero,
  TooLarge,
  PartialStrategy,
  ParseError,
  ShapeMismatch,
  AlphabetMismatch,
  NonZeroRank,
  SearchExhausted,
  EqualWords,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace oclone
