#include "oclone/error.hpp"

namespace oclone {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnknownLetter: return "UnknownLetter";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::PortGap: return "PortGap";
    case Errc::TrivialTerm: return "TrivialTerm";
    case Errc::RankChanged: return "RankChanged";
    case Errc::BadAddress: return "BadAddress";
    case Errc::TrivialResult: return "TrivialResult";
    case Errc::WrongAlphabet: return "WrongAlphabet";
    case Errc::WrongArity: return "WrongArity";
    case Errc::Malformed: return "Malformed";
    case Errc::BudgetZero: return "BudgetZero";
    case Errc::Undetermined: return "Undetermined";
    case Errc::Kind3RankZero: return "Kind3RankZero";
    case Errc::TooLarge: return "TooLarge";
    case Errc::PartialStrategy: return "PartialStrategy";
    case Errc::ParseError: return "ParseError";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::AlphabetMismatch: return "AlphabetMismatch";
    case Errc::NonZeroRank: return "NonZeroRank";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::EqualWords: return "EqualWords";
  }
  return "Error";
}

}  // namespace oclone
