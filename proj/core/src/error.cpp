#include "twb/error.hpp"

namespace twb {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotASuccessor: return "NotASuccessor";
    case ErrorKind::UnknownIndex: return "UnknownIndex";
    case ErrorKind::InvalidTree: return "InvalidTree";
    case ErrorKind::CannotComplete: return "CannotComplete";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::SortError: return "SortError";
    case ErrorKind::Incomparable: return "Incomparable";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::WrongShape: return "WrongShape";
    case ErrorKind::BadSeries: return "BadSeries";
    case ErrorKind::RankTooLow: return "RankTooLow";
    case ErrorKind::NotAlmostIncreasing: return "NotAlmostIncreasing";
    case ErrorKind::ShapeExhausted: return "ShapeExhausted";
    case ErrorKind::DisjointnessViolated: return "DisjointnessViolated";
    case ErrorKind::AxiomViolated: return "AxiomViolated";
    case ErrorKind::InsufficientSubwitness: return "InsufficientSubwitness";
    case ErrorKind::InputError: return "InputError";
  }
  return "Error";
}

}  // namespace twb
