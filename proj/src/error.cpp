#include "ardtk/error.hpp"

namespace ardtk {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Range: return "range";
    case ErrorKind::SizeGuard: return "size-guard";
    case ErrorKind::MalformedCodeword: return "malformed-codeword";
    case ErrorKind::RetryExhausted: return "retry-exhausted";
    case ErrorKind::AdversaryOverflow: return "adversary-overflow";
    case ErrorKind::Membership: return "membership";
    case ErrorKind::DegenerateCurve: return "degenerate-curve";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::MissingGridPoint: return "missing-grid-point";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace ardtk
