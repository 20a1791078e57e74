#ifndef GINZBURG_RATIONAL_HPP
#define GINZBURG_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ginzburg {

/// Exact rational scalar. Arbitrary precision, always stored in lowest terms
/// with positive denominator (mpq_class canonical form).
using Rat = mpq_class;

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text (quiver files, rational literals).
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Precondition violation on otherwise well-formed input.
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A product or evaluation left the weight truncation.
struct TruncationOverflow : Error {
  explicit TruncationOverflow(const std::string& msg) : Error(msg) {}
};

/// An internal identity failed; indicates a bug upstream, not bad input.
struct InternalInconsistency : Error {
  explicit InternalInconsistency(const std::string& msg) : Error(msg) {}
};

/// Serialize as "p" or "p/q" (never a float).
inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

/// Parse "p" or "p/q"; rejects zero denominators and garbage.
inline Rat rat_from_string(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal: '" + s + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in rational literal: '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace ginzburg

#endif  // GINZBURG_RATIONAL_HPP
