#pragma once

#include <gmpxx.h>
#include <string>

#include "charmult/errors.hpp"

namespace charmult {

/// Arbitrary-precision rational. GMP keeps these canonical (coprime, q > 0)
/// once canonicalize() has run; every path below canonicalizes.
using Rat = mpq_class;

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (s.empty() || r.set_str(s, 10) != 0)
        throw ParseError("bad rational literal: '" + s + "'");
    if (r.get_den() == 0)
        throw ParseError("zero denominator in rational literal: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

inline long rat_to_long(const Rat& r) {
    if (!rat_is_integer(r)) throw NotRational("expected an integer, got " + r.get_str());
    if (!r.get_num().fits_slong_p()) throw Error("integer out of machine range: " + r.get_str());
    return r.get_num().get_si();
}

} // namespace charmult
