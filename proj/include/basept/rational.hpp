// Exact arithmetic base types: arbitrary-precision integers and rationals.
#pragma once

#include <gmpxx.h>
#include <numeric>
#include <stdexcept>
#include <string>

namespace basept {

using Int = mpz_class;
using Rat = mpq_class;

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroInput : Error { ZeroInput() : Error("zero polynomial input") {} };
struct ConstantInput : Error { ConstantInput() : Error("constant polynomial input") {} };
struct NotSquareFree : Error { NotSquareFree() : Error("polynomial is not square-free") {} };
struct NotVanishingAtOrigin : Error { NotVanishingAtOrigin() : Error("polynomial does not vanish at the origin") {} };
struct ZeroGenerator : Error { ZeroGenerator() : Error("zero generator") {} };
struct EmptyIdeal : Error { EmptyIdeal() : Error("ideal has no generators") {} };
struct NotSeparated : Error { NotSeparated() : Error("branches are not separated at current truncation") {} };
struct UnorderedCluster : Error { UnorderedCluster() : Error("cluster points not ordered parents-first") {} };
struct DimensionMismatch : Error { DimensionMismatch() : Error("weight vector does not match cluster size") {} };
struct InconsistentTable : Error { InconsistentTable() : Error("value table violates h_p <= v_p") {} };
struct BrokenClosure : Error { BrokenClosure() : Error("pruning removed a predecessor of a retained point") {} };
struct InternalError : Error { explicit InternalError(const std::string& w) : Error("internal: " + w) {} };

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline long to_long(const Int& n) {
    if (!n.fits_slong_p()) throw InternalError("integer exceeds machine range: " + n.get_str());
    return n.get_si();
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

} // namespace basept
