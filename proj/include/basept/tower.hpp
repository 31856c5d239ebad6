// Algebraic extension towers over Q with dynamic evaluation (D5).
//
// A Tower is an immutable chain of levels, each adjoining a root of a monic
// square-free polynomial over the levels below.  Minimal polynomials need not
// be irreducible: arithmetic proceeds in the product ring and a SplitRequest
// is raised the moment a zero divisor would have to be inverted.  Callers
// split the tower with split_tower() and retry on each factor.
#pragma once

#include "basept/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace basept {

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

// Element of a tower (or of Q when tower() is null).  Represented as a dense
// polynomial in the top variable with coefficients one level down, reduced
// modulo the minimal polynomial.  Equality of representations decides
// equality of elements.
class AlgNum {
public:
    AlgNum() : q_(0) {}
    explicit AlgNum(Rat q) : q_(std::move(q)) {}
    explicit AlgNum(long n) : q_(n) {}
    AlgNum(TowerPtr tw, std::vector<AlgNum> coeffs);

    const TowerPtr& tower() const { return tw_; }
    bool is_rational() const { return tw_ == nullptr; }
    const Rat& rat() const;
    // Coefficient vector over tower()->base(); only for non-rational elements.
    const std::vector<AlgNum>& coeffs() const { return c_; }

    bool is_zero() const;
    bool operator==(const AlgNum& o) const;

    std::string str() const;

private:
    TowerPtr tw_;            // nullptr: plain rational
    Rat q_;                  // valid iff tw_ == nullptr
    std::vector<AlgNum> c_;  // over tw_->base(), deg < tw_->degree(), no trailing zeros
    friend AlgNum lift_to(const AlgNum& a, const TowerPtr& tw);
};

// Raised when arithmetic meets a zero divisor: the minimal polynomial at
// `level` of `tower` factors as g*h (both monic, coprime).  Not an Error:
// callers are expected to catch it and retry per component.
struct SplitRequest {
    TowerPtr tower;
    int level;                       // 0-based from the bottom
    std::vector<AlgNum> g, h;        // monic factors, coefficients over level-1
};

struct DivisionByZero : Error { DivisionByZero() : Error("division by zero") {} };

class Tower : public std::enable_shared_from_this<Tower> {
public:
    // Extends `base` by a root of the monic polynomial `minpoly` (degree >= 2,
    // coefficients over `base`).  Square-freeness is the caller's contract.
    static TowerPtr extend(TowerPtr base, std::string var, std::vector<AlgNum> minpoly);

    const TowerPtr& base() const { return base_; }
    const std::string& var() const { return var_; }
    const std::vector<AlgNum>& minpoly() const { return minpoly_; }
    int degree() const { return static_cast<int>(minpoly_.size()) - 1; }
    int depth() const { return depth_; }
    // Dimension over Q (product of level degrees).
    long dim() const;
    // The adjoined root as an element of this tower.
    AlgNum root() const;

private:
    Tower() = default;
    TowerPtr base_;
    std::string var_;
    std::vector<AlgNum> minpoly_;
    int depth_ = 0;
};

int tower_depth(const TowerPtr& t);
// True if `a` is the same tower as `b` or a (possibly null) ancestor of it.
bool tower_prefix_of(const TowerPtr& a, const TowerPtr& b);
// Deeper of two towers, requiring one to be a prefix of the other.
TowerPtr common_tower(const TowerPtr& a, const TowerPtr& b);
// View an element of a prefix tower as an element of `tw`.
AlgNum lift_to(const AlgNum& a, const TowerPtr& tw);

AlgNum operator+(const AlgNum& a, const AlgNum& b);
AlgNum operator-(const AlgNum& a, const AlgNum& b);
AlgNum operator-(const AlgNum& a);
AlgNum operator*(const AlgNum& a, const AlgNum& b);

// Multiplicative inverse.  Throws DivisionByZero on 0 and SplitRequest on a
// zero divisor.
AlgNum inverse(const AlgNum& a);
AlgNum operator/(const AlgNum& a, const AlgNum& b);
AlgNum pow(const AlgNum& a, long e);  // e may be negative (inverts)

// Decide a != 0 as a branching predicate: true if invertible, false if the
// representation is zero; throws SplitRequest on a zero divisor.
bool decide_nonzero(const AlgNum& a);

// Rebuilds towers after a split and maps elements across.
struct TowerMap {
    TowerPtr source;
    TowerPtr target;
    // Image in `target` of each source level's root, bottom to top.  Levels
    // whose factor came out linear collapse to an explicit element.
    std::vector<AlgNum> images;
};

// The two component towers induced by a SplitRequest, with element maps.
std::pair<TowerMap, TowerMap> split_tower(const SplitRequest& s);

// As split_tower, but lifts the split to `full` (a tower extending the one the
// request was raised over) so that deeper elements can be remapped too.
std::pair<TowerMap, TowerMap> split_tower_over(const SplitRequest& s, const TowerPtr& full);
AlgNum apply(const TowerMap& m, const AlgNum& a);

// Evaluates the nested representation of `a` with the given image per source
// level (indexed by source depth - 1).  Used to transport elements into
// product rings that are not extensions of their own tower.
AlgNum eval_levels(const AlgNum& a, const std::vector<AlgNum>& images);

} // namespace basept
