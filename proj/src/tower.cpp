#include "basept/tower.hpp"

#include <sstream>

namespace basept {

namespace {

void trim(std::vector<AlgNum>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// Dense polynomial helpers over AlgNum coefficient vectors (one tower level down).
std::vector<AlgNum> vec_add(const std::vector<AlgNum>& a, const std::vector<AlgNum>& b) {
    std::vector<AlgNum> r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size() && i < b.size()) r[i] = a[i] + b[i];
        else if (i < a.size()) r[i] = a[i];
        else r[i] = b[i];
    }
    trim(r);
    return r;
}

std::vector<AlgNum> vec_neg(const std::vector<AlgNum>& a) {
    std::vector<AlgNum> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

std::vector<AlgNum> vec_mul(const std::vector<AlgNum>& a, const std::vector<AlgNum>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<AlgNum> r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) {
            AlgNum t = a[i] * b[j];
            r[i + j] = r[i + j] + t;
        }
    trim(r);
    return r;
}

// Remainder of `a` modulo the monic polynomial `m`.
std::vector<AlgNum> vec_rem_monic(std::vector<AlgNum> a, const std::vector<AlgNum>& m) {
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        AlgNum lead = a.back();
        size_t shift = a.size() - 1 - dm;
        if (!lead.is_zero()) {
            for (size_t i = 0; i < dm; ++i)
                a[shift + i] = a[shift + i] - lead * m[i];
        }
        a.pop_back();
        trim(a);
        if (a.size() <= dm) break;
    }
    trim(a);
    return a;
}

} // namespace

AlgNum::AlgNum(TowerPtr tw, std::vector<AlgNum> coeffs) : tw_(std::move(tw)), q_(0), c_(std::move(coeffs)) {
    if (!tw_) throw InternalError("AlgNum: null tower in tower constructor");
    for (auto& c : c_)
        if (!tower_prefix_of(c.tower(), tw_->base()))
            throw InternalError("AlgNum: coefficient tower mismatch");
    if (static_cast<int>(c_.size()) > tw_->degree()) c_ = vec_rem_monic(std::move(c_), tw_->minpoly());
    trim(c_);
    if (c_.empty()) { tw_ = nullptr; q_ = 0; return; }
    if (c_.size() == 1) { AlgNum low = std::move(c_[0]); *this = std::move(low); }
}

const Rat& AlgNum::rat() const {
    if (tw_) throw InternalError("AlgNum::rat on algebraic element");
    return q_;
}

bool AlgNum::is_zero() const {
    if (!tw_) return q_ == 0;
    return c_.empty();
}

bool AlgNum::operator==(const AlgNum& o) const {
    return (*this - o).is_zero();
}

std::string AlgNum::str() const {
    if (!tw_) return q_.get_str();
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i].str();
        if (i >= 1) os << "*" << tw_->var();
        if (i >= 2) os << "^" << i;
    }
    if (first) os << "0";
    os << ")";
    return os.str();
}

TowerPtr Tower::extend(TowerPtr base, std::string var, std::vector<AlgNum> minpoly) {
    trim(minpoly);
    if (minpoly.size() < 3) throw InternalError("Tower::extend: degree must be >= 2");
    if (!(minpoly.back() - AlgNum(1)).is_zero()) throw InternalError("Tower::extend: minpoly not monic");
    auto t = std::shared_ptr<Tower>(new Tower());
    t->base_ = std::move(base);
    t->var_ = std::move(var);
    t->minpoly_ = std::move(minpoly);
    t->depth_ = t->base_ ? t->base_->depth() + 1 : 1;
    return t;
}

long Tower::dim() const {
    long d = degree();
    for (TowerPtr b = base_; b; b = b->base()) d *= b->degree();
    return d;
}

AlgNum Tower::root() const {
    std::vector<AlgNum> c(2);
    c[0] = AlgNum(0);
    c[1] = AlgNum(1);
    return AlgNum(shared_from_this(), std::move(c));
}

int tower_depth(const TowerPtr& t) { return t ? t->depth() : 0; }

bool tower_prefix_of(const TowerPtr& a, const TowerPtr& b) {
    if (!a) return true;
    TowerPtr x = b;
    while (x) {
        if (x.get() == a.get()) return true;
        x = x->base();
    }
    return false;
}

TowerPtr common_tower(const TowerPtr& a, const TowerPtr& b) {
    if (tower_prefix_of(a, b)) return b;
    if (tower_prefix_of(b, a)) return a;
    throw InternalError("common_tower: towers are not nested");
}

AlgNum lift_to(const AlgNum& a, const TowerPtr& tw) {
    if (!tower_prefix_of(a.tower(), tw)) throw InternalError("lift_to: not a prefix");
    return a;  // representation is already valid at any extension
}

namespace {

// Views `a` as a coefficient vector over base `b` of tower `tw` (a's tower is
// a prefix of tw).
std::vector<AlgNum> as_coeffs(const AlgNum& a, const TowerPtr& tw) {
    if (a.tower().get() == tw.get() && tw) return a.coeffs();
    if (a.is_zero()) return {};
    return {a};  // constant over tw->base()
}

} // namespace

AlgNum operator+(const AlgNum& a, const AlgNum& b) {
    if (a.is_rational() && b.is_rational()) return AlgNum(a.rat() + b.rat());
    TowerPtr tw = common_tower(a.tower(), b.tower());
    return AlgNum(tw, vec_add(as_coeffs(a, tw), as_coeffs(b, tw)));
}

AlgNum operator-(const AlgNum& a) {
    if (a.is_rational()) return AlgNum(-a.rat());
    return AlgNum(a.tower(), vec_neg(a.coeffs()));
}

AlgNum operator-(const AlgNum& a, const AlgNum& b) { return a + (-b); }

AlgNum operator*(const AlgNum& a, const AlgNum& b) {
    if (a.is_rational() && b.is_rational()) return AlgNum(a.rat() * b.rat());
    if (a.is_zero() || b.is_zero()) return AlgNum(0);
    TowerPtr tw = common_tower(a.tower(), b.tower());
    auto prod = vec_mul(as_coeffs(a, tw), as_coeffs(b, tw));
    return AlgNum(tw, vec_rem_monic(std::move(prod), tw->minpoly()));
}

namespace {

// Extended Euclid of `a` against the monic minimal polynomial of `tw`, used
// for inversion.  Returns u with u*a == 1 (mod minpoly), or raises
// SplitRequest if gcd(a, minpoly) is proper.
AlgNum invert_mod(const std::vector<AlgNum>& a0, const TowerPtr& tw) {
    // Work with pairs (r, u): r = u*a (mod m) up to multiples of m.
    std::vector<AlgNum> r0 = tw->minpoly(), r1 = a0;
    std::vector<AlgNum> u0 = {}, u1 = {AlgNum(1)};
    while (true) {
        trim(r1);
        if (r1.empty()) {
            // gcd is r0
            if (r0.size() == 1) {
                // unit gcd c: inverse = u0 / c
                AlgNum cinv = inverse(r0[0]);
                std::vector<AlgNum> res(u0.size());
                for (size_t i = 0; i < u0.size(); ++i) res[i] = u0[i] * cinv;
                return AlgNum(tw, vec_rem_monic(std::move(res), tw->minpoly()));
            }
            // Proper common factor: make it monic and split the tower.
            AlgNum lc = inverse(r0.back());
            std::vector<AlgNum> g(r0.size());
            for (size_t i = 0; i < r0.size(); ++i) g[i] = r0[i] * lc;
            // Co-factor h = minpoly / g (exact division, g monic).
            std::vector<AlgNum> rem = tw->minpoly(), h(tw->minpoly().size() - g.size() + 1);
            for (size_t k = h.size(); k-- > 0;) {
                AlgNum q = rem.size() > g.size() - 1 + k ? rem[g.size() - 1 + k] : AlgNum(0);
                h[k] = q;
                if (!q.is_zero())
                    for (size_t i = 0; i + 1 < g.size(); ++i)
                        rem[i + k] = rem[i + k] - q * g[i];
            }
            SplitRequest s;
            s.tower = tw;
            s.level = tw->depth() - 1;
            s.g = std::move(g);
            s.h = std::move(h);
            throw s;
        }
        // Divide r0 by r1: requires inverting lc(r1), which recurses one level
        // down and may itself split.
        AlgNum lcinv = inverse(r1.back());
        std::vector<AlgNum> q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0);
        std::vector<AlgNum> r = r0;
        for (size_t k = q.size(); k-- > 0;) {
            AlgNum qc = (r.size() > r1.size() - 1 + k ? r[r1.size() - 1 + k] : AlgNum(0)) * lcinv;
            q[k] = qc;
            if (!qc.is_zero())
                for (size_t i = 0; i < r1.size(); ++i)
                    r[i + k] = r[i + k] - qc * r1[i];
        }
        trim(r);
        if (r.size() >= r1.size()) throw InternalError("invert_mod: division did not reduce degree");
        // u_new = u0 - q*u1
        std::vector<AlgNum> un = vec_add(u0, vec_neg(vec_mul(q, u1)));
        r0 = std::move(r1); r1 = std::move(r);
        u0 = std::move(u1); u1 = std::move(un);
    }
}

} // namespace

AlgNum inverse(const AlgNum& a) {
    if (a.is_rational()) {
        if (a.rat() == 0) throw DivisionByZero();
        return AlgNum(Rat(1) / a.rat());
    }
    return invert_mod(a.coeffs(), a.tower());
}

AlgNum operator/(const AlgNum& a, const AlgNum& b) { return a * inverse(b); }

AlgNum pow(const AlgNum& a, long e) {
    if (e < 0) return pow(inverse(a), -e);
    AlgNum r(1), base = a;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

bool decide_nonzero(const AlgNum& a) {
    if (a.is_zero()) return false;
    if (a.is_rational()) return true;
    inverse(a);  // throws SplitRequest on zero divisor
    return true;
}

namespace {

// Evaluates the nested representation of `a` substituting each source-level
// root by images[level] (an element over `target` or a prefix).
AlgNum eval_images(const AlgNum& a, const std::vector<TowerPtr>& src_levels,
                   const std::vector<AlgNum>& images) {
    if (a.is_rational()) return a;
    int lvl = a.tower()->depth() - 1;
    const AlgNum& x = images[lvl];
    AlgNum acc(0);
    for (size_t i = a.coeffs().size(); i-- > 0;) {
        acc = acc * x + eval_images(a.coeffs()[i], src_levels, images);
    }
    return acc;
}

} // namespace

std::pair<TowerMap, TowerMap> split_tower(const SplitRequest& s) {
    // Collect levels bottom-to-top.
    std::vector<TowerPtr> levels;
    for (TowerPtr t = s.tower; t; t = t->base()) levels.push_back(t);
    std::reverse(levels.begin(), levels.end());

    auto build = [&](const std::vector<AlgNum>& factor) {
        TowerMap m;
        m.source = s.tower;
        m.images.resize(levels.size());
        TowerPtr cur;  // target tower so far
        // Levels below the split are untouched.
        for (int i = 0; i < s.level; ++i) {
            cur = levels[i];
            m.images[i] = levels[i]->root();
        }
        // Helper mapping an element of levels[<k] into the target built so far.
        auto map_elem = [&](const AlgNum& a) { return eval_images(a, levels, m.images); };
        // Split level: replace minpoly by the factor.
        {
            std::vector<AlgNum> f(factor.size());
            for (size_t i = 0; i < factor.size(); ++i) f[i] = map_elem(factor[i]);
            if (f.size() == 2) {
                m.images[s.level] = -f[0];  // linear: explicit root, level collapses
            } else {
                cur = Tower::extend(cur, levels[s.level]->var(), std::move(f));
                m.images[s.level] = cur->root();
            }
        }
        // Re-adjoin upper levels with remapped minimal polynomials.
        for (size_t i = s.level + 1; i < levels.size(); ++i) {
            std::vector<AlgNum> f(levels[i]->minpoly().size());
            for (size_t j = 0; j < f.size(); ++j) f[j] = map_elem(levels[i]->minpoly()[j]);
            trim(f);
            if (f.size() < 2) throw InternalError("split_tower: upper minpoly degenerated");
            if (f.size() == 2) {
                AlgNum c1inv = inverse(f[1]);
                m.images[i] = -(f[0] * c1inv);
            } else {
                // keep monic: leading coefficient is 1 and maps to 1
                cur = Tower::extend(cur, levels[i]->var(), std::move(f));
                m.images[i] = cur->root();
            }
        }
        m.target = cur;
        return m;
    };
    return {build(s.g), build(s.h)};
}

std::pair<TowerMap, TowerMap> split_tower_over(const SplitRequest& s, const TowerPtr& full) {
    SplitRequest s2 = s;
    s2.tower = common_tower(s.tower, full);
    return split_tower(s2);
}

AlgNum apply(const TowerMap& m, const AlgNum& a) {
    if (a.is_rational()) return a;
    if (!tower_prefix_of(a.tower(), m.source)) throw InternalError("TowerMap::apply: element not over source");
    std::vector<TowerPtr> levels;
    for (TowerPtr t = m.source; t; t = t->base()) levels.push_back(t);
    std::reverse(levels.begin(), levels.end());
    return eval_images(a, levels, m.images);
}

AlgNum eval_levels(const AlgNum& a, const std::vector<AlgNum>& images) {
    if (a.is_rational()) return a;
    if (static_cast<size_t>(a.tower()->depth()) > images.size())
        throw InternalError("eval_levels: missing image for a tower level");
    return eval_images(a, {}, images);
}

} // namespace basept
