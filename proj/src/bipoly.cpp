#include "basept/bipoly.hpp"

#include <algorithm>
#include <sstream>

namespace basept {

BiPoly BiPoly::constant(AlgNum c) {
    BiPoly r;
    if (!c.is_zero()) r.m[{0, 0}] = std::move(c);
    return r;
}

BiPoly BiPoly::monomial(long a, long b, AlgNum c) {
    BiPoly r;
    if (!c.is_zero()) r.m[{a, b}] = std::move(c);
    return r;
}

bool BiPoly::is_constant() const {
    return m.empty() || (m.size() == 1 && m.begin()->first == std::make_pair(0L, 0L));
}

long BiPoly::deg_x() const {
    long d = -1;
    for (auto& [e, c] : m) d = std::max(d, e.first);
    return d;
}

long BiPoly::deg_y() const {
    long d = -1;
    for (auto& [e, c] : m) d = std::max(d, e.second);
    return d;
}

long BiPoly::total_degree() const {
    long d = -1;
    for (auto& [e, c] : m) d = std::max(d, e.first + e.second);
    return d;
}

long BiPoly::ord_origin() const {
    long d = -1;
    for (auto& [e, c] : m) d = (d < 0) ? e.first + e.second : std::min(d, e.first + e.second);
    return d;
}

long BiPoly::ord_x() const {
    long d = -1;
    for (auto& [e, c] : m) d = (d < 0) ? e.first : std::min(d, e.first);
    return d < 0 ? 0 : d;
}

long BiPoly::ord_y() const {
    long d = -1;
    for (auto& [e, c] : m) d = (d < 0) ? e.second : std::min(d, e.second);
    return d < 0 ? 0 : d;
}

const AlgNum& BiPoly::coeff(long a, long b) const {
    static const AlgNum zero(0);
    auto it = m.find({a, b});
    return it == m.end() ? zero : it->second;
}

void BiPoly::add_term(long a, long b, const AlgNum& c) {
    if (c.is_zero()) return;
    auto it = m.find({a, b});
    if (it == m.end()) {
        m.emplace(std::make_pair(a, b), c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) m.erase(it);
    }
}

bool BiPoly::operator==(const BiPoly& o) const {
    return (*this - o).is_zero();
}

std::string BiPoly::str() const {
    if (m.empty()) return "0";
    // lex-descending on (a, b) with x before y
    std::ostringstream os;
    bool first = true;
    for (auto it = m.rbegin(); it != m.rend(); ++it) {
        auto [a, b] = it->first;
        const AlgNum& c = it->second;
        std::string cs = c.str();
        bool neg = !c.tower() && c.rat() < 0;
        if (first) {
            if (neg) { os << "-"; cs = (-c).str(); }
        } else {
            os << (neg ? " - " : " + ");
            if (neg) cs = (-c).str();
        }
        first = false;
        bool unit_coeff = (cs == "1") && (a > 0 || b > 0);
        if (!unit_coeff) os << cs;
        if (a > 0) {
            if (!unit_coeff) os << "*";
            os << "x";
            if (a > 1) os << "^" << a;
            unit_coeff = false;
        }
        if (b > 0) {
            if (!unit_coeff) os << "*";
            os << "y";
            if (b > 1) os << "^" << b;
        }
    }
    return os.str();
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    BiPoly r = a;
    for (auto& [e, c] : b.m) r.add_term(e.first, e.second, c);
    return r;
}

BiPoly operator-(const BiPoly& a) {
    BiPoly r;
    for (auto& [e, c] : a.m) r.m[e] = -c;
    return r;
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (auto& [ea, ca] : a.m)
        for (auto& [eb, cb] : b.m)
            r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return r;
}

BiPoly operator*(const AlgNum& s, const BiPoly& a) {
    BiPoly r;
    if (s.is_zero()) return r;
    for (auto& [e, c] : a.m) {
        AlgNum t = s * c;
        if (!t.is_zero()) r.m[e] = std::move(t);
    }
    return r;
}

BiPoly pow(const BiPoly& a, long e) {
    BiPoly r = BiPoly::constant(AlgNum(1));
    BiPoly base = a;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

BiPoly derivative_x(const BiPoly& a) {
    BiPoly r;
    for (auto& [e, c] : a.m)
        if (e.first > 0) r.add_term(e.first - 1, e.second, AlgNum(e.first) * c);
    return r;
}

BiPoly derivative_y(const BiPoly& a) {
    BiPoly r;
    for (auto& [e, c] : a.m)
        if (e.second > 0) r.add_term(e.first, e.second - 1, AlgNum(e.second) * c);
    return r;
}

BiPoly subst(const BiPoly& f, const BiPoly& X, const BiPoly& Y) {
    // Powers are cached; monomials are visited in increasing (a, b).
    std::vector<BiPoly> xp = {BiPoly::constant(AlgNum(1))};
    std::vector<BiPoly> yp = {BiPoly::constant(AlgNum(1))};
    auto xpow = [&](long k) -> const BiPoly& {
        while (static_cast<long>(xp.size()) <= k) xp.push_back(xp.back() * X);
        return xp[k];
    };
    auto ypow = [&](long k) -> const BiPoly& {
        while (static_cast<long>(yp.size()) <= k) yp.push_back(yp.back() * Y);
        return yp[k];
    };
    BiPoly r;
    for (auto& [e, c] : f.m) r = r + c * (xpow(e.first) * ypow(e.second));
    return r;
}

UniPoly eval_x0(const BiPoly& f, const std::string& var) {
    UniPoly r(var);
    for (auto& [e, c] : f.m) {
        if (e.first != 0) continue;
        if (static_cast<long>(r.c.size()) <= e.second) r.c.resize(e.second + 1, AlgNum(0));
        r.c[e.second] = c;
    }
    r.trim();
    return r;
}

UniPoly eval_y0(const BiPoly& f, const std::string& var) {
    UniPoly r(var);
    for (auto& [e, c] : f.m) {
        if (e.second != 0) continue;
        if (static_cast<long>(r.c.size()) <= e.first) r.c.resize(e.first + 1, AlgNum(0));
        r.c[e.first] = c;
    }
    r.trim();
    return r;
}

AlgNum eval_origin(const BiPoly& f) { return f.coeff(0, 0); }

BiPoly shift_div_x(const BiPoly& f, long k) {
    BiPoly r;
    for (auto& [e, c] : f.m) {
        if (e.first < k) throw InternalError("shift_div_x: not divisible");
        r.m[{e.first - k, e.second}] = c;
    }
    return r;
}

BiPoly shift_div_y(const BiPoly& f, long k) {
    BiPoly r;
    for (auto& [e, c] : f.m) {
        if (e.second < k) throw InternalError("shift_div_y: not divisible");
        r.m[{e.first, e.second - k}] = c;
    }
    return r;
}

BiPoly mul_x(const BiPoly& f, long k) {
    BiPoly r;
    for (auto& [e, c] : f.m) r.m[{e.first + k, e.second}] = c;
    return r;
}

BiPoly lowest_form(const BiPoly& f) {
    BiPoly r;
    long d = f.ord_origin();
    for (auto& [e, c] : f.m)
        if (e.first + e.second == d) r.m[e] = c;
    return r;
}

std::vector<UniPoly> to_ydense(const BiPoly& f) {
    std::vector<UniPoly> r(std::max<long>(f.deg_y() + 1, 0), UniPoly("x"));
    for (auto& [e, c] : f.m) {
        UniPoly& p = r[e.second];
        if (static_cast<long>(p.c.size()) <= e.first) p.c.resize(e.first + 1, AlgNum(0));
        p.c[e.first] = c;
    }
    for (auto& p : r) p.trim();
    return r;
}

BiPoly from_ydense(const std::vector<UniPoly>& c) {
    BiPoly r;
    for (size_t b = 0; b < c.size(); ++b)
        for (size_t a = 0; a < c[b].c.size(); ++a)
            if (!c[b].c[a].is_zero()) r.m[{static_cast<long>(a), static_cast<long>(b)}] = c[b].c[a];
    return r;
}

namespace {

int ydeg(const std::vector<UniPoly>& a) {
    for (int i = static_cast<int>(a.size()); i-- > 0;)
        if (!a[i].is_zero()) return i;
    return -1;
}

void ytrim(std::vector<UniPoly>& a) { a.resize(ydeg(a) + 1, UniPoly("x")); }

// Pseudo-remainder of a by b in y over K[x], with the strict normalization
// lc(b)^(da-db+1) * a mod b that the subresultant algorithm relies on.
std::vector<UniPoly> yprem(std::vector<UniPoly> a, const std::vector<UniPoly>& b) {
    int da0 = ydeg(a), da = da0, db = ydeg(b);
    if (db < 0) throw DivisionByZero();
    const UniPoly& lb = b[db];
    int rounds = 0;
    while (da >= db) {
        UniPoly lead = a[da];
        for (int i = 0; i <= da; ++i) a[i] = lb * a[i];
        for (int i = 0; i <= db; ++i) a[da - db + i] = a[da - db + i] - lead * b[i];
        ytrim(a);
        ++rounds;
        int nd = ydeg(a);
        if (nd >= da) throw InternalError("yprem: degree did not drop");
        da = nd;
    }
    for (int k = rounds; k < da0 - db + 1; ++k)
        for (auto& c : a) c = lb * c;
    ytrim(a);
    return a;
}

UniPoly content_of(const std::vector<UniPoly>& a) {
    UniPoly g("x");
    for (auto& p : a) {
        if (p.is_zero()) continue;
        g = g.is_zero() ? make_monic(p) : gcd_monic(g, p);
        if (g.degree() == 0) break;
    }
    return g;
}

std::vector<UniPoly> divide_content(const std::vector<UniPoly>& a, const UniPoly& g) {
    std::vector<UniPoly> r(a.size(), UniPoly("x"));
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) r[i] = div_exact(a[i], g);
    return r;
}

} // namespace

BiPoly div_exact(const BiPoly& a, const BiPoly& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (a.is_zero()) return a;
    auto A = to_ydense(a), B = to_ydense(b);
    int da = ydeg(A), db = ydeg(B);
    if (da < db) throw InternalError("div_exact(BiPoly): not divisible (y-degree)");
    std::vector<UniPoly> Q(da - db + 1, UniPoly("x"));
    const UniPoly& lb = B[db];
    while (true) {
        int d = ydeg(A);
        if (d < db) break;
        UniPoly q = div_exact(A[d], lb);
        Q[d - db] = q;
        for (int i = 0; i <= db; ++i) A[d - db + i] = A[d - db + i] - q * B[i];
        ytrim(A);
        if (ydeg(A) >= d) throw InternalError("div_exact(BiPoly): no progress");
    }
    if (ydeg(A) >= 0) throw InternalError("div_exact(BiPoly): nonzero remainder");
    return from_ydense(Q);
}

BiPoly lex_monic(const BiPoly& a) {
    if (a.is_zero()) return a;
    const AlgNum& lead = a.m.rbegin()->second;
    return inverse(lead) * a;
}

BiPoly gcd(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() && b.is_zero()) return a;
    if (a.is_zero()) return lex_monic(b);
    if (b.is_zero()) return lex_monic(a);
    auto A = to_ydense(a), B = to_ydense(b);
    UniPoly ca = content_of(A), cb = content_of(B);
    A = divide_content(A, ca);
    B = divide_content(B, cb);
    UniPoly cg = gcd_monic(ca, cb);
    if (ydeg(A) < ydeg(B)) std::swap(A, B);
    while (ydeg(B) >= 0) {
        auto R = yprem(A, B);
        if (ydeg(R) >= 0) {
            UniPoly cr = content_of(R);
            R = divide_content(R, cr);
        }
        A = std::move(B);
        B = std::move(R);
    }
    // gcd = cg * primitive(A)
    BiPoly g = from_ydense(A);
    BiPoly r;
    for (size_t i = 0; i < cg.c.size(); ++i)
        if (!cg.c[i].is_zero()) r.add_term(static_cast<long>(i), 0, cg.c[i]);
    return lex_monic(r * g);
}

UniPoly resultant_y(const BiPoly& a, const BiPoly& b) {
    // Subresultant PRS (Cohen, Alg. 3.3.7), exact over K[x].
    auto A = to_ydense(a), B = to_ydense(b);
    int da = ydeg(A), db = ydeg(B);
    if (da < 0 || db < 0) return UniPoly("x");  // resultant with 0 is 0
    long sign = 1;
    if (da < db) {
        std::swap(A, B);
        std::swap(da, db);
        if ((da & 1) && (db & 1)) sign = -sign;
    }
    if (db == 0) {
        UniPoly r("x", {AlgNum(1)});
        for (int i = 0; i < da; ++i) r = r * B[0];
        return AlgNum(sign) * r;
    }
    UniPoly one("x", {AlgNum(1)});
    UniPoly ca = content_of(A), cb = content_of(B);
    A = divide_content(A, ca);
    B = divide_content(B, cb);
    UniPoly t = one;
    for (int i = 0; i < db; ++i) t = t * ca;
    for (int i = 0; i < da; ++i) t = t * cb;
    UniPoly g = one, h = one;
    while (true) {
        da = ydeg(A);
        db = ydeg(B);
        int delta = da - db;
        if ((da & 1) && (db & 1)) sign = -sign;
        auto R = yprem(A, B);
        A = std::move(B);
        if (ydeg(R) < 0) {
            if (ydeg(A) > 0) return UniPoly("x");  // common factor
            throw InternalError("resultant_y: unexpected zero remainder at constants");
        }
        UniPoly denom = g;
        for (int i = 0; i < delta; ++i) denom = denom * h;
        B = divide_content(R, denom);  // divides every coefficient exactly
        g = A[ydeg(A)];
        if (delta > 0) {
            UniPoly num = one;
            for (int i = 0; i < delta; ++i) num = num * g;
            for (int i = 0; i < delta - 1; ++i) num = div_exact(num, h);
            h = num;
        }
        if (ydeg(B) <= 0) {
            if (ydeg(B) < 0) return UniPoly("x");  // common factor
            // final: res = sign * t * h^{1-dA} * lc(B)^{dA}
            int dA = ydeg(A);
            UniPoly num = one;
            for (int i = 0; i < dA; ++i) num = num * B[0];
            for (int i = 0; i < dA - 1; ++i) num = div_exact(num, h);
            return AlgNum(sign) * (t * num);
        }
    }
}

} // namespace basept
