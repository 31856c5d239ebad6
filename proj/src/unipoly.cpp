#include "basept/unipoly.hpp"

#include <sstream>

namespace basept {

UniPoly::UniPoly(std::string v, std::vector<AlgNum> coeffs) : var(std::move(v)), c(std::move(coeffs)) {
    trim();
}

void UniPoly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

std::string UniPoly::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << c[i].str();
        if (i >= 1) os << "*" << var;
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    UniPoly r(a.var);
    r.c.resize(std::max(a.c.size(), b.c.size()), AlgNum(0));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] = r.c[i] + a.c[i];
        if (i < b.c.size()) r.c[i] = r.c[i] + b.c[i];
    }
    r.trim();
    return r;
}

UniPoly operator-(const UniPoly& a) {
    UniPoly r(a.var);
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = -a.c[i];
    return r;
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    UniPoly r(a.var);
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, AlgNum(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

UniPoly operator*(const AlgNum& s, const UniPoly& a) {
    UniPoly r(a.var);
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = s * a.c[i];
    r.trim();
    return r;
}

UniPoly derivative(const UniPoly& a) {
    UniPoly r(a.var);
    if (a.c.size() <= 1) return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = AlgNum(static_cast<long>(i)) * a.c[i];
    r.trim();
    return r;
}

AlgNum eval(const UniPoly& a, const AlgNum& x) {
    AlgNum acc(0);
    for (size_t i = a.c.size(); i-- > 0;) acc = acc * x + a.c[i];
    return acc;
}

std::pair<UniPoly, UniPoly> divrem(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw DivisionByZero();
    UniPoly q(a.var), r = a;
    r.trim();
    if (r.degree() < b.degree()) return {q, r};
    AlgNum lcinv = inverse(b.lc());
    q.c.assign(r.degree() - b.degree() + 1, AlgNum(0));
    for (int k = static_cast<int>(q.c.size()); k-- > 0;) {
        int idx = b.degree() + k;
        if (idx >= static_cast<int>(r.c.size()) || r.c[idx].is_zero()) continue;
        AlgNum qc = r.c[idx] * lcinv;
        q.c[k] = qc;
        for (int i = 0; i <= b.degree(); ++i)
            r.c[i + k] = r.c[i + k] - qc * b.c[i];
    }
    q.trim();
    r.trim();
    return {q, r};
}

UniPoly div_exact(const UniPoly& a, const UniPoly& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw InternalError("div_exact: nonzero remainder");
    return q;
}

UniPoly make_monic(const UniPoly& a) {
    if (a.is_zero()) return a;
    return inverse(a.lc()) * a;
}

UniPoly gcd_monic(UniPoly a, UniPoly b) {
    a.trim(); b.trim();
    while (!b.is_zero()) {
        auto [q, r] = divrem(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return make_monic(a);
}

UniPoly squarefree_part(const UniPoly& a) {
    if (a.degree() <= 0) return make_monic(a);
    UniPoly g = gcd_monic(a, derivative(a));
    if (g.degree() == 0) return make_monic(a);
    return make_monic(div_exact(a, g));
}

} // namespace basept
