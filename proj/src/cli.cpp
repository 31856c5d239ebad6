#include "basept/cli.hpp"

#include <json.hpp>

#include <sstream>

namespace basept {

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    int line, col = 1;

    Parser(const std::string& text, int line_no) : s(text), line(line_no) {}

    [[noreturn]] void fail(const std::string& what) { throw ParseError(line, col, what); }

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) advance();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    void advance() {
        ++pos;
        ++col;
    }
    bool accept(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    BiPoly parse_expr() {
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        BiPoly acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            char c = peek();
            if (c == '+') {
                advance();
                acc = acc + parse_term();
            } else if (c == '-') {
                advance();
                acc = acc - parse_term();
            } else {
                break;
            }
        }
        return acc;
    }

    BiPoly parse_term() {
        BiPoly acc = parse_factor();
        while (accept('*')) acc = acc * parse_factor();
        return acc;
    }

    BiPoly parse_factor() {
        BiPoly base = parse_atom();
        while (accept('^')) {
            long e = parse_nat();
            base = pow(base, e);
        }
        return base;
    }

    long parse_nat() {
        skip_ws();
        if (pos >= s.size() || !isdigit(static_cast<unsigned char>(s[pos]))) fail("expected exponent");
        long v = 0;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > 100000) fail("exponent too large");
            advance();
        }
        return v;
    }

    BiPoly parse_atom() {
        char c = peek();
        if (c == '(') {
            advance();
            BiPoly e = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (c == 'x') {
            advance();
            return BiPoly::monomial(1, 0);
        }
        if (c == 'y') {
            advance();
            return BiPoly::monomial(0, 1);
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            Int num = parse_int();
            if (accept('/')) {
                Int den = parse_int();
                if (den == 0) fail("zero denominator");
                Rat q(num, den);
                q.canonicalize();
                return BiPoly::constant(AlgNum(q));
            }
            return BiPoly::constant(AlgNum(Rat(num)));
        }
        fail("expected a term");
    }

    Int parse_int() {
        skip_ws();
        if (pos >= s.size() || !isdigit(static_cast<unsigned char>(s[pos]))) fail("expected a number");
        std::string digits;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
            digits += s[pos];
            advance();
        }
        return Int(digits);
    }
};

} // namespace

IdealInput parse_ideal(const std::string& text) {
    IdealInput ideal;
    std::istringstream in(text);
    std::string row;
    int line_no = 0;
    while (std::getline(in, row)) {
        ++line_no;
        auto hash = row.find('#');
        if (hash != std::string::npos) row = row.substr(0, hash);
        bool blank = true;
        for (char c : row) blank = blank && isspace(static_cast<unsigned char>(c));
        if (blank) continue;
        Parser p(row, line_no);
        BiPoly poly = p.parse_expr();
        if (p.peek() != '\0') p.fail("unexpected trailing input");
        ideal.generators.push_back(std::move(poly));
    }
    if (ideal.generators.empty()) throw EmptyIdeal();
    return ideal;
}

namespace {

std::string render_text(const BasePointsResult& r) {
    std::ostringstream os;
    if (r.unit_ideal) {
        os << "unit ideal: no base points\n";
        return os.str();
    }
    int n = r.cluster.size();
    os << "base points: " << n << "\n";
    if (n == 0) return os.str();
    ProximityMatrix P = proximity_matrix(r.cluster);
    os << "proximity matrix:\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) os << (j ? " " : "") << P.p[i][j];
        os << "\n";
    }
    os << "values:";
    for (auto v : r.values) os << " " << v;
    os << "\nmultiplicities:";
    for (auto e : r.mults) os << " " << e;
    os << "\npoints:\n";
    for (int i = 0; i < n; ++i) {
        const Point& p = r.cluster.points[i];
        os << "  " << (i + 1) << ": " << (p.is_satellite() ? "satellite" : (p.parent ? "free" : "origin"));
        if (p.parent) os << " prox " << (*p.parent + 1);
        if (p.parent2) os << "," << (*p.parent2 + 1);
        os << "\n";
    }
    return os.str();
}

nlohmann::json table_json(const ValueTable& t) {
    nlohmann::json j;
    j["points"] = nlohmann::json::array();
    for (auto& p : t.cluster.points) {
        nlohmann::json q;
        q["id"] = p.id + 1;
        auto par = nlohmann::json::array();
        if (p.parent) par.push_back(*p.parent + 1);
        if (p.parent2) par.push_back(*p.parent2 + 1);
        q["parents"] = par;
        j["points"].push_back(q);
    }
    j["values_per_generator"] = t.v_gen;
    j["values_fixed_part"] = t.v_fixed;
    j["values_min"] = t.v_min;
    return j;
}

nlohmann::json render_json(const BasePointsResult& r, const IdealInput& ideal, bool intermediates) {
    nlohmann::json j;
    j["generators"] = nlohmann::json::array();
    for (auto& g : ideal.generators) j["generators"].push_back(g.str());
    j["unit_ideal"] = r.unit_ideal;
    j["points"] = nlohmann::json::array();
    int n = r.cluster.size();
    for (int i = 0; i < n; ++i) {
        const Point& p = r.cluster.points[i];
        nlohmann::json q;
        q["id"] = i + 1;
        auto par = nlohmann::json::array();
        if (p.parent) par.push_back(*p.parent + 1);
        if (p.parent2) par.push_back(*p.parent2 + 1);
        q["parents"] = par;
        q["kind"] = p.is_satellite() ? "satellite" : (p.parent ? "free" : "origin");
        j["points"].push_back(q);
    }
    if (n > 0) {
        ProximityMatrix P = proximity_matrix(r.cluster);
        j["proximity_matrix"] = P.p;
        j["values"] = r.values;
        j["multiplicities"] = r.mults;
        auto edges = nlohmann::json::array();
        for (auto& [a, b] : r.graph.edges) edges.push_back({a + 1, b + 1});
        j["dual_graph"] = {{"edges", edges}};
    }
    if (intermediates && !r.unit_ideal) {
        nlohmann::json steps;
        steps["singular_cluster"] = table_json(r.table_kbar);
        steps["after_free_points"] = table_json(r.table_kprime);
        steps["after_satellite_points"] = table_json(r.table_kdprime);
        steps["multiplicities_before_pruning"] = r.e_kdprime;
        steps["bp_primary_values"] = r.k.values;
        auto sp = nlohmann::json::array();
        for (int i : r.s_points) sp.push_back(i + 1);
        steps["fixed_part_singular_points"] = sp;
        j["intermediates"] = steps;
    }
    return j;
}

} // namespace

std::string render(const BasePointsResult& result, const IdealInput& ideal, const RunConfig& cfg) {
    switch (cfg.format) {
        case OutputFormat::Text:
            return render_text(result);
        case OutputFormat::Json:
            return render_json(result, ideal, cfg.intermediates).dump(2) + "\n";
        case OutputFormat::Dot:
            return to_dot(result.graph);
    }
    throw InternalError("render: unknown format");
}

} // namespace basept
