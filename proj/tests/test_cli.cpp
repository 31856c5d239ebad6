#include <doctest.h>

#include "basept/cli.hpp"
#include "support/golden.hpp"

using namespace basept;

TEST_CASE("parse simple ideals") {
    auto in = parse_ideal("x\ny\n");
    REQUIRE(in.generators.size() == 2);
    CHECK(in.generators[0].str() == "x");
    CHECK(in.generators[1].str() == "y");
}

TEST_CASE("parse the golden generators") {
    auto in = parse_ideal(golden::kIdealText);
    REQUIRE(in.generators.size() == 3);
    BiPoly a1 = in.generators[0];
    // (y^5 + x^7)^2 + y^10 x expanded
    BiPoly expect = pow(parse_ideal("y^5+x^7").generators[0], 2) +
                    parse_ideal("y^10*x").generators[0];
    CHECK(a1 == expect);
}

TEST_CASE("parser accepts comments, blank lines, rationals, unary minus") {
    auto in = parse_ideal("# comment line\n\n  3/2*x^2 - y   # trailing\n-x + 1/3\n");
    REQUIRE(in.generators.size() == 2);
    CHECK(in.generators[0].coeff(2, 0).rat() == Rat(3, 2));
    CHECK(in.generators[1].coeff(1, 0).rat() == Rat(-1));
    CHECK(in.generators[1].coeff(0, 0).rat() == Rat(1, 3));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_ideal("x +"), ParseError);
    CHECK_THROWS_AS(parse_ideal("x ) y"), ParseError);
    CHECK_THROWS_AS(parse_ideal(""), EmptyIdeal);
    try {
        parse_ideal("x\nx + \n");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("json round trip preserves the generators") {
    IdealInput ideal = parse_ideal(golden::kIdealText);
    auto r = base_points(ideal);
    RunConfig cfg;
    cfg.format = OutputFormat::Json;
    std::string js = render(r, ideal, cfg);
    // pull the canonical generator strings back out and reparse
    auto in2 = parse_ideal([&] {
        std::string text;
        auto pos = js.find("\"generators\"");
        auto lb = js.find('[', pos);
        auto rb = js.find(']', lb);
        std::string arr = js.substr(lb + 1, rb - lb - 1);
        size_t i = 0;
        while ((i = arr.find('"', i)) != std::string::npos) {
            size_t j = arr.find('"', i + 1);
            text += arr.substr(i + 1, j - i - 1) + "\n";
            i = j + 1;
        }
        return text;
    }());
    REQUIRE(in2.generators.size() == ideal.generators.size());
    for (size_t i = 0; i < in2.generators.size(); ++i)
        CHECK(in2.generators[i] == ideal.generators[i]);
}

TEST_CASE("rendering is deterministic") {
    IdealInput ideal = parse_ideal("y^2-x^3\nx*y\n");
    auto r1 = base_points(ideal);
    auto r2 = base_points(ideal);
    for (auto fmt : {OutputFormat::Text, OutputFormat::Json, OutputFormat::Dot}) {
        RunConfig cfg;
        cfg.format = fmt;
        cfg.intermediates = true;
        CHECK(render(r1, ideal, cfg) == render(r2, ideal, cfg));
    }
}

TEST_CASE("dot output of a single point") {
    IdealInput ideal = parse_ideal("x\ny\n");
    auto r = base_points(ideal);
    RunConfig cfg;
    cfg.format = OutputFormat::Dot;
    CHECK(render(r, ideal, cfg) == "graph {\n  n1 [label=\"1\"];\n}\n");
}
