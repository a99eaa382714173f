#include <catch_amalgamated.hpp>
#include <cmath>

#include "pdekit/expr.hpp"

using namespace pdekit;

namespace {

double ev(const std::string& text, ExprEnv env = {}) {
    return Expr::parse(text).eval(env);
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(ev("1+2*3") == 7.0);
    CHECK(ev("(1+2)*3") == 9.0);
    CHECK(ev("2^3^2") == 512.0);  // right associative
    CHECK(ev("-2^2") == -4.0);    // unary binds outside the power
    CHECK(ev("10/4") == 2.5);
    CHECK(ev("1 - 2 - 3") == -4.0);
    CHECK(ev(" 2 * ( 3 + 4 ) ") == 14.0);
}

TEST_CASE("numbers") {
    CHECK(ev("3.25") == 3.25);
    CHECK(ev(".5") == 0.5);
    CHECK(ev("1e-3") == 1e-3);
    CHECK(ev("2.5E+2") == 250.0);
    CHECK_THROWS_AS(ev("1.2.3"), ExprError);
}

TEST_CASE("variables") {
    ExprEnv env;
    env.t = 2;
    env.x = 3;
    env.y = -1;
    env.u = 0.5;
    env.p = 4;
    CHECK(ev("t*x", env) == 6.0);
    CHECK(ev("x^2 + y", env) == 8.0);
    CHECK(ev("u*p", env) == 2.0);
    CHECK(ev("z", env) == 0.0);
    CHECK_THROWS_AS(ev("q", env), ExprError);
}

TEST_CASE("functions") {
    CHECK(ev("sin(0)") == 0.0);
    CHECK(ev("cos(0)") == 1.0);
    CHECK(ev("exp(1)") == Catch::Approx(M_E).margin(1e-15));
    CHECK(ev("sqrt(9)") == 3.0);
    CHECK(ev("abs(-2.5)") == 2.5);
    ExprEnv env;
    env.x = 0.7;
    CHECK(ev("sin(x)^2 + cos(x)^2", env) == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(ev("sin 1"), ExprError);
    CHECK_THROWS_AS(ev("foo(1)"), ExprError);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(ev(""), ExprError);
    CHECK_THROWS_AS(ev("1+"), ExprError);
    CHECK_THROWS_AS(ev("(1+2"), ExprError);
    CHECK_THROWS_AS(ev("1 2"), ExprError);
    CHECK_THROWS_AS(ev("#"), ExprError);
}
