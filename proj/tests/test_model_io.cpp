#include <doctest.h>

#include "nesslat/model_io.hpp"

using namespace nesslat;

TEST_CASE("document parser: sections, numbers, strings, arrays, comments") {
    Document d = parse_document(
        "# leading comment\n"
        "[alpha]\n"
        "x = 1.5e-3   # trailing comment\n"
        "name = \"hello world\"\n"
        "vec = [1, 2, [3, -4]]\n"
        "[beta]\n"
        "x = 2\n");
    REQUIRE(d.find("alpha", "x"));
    CHECK(d.find("alpha", "x")->num() == doctest::Approx(1.5e-3));
    CHECK(d.find("alpha", "name")->str() == "hello world");
    const auto& v = d.find("alpha", "vec")->arr();
    REQUIRE(v.size() == 3);
    CHECK(v[0].num() == 1.0);
    CHECK(v[2].arr()[1].num() == -4.0);
    CHECK(d.find("beta", "x")->num() == 2.0);
    CHECK(d.find("beta", "missing") == nullptr);
    CHECK(d.find_section("gamma") == nullptr);
}

TEST_CASE("parse errors carry 1-based line and column") {
    try {
        parse_document("[model]\nx = @\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col >= 5);
    }
    CHECK_THROWS_AS(parse_document("x = 1\n"), ParseError);          // key before section
    CHECK_THROWS_AS(parse_document("[model]\nv = [1, 2\n"), ParseError); // unclosed array
    CHECK_THROWS_AS(parse_document("[model]\ns = \"abc\n"), ParseError); // unterminated string
    CHECK_THROWS_AS(parse_document("[model]\nx = 1 2\n"), ParseError);   // trailing junk
}

TEST_CASE("builtin model round-trips through text") {
    ModelSpec m = builtin_model("fermion", {{"t", 1.0}, {"mu", 0.25}, {"v", 0.5}});
    ModelSpec back = parse_model(serialize_model(m));
    CHECK(back.name == m.name);
    CHECK(back.local_dim == m.local_dim);
    CHECK(back.params == m.params);
    CHECK(max_abs(Mat(back.bond - m.bond)) == 0.0);
    CHECK(max_abs(Mat(back.charge - m.charge)) == 0.0);
}

TEST_CASE("raw-matrix model round-trips exactly (17 significant digits)") {
    ModelSpec m;
    m.name = "custom";
    m.local_dim = 2;
    m.charge = 0.5 * pauli_z();
    Mat sx = 0.5 * pauli_x(), sy = 0.5 * pauli_y(), sz = 0.5 * pauli_z();
    m.bond = kron(sx, sx) + kron(sy, sy) + (1.0 / 3.0) * kron(sz, sz);
    validate_model(m);
    ModelSpec back = parse_model(serialize_model(m));
    CHECK(back.local_dim == 2);
    CHECK(max_abs(Mat(back.bond - m.bond)) == 0.0);
    CHECK(max_abs(Mat(back.charge - m.charge)) == 0.0);
}

TEST_CASE("model files reject structural mistakes") {
    CHECK_THROWS(parse_model("[other]\nx = 1\n"));                    // no [model]
    CHECK_THROWS(parse_model("[model]\nbuiltin = \"xxz\"\n"));        // missing lambda
    CHECK_THROWS(parse_model("[model]\nlocal_dim = 2\n"));            // missing matrices
    CHECK_THROWS(parse_model(                                          // non-square bond
        "[model]\nlocal_dim = 2\n"
        "bond = [[[1,0],[0,0]],[[0,0]]]\n"
        "charge = [[[1,0],[0,0]],[[0,0],[0,0]]]\n"));
    CHECK_THROWS(parse_model(                                          // entry not [re,im]
        "[model]\nlocal_dim = 2\n"
        "bond = [[1,0],[0,1]]\n"
        "charge = [[[1,0],[0,0]],[[0,0],[0,0]]]\n"));
}

TEST_CASE("builtin stanza accepts params in any order") {
    ModelSpec m = parse_model(
        "[model]\n"
        "params.v = 0\n"
        "builtin = \"fermion\"\n"
        "params.t = 1\n"
        "params.mu = 0.5\n");
    CHECK(m.name == "fermion");
    CHECK(m.params.at("mu") == 0.5);
}
