#include "doctest.h"

#include <vector>

#include "oracles.hpp"
#include "steiner/group.hpp"

using namespace steiner;

TEST_CASE("group spec parsing") {
    GroupSpec g3355 = GroupSpec::parse("Z3xZ3xZ5xZ5");
    CHECK(g3355.factors() == std::vector<std::uint32_t>{3, 3, 5, 5});
    CHECK(g3355.order() == 225);
    CHECK(g3355.rank() == 4);
    CHECK(g3355.to_string() == "Z3xZ3xZ5xZ5");

    GroupSpec g1717 = GroupSpec::parse("Z17xZ17");
    CHECK(g1717.factors() == std::vector<std::uint32_t>{17, 17});
    CHECK(g1717.order() == 289);

    CHECK(GroupSpec::parse("Z5xZ5xZ9").order() == 225);
    CHECK(GroupSpec::parse("z3Xz5").to_string() == "Z3xZ5");
    CHECK(GroupSpec::parse("Z2147483647").order() == 2147483647u);
}

TEST_CASE("group spec parse errors") {
    CHECK_THROWS_AS(GroupSpec::parse(""), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("Z1xZ5"), ParseError);   // factor < 2
    CHECK_THROWS_AS(GroupSpec::parse("Z0"), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("Z"), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("3x5"), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("Z3x"), ParseError);     // trailing separator
    CHECK_THROWS_AS(GroupSpec::parse("Z3xxZ5"), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("Z3a"), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("Z-3"), ParseError);
    // 65536^2 = 2^32 overflows the order cap
    CHECK_THROWS_AS(GroupSpec::parse("Z65536xZ65536"), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("Z2147483648"), ParseError);
    CHECK_THROWS_AS(GroupSpec::parse("Z99999999999999999999"), ParseError);

    try {
        GroupSpec::parse("Z3xZ1xZ7");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("Z1") != std::string::npos);
    }
}

TEST_CASE("element labels") {
    GroupSpec g3355 = GroupSpec::parse("Z3xZ3xZ5xZ5");
    GroupSpec g559 = GroupSpec::parse("Z5xZ5xZ9");
    GroupSpec g1717 = GroupSpec::parse("Z17xZ17");

    CHECK(element_from_label(g3355, "1210").residues() ==
          std::vector<std::uint32_t>{1, 2, 1, 0});
    CHECK(element_from_label(g1717, "BG").residues() == std::vector<std::uint32_t>{11, 16});
    CHECK(element_from_label(g559, "447").residues() == std::vector<std::uint32_t>{4, 4, 7});
    // input is case-insensitive, output uppercase
    CHECK(element_from_label(g1717, "bg") == element_from_label(g1717, "BG"));
    CHECK(element_to_label(element_from_label(g1717, "bg")) == "BG");

    CHECK(element_to_label(element_from_label(g3355, "1210")) == "1210");
    CHECK(element_to_label(identity(g1717)) == "00");

    CHECK_THROWS_AS(element_from_label(g3355, "121"), ParseError);    // wrong length
    CHECK_THROWS_AS(element_from_label(g3355, "12100"), ParseError);
    CHECK_THROWS_AS(element_from_label(g3355, "3210"), ParseError);   // digit >= factor
    CHECK_THROWS_AS(element_from_label(g1717, "0H"), ParseError);     // outside alphabet
    CHECK_THROWS_AS(element_from_label(g1717, "0*"), ParseError);

    // factors above 17 have no digit labels
    GroupSpec g21 = GroupSpec::parse("Z21");
    CHECK_THROWS_AS(element_from_label(g21, "5"), ParseError);
    CHECK_THROWS_AS(element_to_label(element_from_index(g21, 18)), Error);
    CHECK_FALSE(g21.labels_supported());
    CHECK(g1717.labels_supported());
}

TEST_CASE("element tokens cover label-free groups") {
    GroupSpec g21 = GroupSpec::parse("Z21");
    CHECK(element_to_token(element_from_index(g21, 18)) == "(18)");
    CHECK(element_from_token(g21, "(18)").index() == 18);

    GroupSpec g1717 = GroupSpec::parse("Z17xZ17");
    CHECK(element_to_token(element_from_label(g1717, "BG")) == "BG");
    CHECK(element_from_token(g1717, "(11,16)") == element_from_label(g1717, "BG"));

    CHECK_THROWS_AS(element_from_token(g21, "(21)"), Error);   // not reduced
    CHECK_THROWS_AS(element_from_token(g21, "(1,2)"), ParseError);
    CHECK_THROWS_AS(element_from_token(g21, "(x)"), ParseError);
    CHECK_THROWS_AS(element_from_token(g21, "(1"), ParseError);
    CHECK_THROWS_AS(element_from_token(g21, ""), ParseError);
}

TEST_CASE("group arithmetic") {
    GroupSpec g3355 = GroupSpec::parse("Z3xZ3xZ5xZ5");
    GroupSpec g1717 = GroupSpec::parse("Z17xZ17");

    auto e = [&](std::vector<std::uint32_t> r) { return GroupElement(g3355, std::move(r)); };
    CHECK(add(e({0, 0, 1, 2}), e({0, 0, 1, 2})) == e({0, 0, 2, 4}));
    CHECK(neg(e({1, 2, 1, 0})) == e({2, 1, 4, 0}));
    CHECK(sub(GroupElement(g1717, {0, 0}), GroupElement(g1717, {0, 1})) ==
          GroupElement(g1717, {0, 16}));
    CHECK(add(e({2, 2, 4, 4}), e({1, 1, 1, 1})) == e({0, 0, 0, 0}));

    CHECK_THROWS_AS(add(identity(g3355), identity(g1717)), Error);  // mismatched groups
    CHECK_THROWS_AS(GroupElement(g3355, {3, 0, 0, 0}), Error);      // not reduced
    CHECK_THROWS_AS(GroupElement(g3355, {0, 0, 0}), Error);         // wrong arity
}

TEST_CASE("element indexing") {
    GroupSpec g3355 = GroupSpec::parse("Z3xZ3xZ5xZ5");
    GroupSpec g1717 = GroupSpec::parse("Z17xZ17");
    GroupSpec g559 = GroupSpec::parse("Z5xZ5xZ9");

    CHECK(GroupElement(g3355, {2, 1, 4, 0}).index() == 195);  // ((2*3+1)*5+4)*5+0
    CHECK(identity(g3355).index() == 0);
    CHECK(identity(g1717).index() == 0);
    CHECK(identity(g559).index() == 0);
    CHECK(element_from_index(g1717, 288).residues() == std::vector<std::uint32_t>{16, 16});
    CHECK(element_index(element_from_index(g559, 123)) == 123);

    CHECK_THROWS_AS(element_from_index(g1717, 289), Error);
    CHECK_THROWS_AS(element_from_index(g3355, 225), Error);
}

TEST_CASE("index bijection and label round-trip, exhaustive over the fixture groups") {
    for (const char* text : {"Z3xZ3xZ5xZ5", "Z5xZ5xZ9", "Z17xZ17"}) {
        GroupSpec spec = GroupSpec::parse(text);
        CAPTURE(text);
        for (std::uint32_t i = 0; i < spec.order(); ++i) {
            GroupElement e = element_from_index(spec, i);
            CHECK(e.index() == i);
            CHECK(element_from_label(spec, element_to_label(e)) == e);
        }
    }
}

TEST_CASE("arithmetic properties on random triples") {
    oracle::Rng rng{2024};
    for (const char* text : {"Z3xZ3xZ5xZ5", "Z5xZ5xZ9", "Z17xZ17", "Z2xZ2xZ2", "Z21"}) {
        GroupSpec spec = GroupSpec::parse(text);
        for (int trial = 0; trial < 200; ++trial) {
            GroupElement a = element_from_index(spec, rng.below(spec.order()));
            GroupElement b = element_from_index(spec, rng.below(spec.order()));
            GroupElement c = element_from_index(spec, rng.below(spec.order()));
            CHECK(add(a, b) == add(b, a));
            CHECK(add(add(a, b), c) == add(a, add(b, c)));
            CHECK(add(a, neg(a)) == identity(spec));
            CHECK(sub(a, b) == neg(sub(b, a)));
            CHECK(sub(a, b) == add(a, neg(b)));
        }
    }
}
