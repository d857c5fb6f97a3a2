#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "steiner/design.hpp"
#include "steiner/fixtures.hpp"

using namespace steiner;

namespace {

DifferenceFamily family_from_indices(const GroupSpec& spec, std::uint32_t k,
                                     const std::vector<std::vector<std::uint32_t>>& blocks) {
    std::vector<BaseBlock> base;
    for (const auto& indices : blocks) {
        std::vector<GroupElement> elems;
        for (std::uint32_t i : indices) elems.push_back(element_from_index(spec, i));
        base.emplace_back(std::move(elems));
    }
    return DifferenceFamily(spec, k, std::move(base));
}

std::vector<oracle::TupleBlock> to_tuples(const DifferenceFamily& f) {
    std::vector<oracle::TupleBlock> out;
    for (const BaseBlock& block : f.blocks()) {
        oracle::TupleBlock tuples;
        for (const GroupElement& e : block.elements()) tuples.push_back(e.residues());
        out.push_back(std::move(tuples));
    }
    return out;
}

}  // namespace

TEST_CASE("design_params counting identities") {
    DesignParams p225 = design_params(225, 8);
    CHECK(p225.feasible);
    CHECK(*p225.b == 900);
    CHECK(*p225.r == 32);

    DesignParams p289 = design_params(289, 9);
    CHECK(p289.feasible);
    CHECK(*p289.b == 1156);
    CHECK(*p289.r == 36);

    DesignParams p7 = design_params(7, 3);
    CHECK(p7.feasible);
    CHECK(*p7.b == 7);
    CHECK(*p7.r == 3);

    DesignParams infeasible = design_params(8, 3);  // (v-1)/(k-1) = 7/2
    CHECK_FALSE(infeasible.feasible);
    CHECK_FALSE(infeasible.b.has_value());
    CHECK_FALSE(infeasible.r.has_value());

    CHECK_THROWS_AS(design_params(8, 8), Error);  // v > k required
    CHECK_THROWS_AS(design_params(3, 1), Error);
}

TEST_CASE("developing the Fano plane") {
    GroupSpec z7 = GroupSpec::parse("Z7");
    DifferenceFamily f = family_from_indices(z7, 3, {{0, 1, 3}});
    Design fano = develop(f);
    CHECK(fano.v() == 7);
    CHECK(fano.k() == 3);
    CHECK(fano.block_count() == 7);
    CHECK(fano.duplicate_translates() == 0);
    // the g = 0 translate is the base block itself
    CHECK(std::find(fano.blocks().begin(), fano.blocks().end(),
                    std::vector<std::uint32_t>{0, 1, 3}) != fano.blocks().end());

    PairCoverageReport report = pair_coverage(fano);
    CHECK(report.is_steiner);
    REQUIRE(report.histogram.size() == 1);
    CHECK(report.histogram.at(1) == 21);  // C(7,2)
    CHECK(report.offending_pairs.empty());
}

TEST_CASE("developing embedded families, cross-checked against the oracle") {
    // one 225-point family and one 289-point family in the unit suite;
    // the acceptance suite covers all ten
    for (const char* name : {"s2-8-225-g3355-1", "s2-9-289-g1717-3"}) {
        const FixtureEntry& entry = fixture(name);
        Design d = develop(entry.family);
        CHECK(d.v() == entry.v);
        CHECK(d.k() == entry.k);
        CHECK(d.block_count() == entry.b);
        CHECK(d.duplicate_translates() == 0);

        auto expected = oracle::develop(to_tuples(entry.family), entry.group.factors());
        REQUIRE(expected.size() == d.block_count());
        std::set<std::vector<std::uint32_t>> got(d.blocks().begin(), d.blocks().end());
        CHECK(got == expected);

        std::vector<std::uint32_t> repl = point_replication(d);
        CHECK(std::all_of(repl.begin(), repl.end(),
                          [&](std::uint32_t r) { return r == entry.r; }));
    }
}

TEST_CASE("pair coverage of a developed fixture family") {
    Design d = develop(fixture("s2-8-225-g3355-2").family);
    PairCoverageReport report = pair_coverage(d);
    CHECK(report.is_steiner);
    REQUIRE(report.histogram.size() == 1);
    CHECK(report.histogram.at(1) == 25200);  // C(225,2)
}

TEST_CASE("duplicated blocks break the Steiner property") {
    GroupSpec z7 = GroupSpec::parse("Z7");
    Design fano = develop(family_from_indices(z7, 3, {{0, 1, 3}}));
    std::vector<std::vector<std::uint32_t>> blocks = fano.blocks();
    blocks.push_back(blocks.front());
    Design damaged(7, 3, std::move(blocks));
    PairCoverageReport report = pair_coverage(damaged);
    CHECK_FALSE(report.is_steiner);
    CHECK(report.histogram.count(2) == 1);
    CHECK(report.histogram.at(2) == 3);  // the duplicated block repeats its 3 pairs

    // pair conservation: sum of multiplicity * pairs == blocks * C(k,2)
    std::uint64_t weighted = 0;
    for (const auto& [mult, pairs] : report.histogram)
        weighted += static_cast<std::uint64_t>(mult) * pairs;
    CHECK(weighted == 8 * 3);
}

TEST_CASE("offending pair list is capped") {
    // a single repeated block on 25 points leaves most pairs uncovered
    std::vector<std::vector<std::uint32_t>> blocks{{0, 1, 2}, {0, 1, 2}};
    PairCoverageReport report = pair_coverage(Design(25, 3, std::move(blocks)));
    CHECK_FALSE(report.is_steiner);
    CHECK(report.histogram.at(0) == 297);  // C(25,2) - 3
    CHECK(report.histogram.at(2) == 3);
    CHECK(report.offending_pairs.size() == PairCoverageReport::kOffendingCap);
}

TEST_CASE("develop requires the divisibility precondition") {
    GroupSpec z7 = GroupSpec::parse("Z7");
    CHECK_THROWS_AS(develop(family_from_indices(z7, 3, {{0, 1, 3}, {0, 2, 6}})), Error);
}

TEST_CASE("develop keeps going on non-lambda1 candidates and reports duplicates") {
    // {0,1,2} in Z7 has repeated differences; all 7 translates are still
    // distinct blocks, so the design exists but is not Steiner
    GroupSpec z7 = GroupSpec::parse("Z7");
    Design d = develop(family_from_indices(z7, 3, {{0, 1, 2}}));
    CHECK(d.block_count() == 7);
    CHECK(d.duplicate_translates() == 0);
    CHECK_FALSE(pair_coverage(d).is_steiner);

    // two base blocks that are translates of each other collapse: the 26
    // raw translates merge into 13 distinct blocks
    GroupSpec z13 = GroupSpec::parse("Z13");
    Design merged = develop(family_from_indices(z13, 3, {{0, 1, 4}, {1, 2, 5}}));
    CHECK(merged.block_count() == 13);
    CHECK(merged.duplicate_translates() == 13);
    CHECK_FALSE(pair_coverage(merged).is_steiner);
}

TEST_CASE("design file round-trip") {
    GroupSpec z7 = GroupSpec::parse("Z7");
    Design fano = develop(family_from_indices(z7, 3, {{0, 1, 3}}));
    std::string text = format_design(fano);
    Design back = parse_design(text);
    CHECK(back.v() == fano.v());
    CHECK(back.k() == fano.k());
    CHECK(back.blocks() == fano.blocks());
    CHECK(format_design(back) == text);

    Design big = develop(fixture("s2-9-289-g1717-2").family);
    Design big_back = parse_design(format_design(big));
    CHECK(big_back.blocks() == big.blocks());
}

TEST_CASE("design file parse errors") {
    CHECK_THROWS_AS(parse_design(""), ParseError);
    CHECK_THROWS_AS(parse_design("v 7\nk 3\n"), ParseError);          // no blocks
    CHECK_THROWS_AS(parse_design("k 3\nv 7\n0 1 3\n"), ParseError);   // swapped headers
    CHECK_THROWS_AS(parse_design("v 7\nk 3\n0 1\n"), ParseError);     // short block
    CHECK_THROWS_AS(parse_design("v 7\nk 3\n0 1 1\n"), ParseError);   // duplicate point
    CHECK_THROWS_AS(parse_design("v 7\nk 3\n0 1 x\n"), ParseError);   // malformed index

    try {
        parse_design("v 225\nk 2\n0 225\n");
        FAIL("expected range error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("range") != std::string::npos);
    }
}

TEST_CASE("lambda1 and Steiner verdicts agree on mutated candidates") {
    oracle::Rng rng{99};
    for (const char* name : {"s2-8-225-g559-2", "s2-9-289-g1717-4"}) {
        const FixtureEntry& entry = fixture(name);
        CHECK(verify_lambda1(entry.family).is_family);
        CHECK(pair_coverage(develop(entry.family)).is_steiner);

        const GroupSpec& spec = entry.group;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::vector<std::uint32_t>> blocks;
            for (const BaseBlock& b : entry.family.blocks()) blocks.push_back(b.indices());
            auto& block = blocks[rng.below(entry.family.block_count())];
            std::uint32_t& slot = block[rng.below(entry.k)];
            std::uint32_t replacement = rng.below(spec.order());
            if (std::find(block.begin(), block.end(), replacement) != block.end()) continue;
            slot = replacement;

            DifferenceFamily mutant = family_from_indices(spec, entry.k, blocks);
            Design developed = develop(mutant);
            PairCoverageReport report = pair_coverage(developed);
            bool lambda1 = verify_lambda1(mutant).is_family;
            CHECK(lambda1 == report.is_steiner);
            CHECK_FALSE(lambda1);

            // pair conservation holds whether or not the design is Steiner
            std::uint64_t weighted = 0;
            for (const auto& [mult, pairs] : report.histogram)
                weighted += static_cast<std::uint64_t>(mult) * pairs;
            CHECK(weighted == static_cast<std::uint64_t>(developed.block_count()) * entry.k *
                                  (entry.k - 1) / 2);
        }
    }
}
