#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steiner/family.hpp"

namespace steiner {

// A block design on v points [0, v): a list of k-subsets, each sorted,
// the list itself sorted lexicographically. Points are canonical group
// element indices after development, but the design itself is
// group-agnostic.
class Design {
public:
    Design(std::uint32_t v, std::uint32_t k, std::vector<std::vector<std::uint32_t>> blocks,
           std::uint64_t duplicate_translates = 0);

    std::uint32_t v() const { return v_; }
    std::uint32_t k() const { return k_; }
    const std::vector<std::vector<std::uint32_t>>& blocks() const { return blocks_; }
    std::uint32_t block_count() const { return static_cast<std::uint32_t>(blocks_.size()); }

    // Translates merged by develop() because the source family was not
    // lambda=1; always 0 for a valid family. Metadata, not serialized.
    std::uint64_t duplicate_translates() const { return duplicate_translates_; }

private:
    std::uint32_t v_, k_;
    std::vector<std::vector<std::uint32_t>> blocks_;
    std::uint64_t duplicate_translates_;
};

// Multiplicity of every unordered point pair across all blocks.
// is_steiner holds exactly when the histogram is {1 -> v(v-1)/2}.
struct PairCoverageReport {
    static constexpr std::size_t kOffendingCap = 100;

    struct OffendingPair {
        std::uint32_t a, b;
        std::uint32_t multiplicity;  // != 1
    };

    bool is_steiner = false;
    std::map<std::uint32_t, std::uint64_t> histogram;  // multiplicity -> number of pairs
    std::vector<OffendingPair> offending_pairs;        // at most kOffendingCap entries
};

// 2-design parameters for (v, k): block count b = v(v-1)/(k(k-1)) and
// replication r = (v-1)/(k-1) when both divisions are exact.
struct DesignParams {
    std::uint64_t v = 0, k = 0;
    bool feasible = false;
    std::optional<std::uint64_t> b, r;
};

// Develops a family into the design of all block translates, de-duplicated.
// Requires the divisibility condition b*k*(k-1) = v-1; the lambda=1
// property itself is not required, so near-miss candidates can be developed
// and diagnosed.
Design develop(const DifferenceFamily& f);

PairCoverageReport pair_coverage(const Design& d);

// Blocks through each point; equals (v-1)/(k-1) everywhere in a 2-design.
std::vector<std::uint32_t> point_replication(const Design& d);

DesignParams design_params(std::uint64_t v, std::uint64_t k);

// Design file format (UTF-8, line oriented, '#' starts a comment):
//   v <integer>
//   k <integer>
//   <k point indices per block line>
Design parse_design(std::string_view text);
std::string format_design(const Design& d);

}  // namespace steiner
