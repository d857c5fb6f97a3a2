#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "steiner/group.hpp"

namespace steiner {

// A base block: k distinct elements of one group, kept sorted by canonical
// index.
class BaseBlock {
public:
    explicit BaseBlock(std::vector<GroupElement> elements);

    const GroupSpec& spec() const { return elements_.front().spec(); }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const std::vector<std::uint32_t>& indices() const { return indices_; }
    std::size_t size() const { return elements_.size(); }

    friend bool operator==(const BaseBlock& a, const BaseBlock& b) {
        return a.spec() == b.spec() && a.indices_ == b.indices_;
    }
    friend bool operator!=(const BaseBlock& a, const BaseBlock& b) { return !(a == b); }

private:
    std::vector<GroupElement> elements_;   // ascending canonical index
    std::vector<std::uint32_t> indices_;   // cached indices of elements_
};

// b base blocks of size k over one group, claimed to form a (v,k,1)
// difference family. Blocks are canonically sorted on construction;
// input order is not preserved.
class DifferenceFamily {
public:
    DifferenceFamily(GroupSpec spec, std::uint32_t k, std::vector<BaseBlock> blocks);

    const GroupSpec& spec() const { return spec_; }
    std::uint32_t k() const { return k_; }
    const std::vector<BaseBlock>& blocks() const { return blocks_; }
    std::uint32_t block_count() const { return static_cast<std::uint32_t>(blocks_.size()); }

    // b*k*(k-1): the number of ordered within-block difference pairs.
    std::uint64_t difference_pair_count() const;

    friend bool operator==(const DifferenceFamily& a, const DifferenceFamily& b);
    friend bool operator!=(const DifferenceFamily& a, const DifferenceFamily& b) { return !(a == b); }

private:
    GroupSpec spec_;
    std::uint32_t k_;
    std::vector<BaseBlock> blocks_;
};

// Count of each group element among all ordered within-block differences
// x-y, x != y. counts has length v; counts[0] stays 0 (the identity is
// never a difference of distinct elements).
struct DifferenceCensus {
    std::vector<std::uint32_t> counts;

    std::uint64_t total() const;
};

// Certificate for the lambda=1 decision. is_family holds exactly when the
// divisibility condition b*k*(k-1) = v-1 holds and every nonzero element
// occurs exactly once as a difference.
struct Lambda1Report {
    bool divisibility_ok = false;
    std::vector<std::uint32_t> missing;                          // count 0
    std::vector<std::pair<std::uint32_t, std::uint32_t>> repeated;  // (index, count >= 2)
    bool is_family = false;

    std::uint32_t covered_once(std::uint32_t v) const {
        return v - 1 - static_cast<std::uint32_t>(missing.size() + repeated.size());
    }
};

DifferenceCensus difference_census(const DifferenceFamily& f);
Lambda1Report verify_lambda1(const DifferenceFamily& f);

// Family file format (UTF-8, line oriented, '#' starts a comment):
//   group <spec-string>
//   k <integer>
//   <k element tokens per block line>
// parse_family/format_family round-trip through the canonical form.
DifferenceFamily parse_family(std::string_view text);
std::string format_family(const DifferenceFamily& f);

}  // namespace steiner
