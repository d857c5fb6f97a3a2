#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "steiner/family.hpp"

namespace steiner {

// Fixed-size bit vector over [0, v) marking which nonzero elements are
// already used as a within-block difference.
class DiffMask {
public:
    explicit DiffMask(std::uint32_t size)
        : bits_((size + 63) / 64, 0), size_(size) {}

    bool test(std::uint32_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
    std::uint32_t size() const { return size_; }
    std::uint64_t count() const;

    // First unset index >= from; size() when none.
    std::uint32_t first_unused(std::uint32_t from) const;

private:
    friend class PartialFamily;
    void set(std::uint32_t i) { bits_[i >> 6] |= 1ull << (i & 63); }
    void clear(std::uint32_t i) { bits_[i >> 6] &= ~(1ull << (i & 63)); }

    std::vector<std::uint64_t> bits_;
    std::uint32_t size_;
};

// Backtracking state for the difference family search: committed blocks,
// the block under construction and the family-wide used-difference mask.
// Elements are canonical indices of the bound group.
class PartialFamily {
public:
    PartialFamily(GroupSpec spec, std::uint32_t k, std::uint32_t block_count);

    // The backtracking kernel. Accepts the candidate iff it is not already
    // in the open block and every difference it forms with the open block
    // (both signs) is unused; on accept the mask gains exactly
    // 2 * (previous open block size) entries.
    bool try_extend(std::uint32_t candidate);

    // Undoes the most recent successful try_extend on the open block.
    void retract();

    bool block_full() const { return open_.size() == k_; }
    void commit_block();    // requires block_full()
    void uncommit_block();  // moves the last committed block back to open

    bool complete() const { return committed_.size() == block_count_ && open_.empty(); }
    DifferenceFamily to_family() const;  // requires complete()

    const GroupSpec& spec() const { return spec_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t block_count() const { return block_count_; }
    const DiffMask& mask() const { return mask_; }
    const std::vector<std::uint32_t>& open_block() const { return open_; }
    const std::vector<std::vector<std::uint32_t>>& committed_blocks() const { return committed_; }

    // Canonical index of a - b, computed on the residue tables.
    std::uint32_t diff_index(std::uint32_t a, std::uint32_t b) const;

private:
    struct Tables;  // per-group residue rows and difference table, shared by copies

    GroupSpec spec_;
    std::uint32_t k_;
    std::uint32_t block_count_;
    std::shared_ptr<const Tables> tables_;
    DiffMask mask_;
    std::vector<std::vector<std::uint32_t>> committed_;
    std::vector<std::uint32_t> open_;
    std::vector<std::uint32_t> diff_trail_;        // flattened per-extend diff indices
    std::vector<std::uint32_t> diff_trail_marks_;  // trail length before each extend
};

struct SearchConfig {
    static constexpr std::uint64_t kDefaultSeed = 1;

    GroupSpec spec;
    std::uint32_t k = 0;
    std::uint32_t block_count = 0;  // b, must satisfy b*k*(k-1) = v-1
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t max_restarts = 10000;
    std::chrono::milliseconds time_limit{60000};
    bool candidate_shuffle = true;
    // DFS nodes per restart before giving up and reshuffling; 0 = unlimited.
    std::uint64_t max_nodes_per_restart = 100000;
    unsigned workers = 1;  // determinism is guaranteed only with 1
};

enum class SearchTermination { found, restarts_exhausted, time_limit };

const char* to_string(SearchTermination t);

struct SearchOutcome {
    std::optional<DifferenceFamily> found;
    std::uint64_t restarts_used = 0;
    std::uint64_t nodes_expanded = 0;
    std::chrono::milliseconds elapsed{0};
    SearchTermination terminated_by = SearchTermination::restarts_exhausted;
};

// Seeded randomized-restart depth-first search. Every block contains the
// identity; any returned family is re-verified through verify_lambda1
// before it is published. Deterministic for a fixed config with one worker.
SearchOutcome search_difference_family(const SearchConfig& cfg);

// Exhaustive deterministic DFS over the normalized space (identity in
// every block, each block's second element forced to the smallest unused
// difference). Collects every solution, up to max_results (0 = all).
std::vector<DifferenceFamily> enumerate_normalized_families(const GroupSpec& spec,
                                                            std::uint32_t k,
                                                            std::uint32_t block_count,
                                                            std::size_t max_results = 0);

}  // namespace steiner
