#include "steiner/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <mutex>
#include <thread>
#include <utility>

namespace steiner {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += kGolden);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// Independent stream per restart so workers can claim restarts in any order.
SplitMix64 restart_rng(std::uint64_t seed, std::uint64_t restart) {
    SplitMix64 mix{seed + kGolden * (restart + 1)};
    mix.next();
    return mix;
}

// Fisher-Yates with our own index draw; std::shuffle is not pinned across
// standard library implementations.
void shuffle(std::vector<std::uint32_t>& values, SplitMix64& rng) {
    for (std::size_t i = values.size(); i > 1; --i)
        std::swap(values[i - 1], values[rng.next() % i]);
}

}  // namespace

std::uint64_t DiffMask::count() const {
    std::uint64_t total = 0;
    for (std::uint64_t w : bits_) total += std::popcount(w);
    return total;
}

std::uint32_t DiffMask::first_unused(std::uint32_t from) const {
    for (std::uint32_t i = from; i < size_; ++i)
        if (!test(i)) return i;
    return size_;
}

struct PartialFamily::Tables {
    std::vector<std::uint32_t> residues;   // v * rank, row per element
    std::vector<std::uint32_t> sub_table;  // v * v difference indices, when small enough
};

PartialFamily::PartialFamily(GroupSpec spec, std::uint32_t k, std::uint32_t block_count)
    : spec_(std::move(spec)), k_(k), block_count_(block_count), mask_(spec_.order()) {
    const std::uint32_t v = spec_.order();
    if (k_ < 2 || k_ > v)
        throw Error("search needs 2 <= k <= v, got k = " + std::to_string(k_));
    if (block_count_ < 1) throw Error("search needs at least one block");

    const auto& factors = spec_.factors();
    const std::size_t m = factors.size();
    auto tables = std::make_shared<Tables>();
    tables->residues.resize(static_cast<std::size_t>(v) * m);
    {
        std::vector<std::uint32_t> r(m, 0);
        for (std::uint32_t e = 0; e < v; ++e) {
            std::copy(r.begin(), r.end(),
                      tables->residues.begin() + static_cast<std::size_t>(e) * m);
            for (std::size_t t = m; t-- > 0;) {
                if (++r[t] < factors[t]) break;
                r[t] = 0;
            }
        }
    }
    // Dense difference table when it stays small (v <= 2048: at most 16 MiB).
    if (static_cast<std::uint64_t>(v) * v <= (1ull << 22)) {
        tables->sub_table.resize(static_cast<std::size_t>(v) * v);
        for (std::uint32_t a = 0; a < v; ++a) {
            const std::uint32_t* ra = &tables->residues[static_cast<std::size_t>(a) * m];
            for (std::uint32_t b = 0; b < v; ++b) {
                const std::uint32_t* rb = &tables->residues[static_cast<std::size_t>(b) * m];
                std::uint64_t idx = 0;
                for (std::size_t t = 0; t < m; ++t) {
                    std::uint32_t d = ra[t] >= rb[t] ? ra[t] - rb[t] : ra[t] + factors[t] - rb[t];
                    idx = idx * factors[t] + d;
                }
                tables->sub_table[static_cast<std::size_t>(a) * v + b] =
                    static_cast<std::uint32_t>(idx);
            }
        }
    }
    tables_ = std::move(tables);
}

std::uint32_t PartialFamily::diff_index(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t v = spec_.order();
    if (!tables_->sub_table.empty())
        return tables_->sub_table[static_cast<std::size_t>(a) * v + b];
    const auto& factors = spec_.factors();
    const std::size_t m = factors.size();
    const std::uint32_t* ra = &tables_->residues[static_cast<std::size_t>(a) * m];
    const std::uint32_t* rb = &tables_->residues[static_cast<std::size_t>(b) * m];
    std::uint64_t idx = 0;
    for (std::size_t t = 0; t < m; ++t) {
        std::uint32_t d = ra[t] >= rb[t] ? ra[t] - rb[t] : ra[t] + factors[t] - rb[t];
        idx = idx * factors[t] + d;
    }
    return static_cast<std::uint32_t>(idx);
}

bool PartialFamily::try_extend(std::uint32_t candidate) {
    if (candidate >= spec_.order())
        throw Error("candidate index " + std::to_string(candidate) + " out of range");
    if (std::find(open_.begin(), open_.end(), candidate) != open_.end()) return false;

    const std::size_t trail_start = diff_trail_.size();
    for (std::uint32_t member : open_) {
        const std::uint32_t d1 = diff_index(candidate, member);
        const std::uint32_t d2 = diff_index(member, candidate);
        // An involution difference (d1 == d2) always collides with itself:
        // its ordered census count would be 2.
        if (mask_.test(d1)) goto reject;
        mask_.set(d1);
        diff_trail_.push_back(d1);
        if (mask_.test(d2)) goto reject;
        mask_.set(d2);
        diff_trail_.push_back(d2);
    }
    diff_trail_marks_.push_back(static_cast<std::uint32_t>(trail_start));
    open_.push_back(candidate);
    return true;

reject:
    while (diff_trail_.size() > trail_start) {
        mask_.clear(diff_trail_.back());
        diff_trail_.pop_back();
    }
    return false;
}

void PartialFamily::retract() {
    if (open_.empty()) throw Error("retract on an empty open block");
    open_.pop_back();
    const std::uint32_t mark = diff_trail_marks_.back();
    diff_trail_marks_.pop_back();
    while (diff_trail_.size() > mark) {
        mask_.clear(diff_trail_.back());
        diff_trail_.pop_back();
    }
}

void PartialFamily::commit_block() {
    if (!block_full()) throw Error("commit_block on a block that is not full");
    committed_.push_back(std::move(open_));
    open_.clear();
}

void PartialFamily::uncommit_block() {
    if (!open_.empty() || committed_.empty())
        throw Error("uncommit_block without a committed block or with an open block");
    open_ = std::move(committed_.back());
    committed_.pop_back();
}

DifferenceFamily PartialFamily::to_family() const {
    if (!complete()) throw Error("to_family on an incomplete search state");
    std::vector<BaseBlock> blocks;
    blocks.reserve(committed_.size());
    for (const auto& indices : committed_) {
        std::vector<GroupElement> elems;
        elems.reserve(indices.size());
        for (std::uint32_t idx : indices) elems.push_back(element_from_index(spec_, idx));
        blocks.emplace_back(std::move(elems));
    }
    return DifferenceFamily(spec_, k_, std::move(blocks));
}

namespace {

#ifndef NDEBUG
// Debug cross-check: the mask must equal the difference census of the
// partial family (committed blocks plus the open block), thresholded at 1.
bool mask_matches_census(const PartialFamily& pf) {
    std::vector<char> expected(pf.spec().order(), 0);
    auto mark_block = [&](const std::vector<std::uint32_t>& block) {
        for (std::size_t i = 0; i < block.size(); ++i)
            for (std::size_t j = 0; j < block.size(); ++j)
                if (i != j) expected[pf.diff_index(block[i], block[j])] = 1;
    };
    for (const auto& block : pf.committed_blocks()) mark_block(block);
    mark_block(pf.open_block());
    for (std::uint32_t i = 0; i < pf.spec().order(); ++i)
        if (static_cast<bool>(expected[i]) != pf.mask().test(i)) return false;
    return true;
}
#endif

enum class StopReason { none, budget, time, cancelled, enough };

struct DfsDriver {
    PartialFamily pf;
    const std::vector<std::uint32_t>& order;  // candidate try-order, indices >= 1
    bool forced_second;
    std::uint64_t node_budget;  // 0 = unlimited
    std::chrono::steady_clock::time_point deadline;
    bool has_deadline;
    const std::atomic<bool>* cancelled;

    std::uint64_t nodes = 0;
    StopReason stop = StopReason::none;
    std::optional<DifferenceFamily> first_found;
    std::vector<DifferenceFamily>* sink = nullptr;  // enumerate mode when set
    std::size_t max_results = 0;

    DfsDriver(PartialFamily state, const std::vector<std::uint32_t>& order, bool forced_second)
        : pf(std::move(state)), order(order), forced_second(forced_second), node_budget(0),
          has_deadline(false), cancelled(nullptr) {}

    bool out_of_budget() {
        if ((nodes & 0xFF) == 0) {
            if (cancelled && cancelled->load(std::memory_order_relaxed)) {
                stop = StopReason::cancelled;
                return true;
            }
            if (has_deadline && std::chrono::steady_clock::now() >= deadline) {
                stop = StopReason::time;
                return true;
            }
        }
        if (node_budget && nodes >= node_budget) {
            stop = StopReason::budget;
            return true;
        }
        return false;
    }

    bool note_node() {
        ++nodes;
#ifndef NDEBUG
        if ((nodes & 0x3FF) == 0) assert(mask_matches_census(pf));
#endif
        return out_of_budget();
    }

    // True unwinds the stack: a result in first-found mode, or a stop.
    bool on_solution() {
        if (sink) {
            sink->push_back(pf.to_family());
            if (max_results && sink->size() >= max_results) {
                stop = StopReason::enough;
                return true;
            }
            return false;
        }
        first_found = pf.to_family();
        return true;
    }

    bool descend(std::uint32_t candidate) {
        if (!pf.try_extend(candidate)) return false;
        if (note_node()) {
            pf.retract();
            return true;
        }
        bool unwind;
        if (pf.block_full()) {
            pf.commit_block();
            unwind = pf.complete() ? on_solution() : expand();
            pf.uncommit_block();
        } else {
            unwind = expand();
        }
        pf.retract();
        return unwind;
    }

    // Expands the next slot of the open block (possibly empty).
    bool expand() {
        const std::size_t slot = pf.open_block().size();
        if (slot == 0) return descend(0);  // identity leads every block

        if (slot == 1 && forced_second) {
            // Canonical form: the second element is the smallest difference
            // the committed blocks have not used yet.
            const std::uint32_t d = pf.mask().first_unused(1);
            if (d >= pf.mask().size()) return false;
            return descend(d);
        }

        std::uint32_t min_candidate;
        if (slot == 1) {
            // Blocks ordered by second element; second elements of distinct
            // blocks are distinct differences, so strict ordering is safe.
            const auto& committed = pf.committed_blocks();
            min_candidate = committed.empty() ? 1 : committed.back()[1] + 1;
        } else {
            min_candidate = pf.open_block().back() + 1;  // ascending within a block
        }

        for (std::uint32_t candidate : order) {
            if (candidate < min_candidate) continue;
            if (descend(candidate)) return true;
            if (stop != StopReason::none) return true;
        }
        return false;
    }
};

struct RestartResult {
    std::optional<DifferenceFamily> found;
    std::uint64_t nodes = 0;
    StopReason stop = StopReason::none;
};

RestartResult run_restart(const SearchConfig& cfg, std::uint64_t restart,
                          const PartialFamily& blank,
                          std::chrono::steady_clock::time_point deadline, bool has_deadline,
                          const std::atomic<bool>* cancelled) {
    std::vector<std::uint32_t> order(cfg.spec.order() > 0 ? cfg.spec.order() - 1 : 0);
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i + 1;
    if (cfg.candidate_shuffle) {
        SplitMix64 rng = restart_rng(cfg.seed, restart);
        shuffle(order, rng);
    }

    DfsDriver driver(blank, order, /*forced_second=*/!cfg.candidate_shuffle);
    driver.node_budget = cfg.max_nodes_per_restart;
    driver.deadline = deadline;
    driver.has_deadline = has_deadline;
    driver.cancelled = cancelled;
    driver.expand();

    RestartResult result;
    result.found = std::move(driver.first_found);
    result.nodes = driver.nodes;
    result.stop = driver.stop;
    return result;
}

void validate_config(const SearchConfig& cfg) {
    const std::uint32_t v = cfg.spec.order();
    if (cfg.k < 2 || cfg.k > v)
        throw Error("search needs 2 <= k <= v, got k = " + std::to_string(cfg.k) + ", v = " +
                    std::to_string(v));
    if (cfg.block_count < 1) throw Error("search needs at least one block");
    const std::uint64_t pairs =
        static_cast<std::uint64_t>(cfg.block_count) * cfg.k * (cfg.k - 1);
    if (pairs != v - 1)
        throw Error("divisibility violated: b*k*(k-1) = " + std::to_string(pairs) +
                    " != v-1 = " + std::to_string(v - 1));
    if (cfg.max_restarts < 1) throw Error("search needs at least one restart");
}

}  // namespace

const char* to_string(SearchTermination t) {
    switch (t) {
        case SearchTermination::found: return "found";
        case SearchTermination::restarts_exhausted: return "restarts-exhausted";
        case SearchTermination::time_limit: return "time-limit";
    }
    return "unknown";
}

SearchOutcome search_difference_family(const SearchConfig& cfg) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();
    const bool has_deadline = cfg.time_limit.count() > 0;
    const auto deadline = start + cfg.time_limit;

    const PartialFamily blank(cfg.spec, cfg.k, cfg.block_count);
    // With shuffling off every restart runs the same deterministic DFS, so
    // one pass settles it.
    const std::uint64_t restart_cap = cfg.candidate_shuffle ? cfg.max_restarts : 1;

    SearchOutcome outcome;

    if (cfg.workers <= 1) {
        std::uint64_t restart = 0;
        for (; restart < restart_cap; ++restart) {
            if (has_deadline && std::chrono::steady_clock::now() >= deadline) {
                outcome.terminated_by = SearchTermination::time_limit;
                break;
            }
            RestartResult r = run_restart(cfg, restart, blank, deadline, has_deadline, nullptr);
            outcome.nodes_expanded += r.nodes;
            if (r.found) {
                outcome.found = std::move(r.found);
                outcome.terminated_by = SearchTermination::found;
                ++restart;
                break;
            }
            if (r.stop == StopReason::time) {
                outcome.terminated_by = SearchTermination::time_limit;
                ++restart;
                break;
            }
        }
        outcome.restarts_used = restart;
        if (!outcome.found && outcome.terminated_by != SearchTermination::time_limit)
            outcome.terminated_by = SearchTermination::restarts_exhausted;
    } else {
        std::atomic<std::uint64_t> next_restart{0};
        std::atomic<std::uint64_t> total_nodes{0};
        std::atomic<bool> cancelled{false};
        std::atomic<bool> timed_out{false};
        std::mutex result_mutex;
        std::optional<DifferenceFamily> result;

        auto worker = [&] {
            while (!cancelled.load(std::memory_order_relaxed)) {
                const std::uint64_t restart = next_restart.fetch_add(1);
                if (restart >= restart_cap) break;
                if (has_deadline && std::chrono::steady_clock::now() >= deadline) {
                    timed_out.store(true);
                    break;
                }
                RestartResult r =
                    run_restart(cfg, restart, blank, deadline, has_deadline, &cancelled);
                total_nodes.fetch_add(r.nodes);
                if (r.found) {
                    std::lock_guard<std::mutex> lock(result_mutex);
                    // only the first published result counts; late finishers discard
                    if (!result) result = std::move(r.found);
                    cancelled.store(true);
                    break;
                }
                if (r.stop == StopReason::time) {
                    timed_out.store(true);
                    break;
                }
            }
        };

        std::vector<std::thread> threads;
        threads.reserve(cfg.workers);
        for (unsigned i = 0; i < cfg.workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();

        outcome.nodes_expanded = total_nodes.load();
        outcome.restarts_used = std::min<std::uint64_t>(next_restart.load(), restart_cap);
        if (result) {
            outcome.found = std::move(result);
            outcome.terminated_by = SearchTermination::found;
        } else {
            outcome.terminated_by = timed_out.load() ? SearchTermination::time_limit
                                                     : SearchTermination::restarts_exhausted;
        }
    }

    if (outcome.found) {
        // Self-certification through the family module, independent of the
        // engine's own difference mask.
        if (!verify_lambda1(*outcome.found).is_family)
            throw Error("internal error: search produced a family that fails verification");
    }
    outcome.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return outcome;
}

std::vector<DifferenceFamily> enumerate_normalized_families(const GroupSpec& spec,
                                                            std::uint32_t k,
                                                            std::uint32_t block_count,
                                                            std::size_t max_results) {
    validate_config(SearchConfig{.spec = spec, .k = k, .block_count = block_count});

    std::vector<std::uint32_t> order(spec.order() - 1);
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i + 1;

    std::vector<DifferenceFamily> results;
    DfsDriver driver(PartialFamily(spec, k, block_count), order, /*forced_second=*/true);
    driver.sink = &results;
    driver.max_results = max_results;
    driver.expand();
    return results;
}

}  // namespace steiner
