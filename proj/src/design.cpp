#include "steiner/design.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

namespace steiner {

namespace {

// Index of the unordered pair (a, b), a < b, in a dense triangular array:
// row a starts at a*(2v-a-1)/2.
inline std::uint64_t pair_index(std::uint32_t v, std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint64_t>(a) * (2ull * v - a - 1) / 2 + (b - a - 1);
}

}  // namespace

Design::Design(std::uint32_t v, std::uint32_t k, std::vector<std::vector<std::uint32_t>> blocks,
               std::uint64_t duplicate_translates)
    : v_(v), k_(k), blocks_(std::move(blocks)), duplicate_translates_(duplicate_translates) {
    if (k_ < 2 || k_ > v_)
        throw Error("design needs 2 <= k <= v, got k = " + std::to_string(k_) + ", v = " +
                    std::to_string(v_));
    for (auto& block : blocks_) {
        if (block.size() != k_)
            throw Error("design block of size " + std::to_string(block.size()) +
                        ", expected " + std::to_string(k_));
        std::sort(block.begin(), block.end());
        if (std::adjacent_find(block.begin(), block.end()) != block.end())
            throw Error("duplicate point in design block");
        if (block.back() >= v_)
            throw Error("point " + std::to_string(block.back()) + " out of range [0, " +
                        std::to_string(v_) + ")");
    }
    std::sort(blocks_.begin(), blocks_.end());
}

Design develop(const DifferenceFamily& f) {
    const GroupSpec& spec = f.spec();
    const std::uint32_t v = spec.order();
    if (f.difference_pair_count() != v - 1)
        throw Error("cannot develop: b*k*(k-1) = " + std::to_string(f.difference_pair_count()) +
                    " != v-1 = " + std::to_string(v - 1));

    const auto& factors = spec.factors();
    const std::size_t m = factors.size();

    std::vector<std::vector<std::uint32_t>> blocks;
    blocks.reserve(static_cast<std::size_t>(f.block_count()) * v);
    std::vector<std::uint32_t> g(m, 0);
    std::vector<std::uint32_t> translated(f.k());
    for (std::uint32_t gi = 0; gi < v; ++gi) {
        for (const BaseBlock& base : f.blocks()) {
            const auto& elems = base.elements();
            for (std::size_t e = 0; e < elems.size(); ++e) {
                const auto& r = elems[e].residues();
                std::uint64_t idx = 0;
                for (std::size_t t = 0; t < m; ++t) {
                    std::uint32_t s = r[t] + g[t];
                    if (s >= factors[t]) s -= factors[t];
                    idx = idx * factors[t] + s;
                }
                translated[e] = static_cast<std::uint32_t>(idx);
            }
            std::vector<std::uint32_t> block = translated;
            std::sort(block.begin(), block.end());
            blocks.push_back(std::move(block));
        }
        // next translate in mixed-radix order
        for (std::size_t t = m; t-- > 0;) {
            if (++g[t] < factors[t]) break;
            g[t] = 0;
        }
    }

    std::sort(blocks.begin(), blocks.end());
    auto last = std::unique(blocks.begin(), blocks.end());
    std::uint64_t duplicates = static_cast<std::uint64_t>(blocks.end() - last);
    blocks.erase(last, blocks.end());
    return Design(v, f.k(), std::move(blocks), duplicates);
}

PairCoverageReport pair_coverage(const Design& d) {
    const std::uint32_t v = d.v();
    const std::uint64_t total_pairs = static_cast<std::uint64_t>(v) * (v - 1) / 2;
    std::vector<std::uint32_t> counts(total_pairs, 0);
    for (const auto& block : d.blocks())
        for (std::size_t i = 0; i < block.size(); ++i)
            for (std::size_t j = i + 1; j < block.size(); ++j)
                ++counts[pair_index(v, block[i], block[j])];

    PairCoverageReport report;
    std::uint64_t pos = 0;
    for (std::uint32_t a = 0; a < v; ++a) {
        for (std::uint32_t b = a + 1; b < v; ++b, ++pos) {
            std::uint32_t c = counts[pos];
            ++report.histogram[c];
            if (c != 1 && report.offending_pairs.size() < PairCoverageReport::kOffendingCap)
                report.offending_pairs.push_back({a, b, c});
        }
    }
    report.is_steiner = report.histogram.size() == 1 && report.histogram.count(1) == 1 &&
                        report.histogram.at(1) == total_pairs;
    return report;
}

std::vector<std::uint32_t> point_replication(const Design& d) {
    std::vector<std::uint32_t> repl(d.v(), 0);
    for (const auto& block : d.blocks())
        for (std::uint32_t p : block) ++repl[p];
    return repl;
}

DesignParams design_params(std::uint64_t v, std::uint64_t k) {
    if (k < 2 || v <= k)
        throw Error("design parameters need v > k >= 2, got v = " + std::to_string(v) +
                    ", k = " + std::to_string(k));
    DesignParams params;
    params.v = v;
    params.k = k;
    std::uint64_t pair_total = v * (v - 1);
    std::uint64_t block_pairs = k * (k - 1);
    if ((v - 1) % (k - 1) == 0 && pair_total % block_pairs == 0) {
        params.feasible = true;
        params.b = pair_total / block_pairs;
        params.r = (v - 1) / (k - 1);
    }
    return params;
}

Design parse_design(std::string_view text) {
    // same line discipline as family files
    std::vector<std::pair<int, std::string_view>> lines;
    {
        int number = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string_view line =
                text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);
            ++number;
            if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            if (line.find_first_not_of(" \t\r") != std::string_view::npos)
                lines.emplace_back(number, line);
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }
    if (lines.size() < 2) throw ParseError("design file needs 'v' and 'k' header lines");

    auto parse_header = [&](std::size_t i, std::string_view key) -> std::uint64_t {
        std::string_view line = lines[i].second;
        std::size_t start = line.find_first_not_of(" \t\r");
        std::size_t key_end = line.find_first_of(" \t\r", start);
        if (key_end == std::string_view::npos || line.substr(start, key_end - start) != key)
            throw ParseError("expected '" + std::string(key) + " <integer>'", lines[i].first, 1);
        std::size_t val_start = line.find_first_not_of(" \t\r", key_end);
        if (val_start == std::string_view::npos)
            throw ParseError("expected '" + std::string(key) + " <integer>'", lines[i].first, 1);
        std::size_t val_end = line.find_first_of(" \t\r", val_start);
        if (val_end == std::string_view::npos) val_end = line.size();
        if (line.find_first_not_of(" \t\r", val_end) != std::string_view::npos)
            throw ParseError("trailing text after '" + std::string(key) + "' header",
                             lines[i].first, static_cast<int>(val_end) + 1);
        std::string_view value = line.substr(val_start, val_end - val_start);
        std::uint64_t parsed = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw ParseError("malformed integer '" + std::string(value) + "'", lines[i].first,
                             static_cast<int>(val_start) + 1);
        return parsed;
    };

    std::uint64_t v = parse_header(0, "v");
    std::uint64_t k = parse_header(1, "k");
    if (v < 2 || v > GroupSpec::kMaxOrder)
        throw ParseError("point count v out of range", lines[0].first, 1);
    if (k < 2 || k > v) throw ParseError("block size k out of range", lines[1].first, 1);

    std::vector<std::vector<std::uint32_t>> blocks;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        std::string_view line = lines[i].second;
        std::vector<std::uint32_t> block;
        std::size_t pos = 0;
        while (pos < line.size()) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string_view::npos) break;
            std::size_t end = line.find_first_of(" \t\r", pos);
            if (end == std::string_view::npos) end = line.size();
            std::string_view token = line.substr(pos, end - pos);
            std::uint64_t point = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), point);
            if (ec != std::errc() || ptr != token.data() + token.size())
                throw ParseError("malformed point index '" + std::string(token) + "'",
                                 lines[i].first, static_cast<int>(pos) + 1);
            if (point >= v)
                throw ParseError("point " + std::to_string(point) + " out of range [0, " +
                                 std::to_string(v) + ")", lines[i].first, static_cast<int>(pos) + 1);
            block.push_back(static_cast<std::uint32_t>(point));
            pos = end;
        }
        if (block.size() != k)
            throw ParseError("block has " + std::to_string(block.size()) + " points, expected " +
                             std::to_string(k), lines[i].first, 1);
        std::vector<std::uint32_t> sorted = block;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParseError("duplicate point in block", lines[i].first, 1);
        blocks.push_back(std::move(block));
    }
    if (blocks.empty()) throw ParseError("design file contains no blocks");
    try {
        return Design(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(k),
                      std::move(blocks));
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

std::string format_design(const Design& d) {
    std::string out = "v " + std::to_string(d.v()) + "\nk " + std::to_string(d.k()) + "\n";
    for (const auto& block : d.blocks()) {
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(block[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace steiner
