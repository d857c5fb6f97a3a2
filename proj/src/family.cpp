#include "steiner/family.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <utility>

namespace steiner {

namespace {

struct Line {
    int number = 0;          // 1-based
    std::string_view text;   // comment stripped, not trimmed
};

// Splits into lines, strips '#' comments, drops blank lines.
std::vector<Line> meaningful_lines(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);
        ++number;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos)
            lines.push_back({number, line});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

struct Token {
    std::string_view text;
    int column;  // 1-based
};

std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        pos = line.find_first_not_of(" \t\r", pos);
        if (pos == std::string_view::npos) break;
        std::size_t end = line.find_first_of(" \t\r", pos);
        if (end == std::string_view::npos) end = line.size();
        tokens.push_back({line.substr(pos, end - pos), static_cast<int>(pos) + 1});
        pos = end;
    }
    return tokens;
}

std::uint64_t parse_uint(std::string_view text, const char* what, int line, int column) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ParseError(std::string("malformed ") + what + " '" + std::string(text) + "'",
                         line, column);
    return value;
}

}  // namespace

BaseBlock::BaseBlock(std::vector<GroupElement> elements) : elements_(std::move(elements)) {
    if (elements_.size() < 2)
        throw Error("base block needs at least 2 elements, got " + std::to_string(elements_.size()));
    const GroupSpec& spec = elements_.front().spec();
    for (const GroupElement& e : elements_)
        if (e.spec() != spec)
            throw Error("base block mixes elements of " + spec.to_string() + " and " +
                        e.spec().to_string());
    std::sort(elements_.begin(), elements_.end(),
              [](const GroupElement& a, const GroupElement& b) { return a.index() < b.index(); });
    indices_.reserve(elements_.size());
    for (const GroupElement& e : elements_) indices_.push_back(e.index());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw Error("duplicate element in base block");
}

DifferenceFamily::DifferenceFamily(GroupSpec spec, std::uint32_t k, std::vector<BaseBlock> blocks)
    : spec_(std::move(spec)), k_(k), blocks_(std::move(blocks)) {
    if (k_ < 2) throw Error("block size k must be >= 2, got " + std::to_string(k_));
    if (blocks_.empty()) throw Error("difference family needs at least one base block");
    for (const BaseBlock& b : blocks_) {
        if (b.spec() != spec_)
            throw Error("block over " + b.spec().to_string() + " in a family over " +
                        spec_.to_string());
        if (b.size() != k_)
            throw Error("block of size " + std::to_string(b.size()) + " in a family with k = " +
                        std::to_string(k_));
    }
    std::sort(blocks_.begin(), blocks_.end(), [](const BaseBlock& a, const BaseBlock& b) {
        return a.indices() < b.indices();
    });
}

std::uint64_t DifferenceFamily::difference_pair_count() const {
    return static_cast<std::uint64_t>(blocks_.size()) * k_ * (k_ - 1);
}

bool operator==(const DifferenceFamily& a, const DifferenceFamily& b) {
    return a.spec_ == b.spec_ && a.k_ == b.k_ && a.blocks_ == b.blocks_;
}

std::uint64_t DifferenceCensus::total() const {
    std::uint64_t sum = 0;
    for (std::uint32_t c : counts) sum += c;
    return sum;
}

DifferenceCensus difference_census(const DifferenceFamily& f) {
    const auto& factors = f.spec().factors();
    const std::size_t m = factors.size();
    DifferenceCensus census;
    census.counts.assign(f.spec().order(), 0);
    std::vector<std::uint32_t> diff(m);
    for (const BaseBlock& block : f.blocks()) {
        const auto& elems = block.elements();
        for (std::size_t i = 0; i < elems.size(); ++i) {
            const auto& ri = elems[i].residues();
            for (std::size_t j = 0; j < elems.size(); ++j) {
                if (i == j) continue;
                const auto& rj = elems[j].residues();
                std::uint64_t idx = 0;
                for (std::size_t t = 0; t < m; ++t) {
                    std::uint32_t d = ri[t] >= rj[t] ? ri[t] - rj[t] : ri[t] + factors[t] - rj[t];
                    idx = idx * factors[t] + d;
                }
                ++census.counts[idx];
            }
        }
    }
    return census;
}

Lambda1Report verify_lambda1(const DifferenceFamily& f) {
    const std::uint32_t v = f.spec().order();
    Lambda1Report report;
    report.divisibility_ok = f.difference_pair_count() == v - 1;
    DifferenceCensus census = difference_census(f);
    for (std::uint32_t i = 1; i < v; ++i) {
        if (census.counts[i] == 0)
            report.missing.push_back(i);
        else if (census.counts[i] >= 2)
            report.repeated.emplace_back(i, census.counts[i]);
    }
    report.is_family = report.divisibility_ok && report.missing.empty() && report.repeated.empty();
    return report;
}

DifferenceFamily parse_family(std::string_view text) {
    std::vector<Line> lines = meaningful_lines(text);
    if (lines.size() < 2) throw ParseError("family file needs 'group' and 'k' header lines");

    auto header = [&](std::size_t i, std::string_view key) -> Token {
        std::vector<Token> tokens = split_tokens(lines[i].text);
        if (tokens.size() != 2 || tokens[0].text != key)
            throw ParseError("expected '" + std::string(key) + " <value>'", lines[i].number,
                             tokens.empty() ? 1 : tokens[0].column);
        return tokens[1];
    };

    Token group_token = header(0, "group");
    GroupSpec spec = [&] {
        try {
            return GroupSpec::parse(group_token.text);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lines[0].number, group_token.column);
        }
    }();

    Token k_token = header(1, "k");
    std::uint64_t k = parse_uint(k_token.text, "block size", lines[1].number, k_token.column);
    if (k < 2 || k > spec.order())
        throw ParseError("block size " + std::to_string(k) + " out of range for group of order " +
                         std::to_string(spec.order()), lines[1].number, k_token.column);

    std::vector<BaseBlock> blocks;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        std::vector<Token> tokens = split_tokens(lines[i].text);
        if (tokens.size() != k)
            throw ParseError("block has " + std::to_string(tokens.size()) + " elements, expected " +
                             std::to_string(k), lines[i].number, tokens.front().column);
        std::vector<GroupElement> elems;
        elems.reserve(tokens.size());
        for (const Token& t : tokens) {
            try {
                elems.push_back(element_from_token(spec, t.text));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), lines[i].number, t.column);
            }
        }
        try {
            blocks.emplace_back(std::move(elems));
        } catch (const Error& e) {
            throw ParseError(e.what(), lines[i].number, tokens.front().column);
        }
    }
    if (blocks.empty()) throw ParseError("family file contains no blocks");
    try {
        return DifferenceFamily(std::move(spec), static_cast<std::uint32_t>(k), std::move(blocks));
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

std::string format_family(const DifferenceFamily& f) {
    std::string out = "group " + f.spec().to_string() + "\nk " + std::to_string(f.k()) + "\n";
    for (const BaseBlock& block : f.blocks()) {
        const auto& elems = block.elements();
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (i) out += ' ';
            out += element_to_token(elems[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace steiner
