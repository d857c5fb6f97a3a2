#include "steiner/group.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

namespace steiner {

namespace {

// -1 for characters outside the base-17 alphabet.
int digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'G') return 10 + (c - 'A');
    if (c >= 'a' && c <= 'g') return 10 + (c - 'a');
    return -1;
}

char digit_char(std::uint32_t value) {
    return value < 10 ? static_cast<char>('0' + value)
                      : static_cast<char>('A' + (value - 10));
}

void require_same_spec(const GroupElement& a, const GroupElement& b) {
    if (a.spec() != b.spec())
        throw Error("group elements belong to different groups: " +
                    a.spec().to_string() + " vs " + b.spec().to_string());
}

}  // namespace

GroupSpec::GroupSpec(std::vector<std::uint32_t> factors) {
    if (factors.empty()) throw Error("group spec needs at least one cyclic factor");
    std::uint64_t order = 1;
    for (std::uint32_t n : factors) {
        if (n < 2) throw Error("cyclic factor order must be >= 2, got " + std::to_string(n));
        order *= n;
        if (order > kMaxOrder)
            throw Error("group order exceeds the cap of " + std::to_string(kMaxOrder));
    }
    factors_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(factors));
    order_ = static_cast<std::uint32_t>(order);
}

GroupSpec GroupSpec::parse(std::string_view text) {
    if (text.empty()) throw ParseError("empty group spec");
    std::vector<std::uint32_t> factors;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t sep = text.find_first_of("xX", pos);
        std::string_view token = text.substr(pos, (sep == std::string_view::npos ? text.size() : sep) - pos);
        if (token.size() < 2 || (token[0] != 'Z' && token[0] != 'z'))
            throw ParseError("malformed group factor '" + std::string(token) +
                             "' (expected Z<n> with n >= 2)");
        std::uint64_t n = 0;
        const char* first = token.data() + 1;
        const char* last = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(first, last, n);
        if (ec == std::errc::result_out_of_range || n > GroupSpec::kMaxOrder)
            throw ParseError("factor order out of range in '" + std::string(token) + "'");
        if (ec != std::errc() || ptr != last)
            throw ParseError("malformed group factor '" + std::string(token) + "'");
        if (n < 2)
            throw ParseError("cyclic factor order must be >= 2 in '" + std::string(token) + "'");
        factors.push_back(static_cast<std::uint32_t>(n));
        if (sep == std::string_view::npos) break;
        pos = sep + 1;
        if (pos == text.size()) throw ParseError("trailing separator in group spec");
    }
    try {
        return GroupSpec(std::move(factors));
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

bool GroupSpec::labels_supported() const {
    return std::all_of(factors_->begin(), factors_->end(),
                       [](std::uint32_t n) { return n <= kMaxLabelFactor; });
}

std::string GroupSpec::to_string() const {
    std::string out;
    for (std::uint32_t n : *factors_) {
        if (!out.empty()) out += 'x';
        out += 'Z';
        out += std::to_string(n);
    }
    return out;
}

GroupElement::GroupElement(GroupSpec spec, std::vector<std::uint32_t> residues)
    : spec_(std::move(spec)), residues_(std::move(residues)) {
    const auto& factors = spec_.factors();
    if (residues_.size() != factors.size())
        throw Error("element has " + std::to_string(residues_.size()) + " residues, group " +
                    spec_.to_string() + " has " + std::to_string(factors.size()) + " factors");
    for (std::size_t i = 0; i < residues_.size(); ++i)
        if (residues_[i] >= factors[i])
            throw Error("residue " + std::to_string(residues_[i]) + " not reduced modulo " +
                        std::to_string(factors[i]));
}

std::uint32_t GroupElement::index() const {
    const auto& factors = spec_.factors();
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < residues_.size(); ++i)
        idx = idx * factors[i] + residues_[i];
    return static_cast<std::uint32_t>(idx);
}

bool GroupElement::is_identity() const {
    return std::all_of(residues_.begin(), residues_.end(),
                       [](std::uint32_t r) { return r == 0; });
}

std::string GroupElement::label() const { return element_to_label(*this); }

GroupElement identity(const GroupSpec& spec) {
    return GroupElement(spec, std::vector<std::uint32_t>(spec.rank(), 0));
}

GroupElement element_from_label(const GroupSpec& spec, std::string_view label) {
    if (!spec.labels_supported())
        throw ParseError("group " + spec.to_string() +
                         " has a factor above 17; digit labels are unsupported, use tuple input");
    const auto& factors = spec.factors();
    if (label.size() != factors.size())
        throw ParseError("label '" + std::string(label) + "' has " + std::to_string(label.size()) +
                         " digits, group " + spec.to_string() + " needs " +
                         std::to_string(factors.size()));
    std::vector<std::uint32_t> residues(factors.size());
    for (std::size_t i = 0; i < label.size(); ++i) {
        int d = digit_value(label[i]);
        if (d < 0)
            throw ParseError("invalid digit '" + std::string(1, label[i]) + "' in label '" +
                             std::string(label) + "' (alphabet is 0-9,A-G)");
        if (static_cast<std::uint32_t>(d) >= factors[i])
            throw ParseError("digit '" + std::string(1, label[i]) + "' in label '" +
                             std::string(label) + "' is not below factor order " +
                             std::to_string(factors[i]));
        residues[i] = static_cast<std::uint32_t>(d);
    }
    return GroupElement(spec, std::move(residues));
}

std::string element_to_label(const GroupElement& e) {
    if (!e.spec().labels_supported())
        throw Error("group " + e.spec().to_string() +
                    " has a factor above 17; digit labels are unsupported");
    std::string out;
    out.reserve(e.residues().size());
    for (std::uint32_t r : e.residues()) out += digit_char(r);
    return out;
}

GroupElement element_from_token(const GroupSpec& spec, std::string_view token) {
    if (token.empty()) throw ParseError("empty element token");
    if (token.front() != '(') return element_from_label(spec, token);
    if (token.back() != ')')
        throw ParseError("unterminated tuple token '" + std::string(token) + "'");
    std::string_view body = token.substr(1, token.size() - 2);
    std::vector<std::uint32_t> residues;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = body.find(',', pos);
        std::string_view part = body.substr(pos, (comma == std::string_view::npos ? body.size() : comma) - pos);
        std::uint32_t r = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), r);
        if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
            throw ParseError("malformed residue '" + std::string(part) + "' in tuple token '" +
                             std::string(token) + "'");
        residues.push_back(r);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    try {
        return GroupElement(spec, std::move(residues));
    } catch (const Error& e) {
        throw ParseError(std::string(e.what()) + " in tuple token '" + std::string(token) + "'");
    }
}

std::string element_to_token(const GroupElement& e) {
    if (e.spec().labels_supported()) return element_to_label(e);
    std::string out = "(";
    const auto& residues = e.residues();
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(residues[i]);
    }
    return out + ")";
}

std::uint32_t element_index(const GroupElement& e) { return e.index(); }

GroupElement element_from_index(const GroupSpec& spec, std::uint32_t index) {
    if (index >= spec.order())
        throw Error("element index " + std::to_string(index) + " out of range [0, " +
                    std::to_string(spec.order()) + ")");
    const auto& factors = spec.factors();
    std::vector<std::uint32_t> residues(factors.size());
    for (std::size_t i = factors.size(); i-- > 0;) {
        residues[i] = index % factors[i];
        index /= factors[i];
    }
    return GroupElement(spec, std::move(residues));
}

GroupElement add(const GroupElement& a, const GroupElement& b) {
    require_same_spec(a, b);
    const auto& factors = a.spec().factors();
    std::vector<std::uint32_t> residues(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::uint32_t s = a.residues()[i] + b.residues()[i];
        residues[i] = s >= factors[i] ? s - factors[i] : s;
    }
    return GroupElement(a.spec(), std::move(residues));
}

GroupElement neg(const GroupElement& a) {
    const auto& factors = a.spec().factors();
    std::vector<std::uint32_t> residues(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i)
        residues[i] = a.residues()[i] == 0 ? 0 : factors[i] - a.residues()[i];
    return GroupElement(a.spec(), std::move(residues));
}

GroupElement sub(const GroupElement& a, const GroupElement& b) {
    require_same_spec(a, b);
    const auto& factors = a.spec().factors();
    std::vector<std::uint32_t> residues(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::uint32_t av = a.residues()[i], bv = b.residues()[i];
        residues[i] = av >= bv ? av - bv : av + factors[i] - bv;
    }
    return GroupElement(a.spec(), std::move(residues));
}

}  // namespace steiner
