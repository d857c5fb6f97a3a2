#include "steiner/fixtures.hpp"

#include <algorithm>
#include <cctype>

#include "steiner/design.hpp"

namespace steiner {

namespace {

// Canonical order: the two Z3xZ3xZ5xZ5 lists, the four Z5xZ5xZ9 lists,
// the four Z17xZ17 lists.
constexpr const char* kFixtureOrder[] = {
    "s2-8-225-g3355-1", "s2-8-225-g3355-2",
    "s2-8-225-g559-1",  "s2-8-225-g559-2",  "s2-8-225-g559-3",  "s2-8-225-g559-4",
    "s2-9-289-g1717-1", "s2-9-289-g1717-2", "s2-9-289-g1717-3", "s2-9-289-g1717-4",
};

const char* embedded_text(std::string_view name) {
    for (std::size_t i = 0; i < detail::kFixtureTextCount; ++i)
        if (name == detail::kFixtureTexts[i].name) return detail::kFixtureTexts[i].text;
    throw Error("fixture asset '" + std::string(name) + "' missing from the embedded data");
}

FixtureEntry load_entry(const char* name) {
    std::string_view text = embedded_text(name);
    DifferenceFamily family = parse_family(text);
    // The embedded assets are canonical: parse/format must reproduce them
    // byte for byte.
    if (format_family(family) != text)
        throw Error("fixture asset '" + std::string(name) + "' is not in canonical form");

    const std::uint32_t v = family.spec().order();
    const std::uint32_t k = family.k();
    const GroupSpec group = family.spec();
    DesignParams params = design_params(v, k);
    if (!params.feasible)
        throw Error("fixture asset '" + std::string(name) + "' has infeasible parameters");
    return FixtureEntry{std::string(name),
                        group,
                        std::move(family),
                        text,
                        v,
                        k,
                        static_cast<std::uint32_t>(*params.b),
                        static_cast<std::uint32_t>(*params.r)};
}

const std::vector<FixtureEntry>& registry() {
    static const std::vector<FixtureEntry> entries = [] {
        std::vector<FixtureEntry> out;
        out.reserve(std::size(kFixtureOrder));
        for (const char* name : kFixtureOrder) out.push_back(load_entry(name));
        return out;
    }();
    return entries;
}

// Lowercases and restores the 'g' prefix on the group code so that
// "S2-9-289-1717-4" resolves to "s2-9-289-g1717-4".
std::string normalize_name(std::string_view name) {
    std::string out(name);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::size_t dashes = 0, code_start = std::string::npos;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == '-' && ++dashes == 3) {
            code_start = i + 1;
            break;
        }
    }
    if (code_start != std::string::npos && code_start < out.size() &&
        std::isdigit(static_cast<unsigned char>(out[code_start])))
        out.insert(code_start, 1, 'g');
    return out;
}

}  // namespace

const FixtureEntry& fixture(std::string_view name) {
    const std::string wanted = normalize_name(name);
    for (const FixtureEntry& entry : registry())
        if (entry.name == wanted) return entry;
    std::string msg = "unknown fixture '" + std::string(name) + "'; valid names:";
    for (const char* valid : kFixtureOrder) msg += std::string(" ") + valid;
    throw Error(msg);
}

std::vector<std::string> list_fixtures() {
    std::vector<std::string> names;
    names.reserve(registry().size());
    for (const FixtureEntry& entry : registry()) names.push_back(entry.name);
    return names;
}

}  // namespace steiner
