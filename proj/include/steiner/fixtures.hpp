#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "steiner/family.hpp"

namespace steiner {

namespace detail {
struct FixtureText {
    const char* name;
    const char* text;
};
// Generated from the data/*.df assets at build time.
extern const FixtureText kFixtureTexts[];
extern const std::size_t kFixtureTextCount;
}  // namespace detail

// One of the ten published (v,k,1) difference families, embedded as
// canonical family-file text and parsed once on first access.
struct FixtureEntry {
    std::string name;
    GroupSpec group;
    DifferenceFamily family;
    std::string_view text;  // canonical family-file form

    // expected design parameters
    std::uint32_t v, k, b, r;
};

// Names follow s2-<k>-<v>-g<groupcode>-<index> with group codes 3355, 559
// and 1717. Lookup is case-insensitive and accepts the group code without
// its 'g' prefix. Unknown names raise an Error that lists the valid names.
const FixtureEntry& fixture(std::string_view name);

// The ten fixture names: two over Z3xZ3xZ5xZ5, four over Z5xZ5xZ9, four
// over Z17xZ17.
std::vector<std::string> list_fixtures();

}  // namespace steiner
