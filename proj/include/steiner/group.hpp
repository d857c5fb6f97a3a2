#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "steiner/error.hpp"

namespace steiner {

// A finite abelian group presented as an ordered product of cyclic factors
// Z_n1 x ... x Z_nm, each n_i >= 2. The order v = prod(n_i) is capped at
// 2^31-1 so that dense per-element count arrays stay addressable.
//
// GroupSpec is an immutable value; copies share one factor list.
class GroupSpec {
public:
    static constexpr std::uint32_t kMaxOrder = 2147483647u;
    // Largest factor order representable by one base-17 label digit.
    static constexpr std::uint32_t kMaxLabelFactor = 17;

    explicit GroupSpec(std::vector<std::uint32_t> factors);

    // Parses a spec string of the form "Z3xZ3xZ5xZ5" ('Z' and the 'x'
    // separator are case-insensitive).
    static GroupSpec parse(std::string_view text);

    const std::vector<std::uint32_t>& factors() const { return *factors_; }
    std::uint32_t order() const { return order_; }
    std::size_t rank() const { return factors_->size(); }

    // True when every factor is <= 17, i.e. elements have digit labels.
    bool labels_supported() const;

    std::string to_string() const;

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
        return a.factors_ == b.factors_ || *a.factors_ == *b.factors_;
    }
    friend bool operator!=(const GroupSpec& a, const GroupSpec& b) { return !(a == b); }

private:
    std::shared_ptr<const std::vector<std::uint32_t>> factors_;
    std::uint32_t order_;
};

// A group element: one reduced residue per factor, bound to its GroupSpec.
// The canonical index is the mixed-radix value of the residues with the
// first-written factor most significant, a bijection onto [0, order).
class GroupElement {
public:
    GroupElement(GroupSpec spec, std::vector<std::uint32_t> residues);

    const GroupSpec& spec() const { return spec_; }
    const std::vector<std::uint32_t>& residues() const { return residues_; }

    std::uint32_t index() const;
    bool is_identity() const;

    // Base-17 digit label (0-9,A-G), one digit per factor. Throws Error
    // when any factor order exceeds 17.
    std::string label() const;

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.spec_ == b.spec_ && a.residues_ == b.residues_;
    }
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }

private:
    GroupSpec spec_;
    std::vector<std::uint32_t> residues_;
};

GroupElement identity(const GroupSpec& spec);

// Label digits are 0-9 then A-G (A=10 ... G=16); input is case-insensitive,
// output uppercase. Labels require every factor order <= 17.
GroupElement element_from_label(const GroupSpec& spec, std::string_view label);
std::string element_to_label(const GroupElement& e);

// Token form used by family files: a digit label when the group supports
// labels, otherwise a residue tuple "(r1,r2,...)".
GroupElement element_from_token(const GroupSpec& spec, std::string_view token);
std::string element_to_token(const GroupElement& e);

// Mixed-radix index <-> element, mutually inverse bijections on [0, order).
std::uint32_t element_index(const GroupElement& e);
GroupElement element_from_index(const GroupSpec& spec, std::uint32_t index);

// Componentwise modular arithmetic. Operands must be bound to equal specs.
GroupElement add(const GroupElement& a, const GroupElement& b);
GroupElement neg(const GroupElement& a);
GroupElement sub(const GroupElement& a, const GroupElement& b);

}  // namespace steiner
