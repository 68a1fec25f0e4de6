#ifndef QSR_DOMAINS_HPP
#define QSR_DOMAINS_HPP

#include <cstdint>

#include "qsr/bits.hpp"

namespace qsr {

/// Domain of one relation variable: a subset of value indices 0..universe-1.
/// Empty is representable and signals failure.
struct FiniteDomain {
    Bits bits;
    int universe = 0;

    static FiniteDomain full(int universe) { return {Bits::full(universe), universe}; }
    static FiniteDomain of(int universe, std::initializer_list<int> idxs) {
        return {Bits::of(idxs), universe};
    }

    int size() const { return bits.count(); }
    bool empty() const { return bits.empty(); }
    bool bound() const { return size() == 1; }
    /// Value of a bound domain (lowest set index otherwise).
    int value() const { return bits.lowest(); }

    bool operator==(const FiniteDomain&) const = default;
};

/// Subset-bound domain of a set variable over a universe of at most 16
/// elements: lower = must-contain, upper = may-contain. The variable is
/// bound when the bounds meet.
struct SetDomain {
    std::uint16_t lower = 0;
    std::uint16_t upper = 0;
    int universe = 0;

    static SetDomain free(int universe) {
        return {0, static_cast<std::uint16_t>((1u << universe) - 1), universe};
    }

    bool valid() const { return (lower & ~upper) == 0; }
    bool bound() const { return lower == upper; }
    /// Elements neither required nor excluded.
    int undecided_count() const { return std::popcount(static_cast<unsigned>(upper & ~lower)); }

    bool operator==(const SetDomain&) const = default;
};

} // namespace qsr

#endif
