#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qsr/bits.hpp"

namespace qsr {

// A binary qualitative calculus: ordered base relations (JEPD atoms), an
// identity relation, a converse map and a composition table. Relations are
// referred to by index into `relations`; Bits values are sets of indices.
struct Calculus {
    std::string name;
    std::vector<std::string> relations;
    int identity = -1;
    std::vector<int> converse;    // converse[r]
    std::vector<Bits> composition; // composition[r * size() + s]

    int size() const { return static_cast<int>(relations.size()); }

    int index_of(std::string_view symbol) const {
        for (int i = 0; i < size(); ++i)
            if (relations[i] == symbol) return i;
        return -1;
    }

    int conv(int r) const { return converse[r]; }

    const Bits& comp(int r, int s) const {
        return composition[static_cast<std::size_t>(r) * size() + s];
    }

    Bits& comp(int r, int s) {
        return composition[static_cast<std::size_t>(r) * size() + s];
    }

    Bits full() const { return Bits::full(size()); }

    // Total number of (R, S, T) entries with T in comp(R, S).
    long triple_count() const {
        long total = 0;
        for (const Bits& b : composition) total += b.count();
        return total;
    }
};

// A ternary calculus in the style of cyclic orientation orderings. Converse
// swaps the last two arguments of the underlying relation; rotation cycles
// the arguments; composition chains two relations sharing their first and a
// middle argument.
struct TernaryCalculus {
    std::string name;
    std::vector<std::string> relations;
    std::vector<int> converse;     // converse[r]
    std::vector<int> rotation;     // rotation[r]
    std::vector<Bits> composition; // composition[r * size() + s]

    int size() const { return static_cast<int>(relations.size()); }

    int index_of(std::string_view symbol) const {
        for (int i = 0; i < size(); ++i)
            if (relations[i] == symbol) return i;
        return -1;
    }

    int conv(int r) const { return converse[r]; }
    int rot(int r) const { return rotation[r]; }

    // Total number of (R, S, T) entries with T in comp(R, S).
    long triple_count() const {
        long total = 0;
        for (const Bits& b : composition) total += b.count();
        return total;
    }

    const Bits& comp(int r, int s) const {
        return composition[static_cast<std::size_t>(r) * size() + s];
    }

    Bits& comp(int r, int s) {
        return composition[static_cast<std::size_t>(r) * size() + s];
    }

    Bits full() const { return Bits::full(size()); }
};

// The nine direction tiles and the subsets of them a connected region can
// occupy. Tile index = bit position in each valid_sets mask.
struct DirectionUniverse {
    std::vector<std::string> symbols; // B N NW W SW S SE E NE
    std::vector<std::uint16_t> valid_sets; // ascending by mask value

    int tile_index(std::string_view symbol) const {
        for (int i = 0; i < static_cast<int>(symbols.size()); ++i)
            if (symbols[i] == symbol) return i;
        return -1;
    }

    // Index into valid_sets, or -1 when the mask is not a valid set.
    int set_index(std::uint16_t mask) const {
        for (int i = 0; i < static_cast<int>(valid_sets.size()); ++i)
            if (valid_sets[i] == mask) return i;
        return -1;
    }

    std::string set_name(std::uint16_t mask) const;
    // Parses "B+N+E" style tile lists; returns -1 on unknown tile.
    int parse_set(std::string_view text, std::uint16_t& out) const;
};

// Axiom checks. Both return one human-readable line per violation; an empty
// report means the table is sound.
//
// Binary: converse involution, identity laws, the converse-composition law
// T in comp(R,S) iff conv(T) in comp(conv(S),conv(R)), totality of the
// composition map, and derivability of the converse table from composition
// (identity in comp(R,S) iff S = conv(R)).
std::vector<std::string> validate_calculus(const Calculus& c);

// Ternary: converse involution, rotation cubed is the identity map, and the
// converse-composition law (with the converse reading "swap the last two
// arguments", the law has the same shape as the binary one).
std::vector<std::string> validate_ternary_calculus(const TernaryCalculus& c);

// Line-oriented table file format. `#` starts a comment; sections are
// introduced by a keyword line: `relations` (symbols, whitespace-separated,
// possibly over several lines), `identity` (one symbol), `converse` (one
// `R S` pair per line), `rotation` (ternary only, same shape as converse),
// `composition` (one `R S -> T1 T2 ...` row per line).
std::string emit_calculus(const Calculus& c);
std::string emit_ternary_calculus(const TernaryCalculus& c);

// Both parsers throw std::runtime_error with a line-numbered message on
// malformed input or unknown symbols.
Calculus parse_calculus(std::string_view text, std::string name);
TernaryCalculus parse_ternary_calculus(std::string_view text, std::string name);

} // namespace qsr
