#pragma once

#include "qsr/calculus.hpp"

namespace qsr {

// The shipped RCC-8 table in the calculus file format (see calculus.hpp).
const char* rcc8_table_text();

// Parses the embedded RCC-8 table and validates it; throws std::runtime_error
// listing the violations if the data is damaged. 8 relations, identity EQ,
// 193 composition triples.
Calculus load_rcc8();

// Size point algebra over {<, =, >}, identity '='. Derived by enumerating
// integer triples over {0,1,2} and classifying each pair's order; 13
// composition triples.
Calculus derive_size_pa();

// Point cardinal directions: N NE E SE S SW W NW plus EQ as identity.
// Derived by enumerating displacement vectors with components in {-2..2}
// and classifying sign pairs; relation of a to b classifies pos(a)-pos(b).
Calculus derive_point_cd();

// Cyclic ordering of 2D orientations: 24 base relations, each a triple of
// pairwise e/l/o/r classifications. Derived over exact whole-degree angles;
// composition over a 15-degree grid (exhaustive for this arrangement since
// every realizable pattern has a realization on that grid; the derived
// table is additionally checked closed under its converse symmetry).
// Throws std::logic_error if the internal checks fail.
TernaryCalculus derive_cyc();

// The 218 direction-tile sets realizable by a connected region: non-empty
// edge-connected subsets of the 3x3 tile grid. Throws std::logic_error if
// the count differs from 218.
DirectionUniverse derive_valid_direction_sets();

} // namespace qsr
