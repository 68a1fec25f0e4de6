#pragma once

#include <string>
#include <vector>

#include "qsr/calculus.hpp"
#include "qsr/scenario.hpp"

namespace qsr {

// Binary qualitative constraint network in the relation-constraint reading:
// one relation set per ordered object pair, identity on the diagonal,
// mirror cells synchronized by converse.
struct BinaryNetwork {
    const Calculus* calc = nullptr;
    int n = 0;
    std::vector<Bits> rel; // n*n, row-major

    static BinaryNetwork full(const Calculus& c, int n);

    Bits& at(int i, int j) { return rel[static_cast<std::size_t>(i) * n + j]; }
    const Bits& at(int i, int j) const {
        return rel[static_cast<std::size_t>(i) * n + j];
    }

    // set image under the converse map
    Bits conv_image(const Bits& s) const;

    // narrows rel[i][j] and keeps the mirror cell in sync
    void restrict(int i, int j, const Bits& allowed);
};

enum class PcResult { Fixpoint, EmptyRelation };

// Naive path consistency: sweeps all ordered triples (i,j,k), refining
// rel[i][k] by the composition image through j and resynchronizing the
// mirror cell, until nothing changes.
PcResult pc_enforce(BinaryNetwork& net);

// Exhaustive search over atomic scenarios: one base relation per unordered
// pair (mirror by converse), consistent iff some choice has every ordered
// triple of distinct objects closed under the composition table.
// Throws std::invalid_argument when n > 5.
bool enumerate_atomic(const BinaryNetwork& net);

// Number of such atomic scenarios; same n <= 5 guard.
long atomic_count(const BinaryNetwork& net);

// The same instance read as a relation-variable scenario (one binary
// aspect named `aspect`, restrictions from all ordered off-diagonal
// cells). The network's calculus must outlive the scenario.
Scenario to_scenario(const BinaryNetwork& net, std::string aspect = "topo");

struct PcGacReport {
    bool equal = false;
    bool pc_failed = false;
    bool gac_failed = false;
    std::string detail; // first differing cell, empty when equal
};

// Runs pc_enforce and the scenario-check pipeline on the same instance and
// compares surviving relation sets cell by cell; both failing counts as
// equal.
PcGacReport compare_pc_gac(const BinaryNetwork& net);

} // namespace qsr
