#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsr/calculus.hpp"
#include "qsr/engine.hpp"

namespace qsr {

// One relational aspect of a scenario (topology, size, direction, ...).
// Exactly one of `binary`, `ternary`, `dir` is set; the pointed-to tables
// must outlive every scenario and network using the declaration.
struct AspectDecl {
    std::string name;
    std::string calculus_name;
    int arity = 2;
    bool set_valued = false;
    const Calculus* binary = nullptr;
    const TernaryCalculus* ternary = nullptr;
    const DirectionUniverse* dir = nullptr;

    // relation universe as seen by the engine (enum indices)
    int universe() const {
        if (binary) return binary->size();
        if (ternary) return ternary->size();
        return static_cast<int>(dir->valid_sets.size());
    }
    // name of relation index v
    std::string symbol(int v) const;
    // -1 when unknown; for set-valued aspects parses "B+N" tile lists
    int symbol_index(std::string_view s) const;

    static AspectDecl make_binary(std::string name, const Calculus& c);
    static AspectDecl make_ternary(std::string name, const TernaryCalculus& c);
    static AspectDecl make_set_valued(std::string name, const DirectionUniverse& d);
};

// Restriction of one relation variable to an allowed set of relations.
// time is a 1-based step, or -1 for every step.
struct Restriction {
    std::string aspect;
    std::vector<int> objects;
    Bits allowed;
    int time = -1;
};

// A constraint schema tying relation variables of several aspects over a
// common formal object tuple. slot s applies to the aspect bound at
// position s, on the objects selected by its index pattern.
struct LinkSlot {
    std::string calculus_name;
    std::vector<int> pattern; // formal object indices, length = aspect arity
};
struct LinkTable {
    std::string name;
    int object_count = 2;
    std::vector<LinkSlot> slots;
    std::vector<std::vector<int>> tuples; // one relation index per slot
};

// Relation pairs (R, R') that one time step may connect; symmetric and
// reflexively closed.
struct NeighbourTable {
    std::string name;
    std::string calculus_name;
    std::vector<std::pair<int, int>> pairs;
};

struct LinkBinding {
    const LinkTable* table = nullptr;
    std::vector<std::string> aspects;
};
struct NeighbourBinding {
    const NeighbourTable* table = nullptr;
    std::string aspect;
};

struct Scenario {
    std::vector<std::string> objects;
    std::vector<AspectDecl> aspects;
    std::vector<Restriction> restrictions;
    std::vector<LinkBinding> links;
    std::vector<NeighbourBinding> neighbours;
    int time_steps = 1;

    int object_index(std::string_view name) const;
    const AspectDecl* find_aspect(std::string_view name) const;
};

// The engine encoding of a scenario. Relation variables exist for ordered
// distinct object tuples; the diagonal is the calculus identity and is only
// materialized (as a fixed singleton) when an object query needs it.
class Network {
public:
    Store store;
    bool immediate_inconsistent = false;

    // -1 when the tuple is not materialized; objs are object indices
    int rel_var(std::string_view aspect, int time, const std::vector<int>& objs) const;
    // set-view variable of a set-valued aspect tuple, -1 when absent
    int set_var(std::string_view aspect, int time, const std::vector<int>& objs) const;

    long conv_count(std::string_view aspect) const;
    long comp_count(std::string_view aspect) const;

    const Scenario* scenario() const { return scenario_; }

    using TupleKey = std::array<int, 4>; // time, i, j, k (-1 for binary)

private:
    friend Network build(const Scenario&);
    const Scenario* scenario_ = nullptr;
    std::vector<std::map<TupleKey, VarId>> rel_vars_;  // per aspect
    std::vector<std::map<TupleKey, SetVarId>> set_vars_;
    std::map<std::string, long, std::less<>> conv_counts_;
    std::map<std::string, long, std::less<>> comp_counts_;
    int aspect_index(std::string_view name) const;
};

// Builds the CSP: relation variables per ordered distinct tuple, converse
// per unordered pair, composition per unordered triple (plus rotation and
// head-sharing composition for ternary aspects), link tables on every
// ordered distinct object tuple, neighbour tables between consecutive
// steps. Restrictions are intersected into initial domains; an empty
// intersection marks the network immediately inconsistent. The scenario
// must outlive the network.
// Throws std::invalid_argument on undeclared aspects/objects and other
// structural errors.
Network build(const Scenario& s);

// One reduced relation variable after propagation.
struct TupleDomain {
    std::string aspect;
    int time = 1;
    std::vector<int> objects;
    Bits domain;                      // enum indices
    std::uint16_t set_lower = 0, set_upper = 0; // set-valued aspects only
};

struct CheckResult {
    bool inconsistent = false;
    std::vector<TupleDomain> domains; // empty when inconsistent
};

// Propagation only. A non-failing fixpoint does not certify consistency in
// general (it does for single-aspect RCC-8 scenarios).
CheckResult check(const Scenario& s);

struct AtomicEntry {
    std::string aspect;
    int time = 1;
    std::vector<int> objects;
    int relation = -1; // enum index; for set-valued aspects, the valid set
};

struct DecideResult {
    bool consistent = false;
    std::vector<AtomicEntry> entries;
};

// Full search for one atomic scenario.
DecideResult decide(const Scenario& s);

// Streams every atomic scenario; returns the count. The callback may return
// false to stop early.
long decide_all(const Scenario& s,
                const std::function<bool(const DecideResult&)>& on_scenario);

// One array constraint of an object query: the cell of `aspect`'s relation
// array selected by the query's object variables (via index_vars positions)
// must take a relation in target.
struct ObjectQueryEntry {
    std::string aspect;
    std::vector<int> index_vars; // positions into the query's object-var list
    Bits target;
    int time = 1;
};

// Adds `count` object variables ranging over the scenario's objects and one
// array constraint per entry. Binary aspects only; diagonal cells are fixed
// identity singletons. Returns the object variable ids.
std::vector<VarId> post_object_query(Network& net, int count,
                                     const std::vector<ObjectQueryEntry>& entries);

// Shipped link and neighbour tables. The calculi passed in supply the
// symbol numbering; symbols are looked up by name.
LinkTable link_topo_size(const Calculus& topo, const Calculus& size);
LinkTable link_topo_dir(const Calculus& topo, const DirectionUniverse& dir);
NeighbourTable neighbour_rcc8(const Calculus& topo);

} // namespace qsr
