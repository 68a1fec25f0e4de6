#include "qsr/scenario.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsr {

// ---------------------------------------------------------------------------
// aspect declarations
// ---------------------------------------------------------------------------

AspectDecl AspectDecl::make_binary(std::string name, const Calculus& c) {
    AspectDecl a;
    a.name = std::move(name);
    a.calculus_name = c.name;
    a.arity = 2;
    a.binary = &c;
    return a;
}

AspectDecl AspectDecl::make_ternary(std::string name, const TernaryCalculus& c) {
    AspectDecl a;
    a.name = std::move(name);
    a.calculus_name = c.name;
    a.arity = 3;
    a.ternary = &c;
    return a;
}

AspectDecl AspectDecl::make_set_valued(std::string name, const DirectionUniverse& d) {
    AspectDecl a;
    a.name = std::move(name);
    a.calculus_name = "dirsets";
    a.arity = 2;
    a.set_valued = true;
    a.dir = &d;
    return a;
}

std::string AspectDecl::symbol(int v) const {
    if (binary) return binary->relations[v];
    if (ternary) return ternary->relations[v];
    return dir->set_name(dir->valid_sets[v]);
}

int AspectDecl::symbol_index(std::string_view s) const {
    if (binary) return binary->index_of(s);
    if (ternary) return ternary->index_of(s);
    std::uint16_t mask = 0;
    if (dir->parse_set(s, mask) < 0) return -1;
    return dir->set_index(mask);
}

int Scenario::object_index(std::string_view name) const {
    for (int i = 0; i < static_cast<int>(objects.size()); ++i)
        if (objects[i] == name) return i;
    return -1;
}

const AspectDecl* Scenario::find_aspect(std::string_view name) const {
    for (const auto& a : aspects)
        if (a.name == name) return &a;
    return nullptr;
}

// ---------------------------------------------------------------------------
// network lookups
// ---------------------------------------------------------------------------

int Network::aspect_index(std::string_view name) const {
    for (int i = 0; i < static_cast<int>(scenario_->aspects.size()); ++i)
        if (scenario_->aspects[i].name == name) return i;
    return -1;
}

namespace {

Network::TupleKey tuple_key(int time, const std::vector<int>& objs) {
    return {time, objs[0], objs.size() > 1 ? objs[1] : -1,
            objs.size() > 2 ? objs[2] : -1};
}

} // namespace

int Network::rel_var(std::string_view aspect, int time,
                     const std::vector<int>& objs) const {
    int a = aspect_index(aspect);
    if (a < 0) return -1;
    auto it = rel_vars_[a].find(tuple_key(time, objs));
    return it == rel_vars_[a].end() ? -1 : static_cast<int>(it->second);
}

int Network::set_var(std::string_view aspect, int time,
                     const std::vector<int>& objs) const {
    int a = aspect_index(aspect);
    if (a < 0) return -1;
    auto it = set_vars_[a].find(tuple_key(time, objs));
    return it == set_vars_[a].end() ? -1 : static_cast<int>(it->second);
}

long Network::conv_count(std::string_view aspect) const {
    auto it = conv_counts_.find(aspect);
    return it == conv_counts_.end() ? 0 : it->second;
}

long Network::comp_count(std::string_view aspect) const {
    auto it = comp_counts_.find(aspect);
    return it == comp_counts_.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

namespace {

// relation index the diagonal is fixed to, or -1 when the aspect has none
int identity_index(const AspectDecl& a) {
    if (a.binary) return a.binary->identity;
    if (a.dir) return a.dir->set_index(1); // the set {B}, tile B is bit 0
    return -1;
}

std::vector<std::vector<int>> conv_tuples(const std::vector<int>& conv) {
    std::vector<std::vector<int>> out;
    for (int r = 0; r < static_cast<int>(conv.size()); ++r)
        out.push_back({r, conv[r]});
    return out;
}

std::vector<std::vector<int>> pair_map_tuples(const std::vector<int>& map) {
    return conv_tuples(map);
}

template <typename Calc>
std::vector<std::vector<int>> comp_tuples(const Calc& c) {
    std::vector<std::vector<int>> out;
    for (int r = 0; r < c.size(); ++r)
        for (int s = 0; s < c.size(); ++s)
            for (int t : c.comp(r, s)) out.push_back({r, s, t});
    return out;
}

} // namespace

Network build(const Scenario& sc) {
    Network net;
    net.scenario_ = &sc;
    const int n = static_cast<int>(sc.objects.size());
    const int na = static_cast<int>(sc.aspects.size());
    const int T = sc.time_steps;

    if (T < 1) throw std::invalid_argument("time_steps must be positive");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (sc.objects[i] == sc.objects[j])
                throw std::invalid_argument("duplicate object name '" + sc.objects[i] + "'");
    for (int a = 0; a < na; ++a) {
        const AspectDecl& ad = sc.aspects[a];
        if ((ad.arity == 2) != (ad.ternary == nullptr) ||
            (ad.set_valued && !ad.dir) || (!ad.set_valued && ad.dir))
            throw std::invalid_argument("aspect '" + ad.name + "': arity/calculus mismatch");
        for (int b = a + 1; b < na; ++b)
            if (sc.aspects[b].name == ad.name)
                throw std::invalid_argument("duplicate aspect name '" + ad.name + "'");
    }

    net.rel_vars_.resize(na);
    net.set_vars_.resize(na);

    // initial domains: full universe narrowed by the restrictions
    std::vector<std::map<Network::TupleKey, Bits>> doms(na);
    for (const Restriction& r : sc.restrictions) {
        const AspectDecl* ad = sc.find_aspect(r.aspect);
        if (!ad) throw std::invalid_argument("restriction on undeclared aspect '" + r.aspect + "'");
        int a = static_cast<int>(ad - sc.aspects.data());
        if (static_cast<int>(r.objects.size()) != ad->arity)
            throw std::invalid_argument("restriction arity mismatch on aspect '" + r.aspect + "'");
        for (int o : r.objects)
            if (o < 0 || o >= n)
                throw std::invalid_argument("restriction references unknown object");
        if (r.allowed.empty())
            throw std::invalid_argument("restriction with empty allowed set");
        if (!r.allowed.is_subset_of(Bits::full(ad->universe())))
            throw std::invalid_argument("restriction relation outside the aspect universe");
        if (r.time != -1 && (r.time < 1 || r.time > T))
            throw std::invalid_argument("restriction time step out of range");

        bool diagonal = false;
        if (ad->arity == 2 && r.objects[0] == r.objects[1]) {
            diagonal = true;
        } else {
            for (std::size_t x = 0; x < r.objects.size(); ++x)
                for (std::size_t y = x + 1; y < r.objects.size(); ++y)
                    if (r.objects[x] == r.objects[y])
                        throw std::invalid_argument(
                            "restriction repeats an object in a ternary tuple");
        }
        if (diagonal) {
            // the diagonal is the fixed identity; a restriction either
            // admits it (no-op) or contradicts it
            if (!r.allowed.test(identity_index(*ad)))
                net.immediate_inconsistent = true;
            continue;
        }
        for (int t = (r.time == -1 ? 1 : r.time); t <= (r.time == -1 ? T : r.time); ++t) {
            Network::TupleKey key = tuple_key(t, r.objects);
            auto it = doms[a].emplace(key, Bits::full(ad->universe())).first;
            it->second &= r.allowed;
            if (it->second.empty()) net.immediate_inconsistent = true;
        }
    }
    if (net.immediate_inconsistent) return net;

    // relation variables, ordered distinct tuples
    for (int a = 0; a < na; ++a) {
        const AspectDecl& ad = sc.aspects[a];
        const int m = ad.universe();
        auto initial = [&](const Network::TupleKey& key) {
            auto it = doms[a].find(key);
            FiniteDomain d;
            d.universe = m;
            d.bits = it == doms[a].end() ? Bits::full(m) : it->second;
            return d;
        };
        for (int t = 1; t <= T; ++t) {
            if (ad.arity == 2) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (i == j) continue;
                        Network::TupleKey key{t, i, j, -1};
                        VarId v = net.store.new_var(initial(key));
                        net.rel_vars_[a][key] = v;
                        if (ad.set_valued) {
                            SetVarId sv = net.store.new_set_var(
                                static_cast<int>(ad.dir->symbols.size()));
                            net.store.channel_set_to_enum(sv, v, ad.dir->valid_sets);
                            net.set_vars_[a][key] = sv;
                        }
                    }
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k) {
                            if (i == j || i == k || j == k) continue;
                            Network::TupleKey key{t, i, j, k};
                            net.rel_vars_[a][key] = net.store.new_var(initial(key));
                        }
            }
        }
    }

    // integrity constraints
    for (int a = 0; a < na; ++a) {
        const AspectDecl& ad = sc.aspects[a];
        if (ad.set_valued) continue; // no converse/composition tables shipped
        auto var = [&](int t, int i, int j, int k = -1) {
            return net.rel_vars_[a].at({t, i, j, k});
        };
        if (ad.arity == 2) {
            const Calculus& c = *ad.binary;
            auto conv_t = conv_tuples(c.converse);
            auto comp_t = comp_tuples(c);
            for (int t = 1; t <= T; ++t) {
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        net.store.post_table({var(t, i, j), var(t, j, i)}, conv_t);
                        ++net.conv_counts_[ad.name];
                    }
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        for (int k = j + 1; k < n; ++k) {
                            net.store.post_table(
                                {var(t, i, j), var(t, j, k), var(t, i, k)}, comp_t);
                            ++net.comp_counts_[ad.name];
                        }
            }
        } else {
            const TernaryCalculus& c = *ad.ternary;
            auto conv_t = conv_tuples(c.converse);
            auto rot_t = pair_map_tuples(c.rotation);
            auto comp_t = comp_tuples(c);
            for (int t = 1; t <= T; ++t)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (i == j) continue;
                        for (int k = 0; k < n; ++k) {
                            if (k == i || k == j) continue;
                            if (j < k) {
                                net.store.post_table({var(t, i, j, k), var(t, i, k, j)},
                                                     conv_t);
                                ++net.conv_counts_[ad.name];
                            }
                            net.store.post_table({var(t, i, j, k), var(t, k, i, j)},
                                                 rot_t);
                            for (int l = 0; l < n; ++l) {
                                if (l == i || l == j || l == k) continue;
                                net.store.post_table(
                                    {var(t, i, j, k), var(t, i, k, l), var(t, i, j, l)},
                                    comp_t);
                                ++net.comp_counts_[ad.name];
                            }
                        }
                    }
        }
    }

    // link tables, instantiated on every ordered distinct object tuple
    for (const LinkBinding& lb : sc.links) {
        const LinkTable& lt = *lb.table;
        if (lb.aspects.size() != lt.slots.size())
            throw std::invalid_argument("link '" + lt.name + "': aspect count mismatch");
        std::vector<int> slot_aspect(lt.slots.size());
        for (std::size_t s = 0; s < lt.slots.size(); ++s) {
            const AspectDecl* ad = sc.find_aspect(lb.aspects[s]);
            if (!ad)
                throw std::invalid_argument("link '" + lt.name +
                                            "' binds undeclared aspect '" + lb.aspects[s] + "'");
            if (ad->calculus_name != lt.slots[s].calculus_name)
                throw std::invalid_argument("link '" + lt.name + "' slot " +
                                            std::to_string(s) + " expects calculus '" +
                                            lt.slots[s].calculus_name + "'");
            if (static_cast<int>(lt.slots[s].pattern.size()) != ad->arity)
                throw std::invalid_argument("link '" + lt.name + "' slot " +
                                            std::to_string(s) + " arity mismatch");
            slot_aspect[s] = static_cast<int>(ad - sc.aspects.data());
        }
        // enumerate ordered tuples of distinct objects
        std::vector<int> tup(lt.object_count, -1);
        std::vector<bool> used(n, false);
        auto instantiate = [&](auto&& self, int pos) -> void {
            if (pos == lt.object_count) {
                for (int t = 1; t <= T; ++t) {
                    std::vector<VarId> scope;
                    for (std::size_t s = 0; s < lt.slots.size(); ++s) {
                        std::vector<int> objs;
                        for (int p : lt.slots[s].pattern) objs.push_back(tup[p]);
                        scope.push_back(net.rel_vars_[slot_aspect[s]].at(
                            tuple_key(t, objs)));
                    }
                    net.store.post_table(scope, lt.tuples);
                }
                return;
            }
            for (int o = 0; o < n; ++o) {
                if (used[o]) continue;
                used[o] = true;
                tup[pos] = o;
                self(self, pos + 1);
                used[o] = false;
            }
        };
        if (n >= lt.object_count) instantiate(instantiate, 0);
    }

    // neighbour tables between consecutive steps
    for (const NeighbourBinding& nb : sc.neighbours) {
        const AspectDecl* ad = sc.find_aspect(nb.aspect);
        if (!ad)
            throw std::invalid_argument("neighbour table on undeclared aspect '" +
                                        nb.aspect + "'");
        if (ad->arity != 2 || ad->set_valued)
            throw std::invalid_argument("neighbour tables apply to binary aspects");
        if (ad->calculus_name != nb.table->calculus_name)
            throw std::invalid_argument("neighbour table '" + nb.table->name +
                                        "' expects calculus '" +
                                        nb.table->calculus_name + "'");
        int a = static_cast<int>(ad - sc.aspects.data());
        std::vector<std::vector<int>> tuples;
        for (auto [r, s] : nb.table->pairs) tuples.push_back({r, s});
        for (int t = 1; t < T; ++t)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    net.store.post_table({net.rel_vars_[a].at({t, i, j, -1}),
                                          net.rel_vars_[a].at({t + 1, i, j, -1})},
                                         tuples);
                }
    }

    return net;
}

// ---------------------------------------------------------------------------
// check / decide
// ---------------------------------------------------------------------------

namespace {

// deterministic walk over all materialized relation variables
template <typename F>
void for_each_tuple(const Scenario& sc, F&& fn) {
    const int n = static_cast<int>(sc.objects.size());
    for (const AspectDecl& ad : sc.aspects)
        for (int t = 1; t <= sc.time_steps; ++t) {
            if (ad.arity == 2) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (i != j) fn(ad, t, std::vector<int>{i, j});
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k)
                            if (i != j && i != k && j != k)
                                fn(ad, t, std::vector<int>{i, j, k});
            }
        }
}

} // namespace

CheckResult check(const Scenario& sc) {
    Network net = build(sc);
    CheckResult out;
    if (net.immediate_inconsistent ||
        net.store.propagate() == PropagateResult::Failure) {
        out.inconsistent = true;
        return out;
    }
    for_each_tuple(sc, [&](const AspectDecl& ad, int t, const std::vector<int>& objs) {
        TupleDomain td;
        td.aspect = ad.name;
        td.time = t;
        td.objects = objs;
        td.domain = net.store.domain(net.rel_var(ad.name, t, objs)).bits;
        if (ad.set_valued) {
            const SetDomain& sd = net.store.set_domain(net.set_var(ad.name, t, objs));
            td.set_lower = sd.lower;
            td.set_upper = sd.upper;
        }
        out.domains.push_back(std::move(td));
    });
    return out;
}

namespace {

DecideResult solution_to_result(const Scenario& sc, const Network& net,
                                const Solution& sol) {
    DecideResult out;
    out.consistent = true;
    for_each_tuple(sc, [&](const AspectDecl& ad, int t, const std::vector<int>& objs) {
        AtomicEntry e;
        e.aspect = ad.name;
        e.time = t;
        e.objects = objs;
        e.relation = sol.values[net.rel_var(ad.name, t, objs)];
        out.entries.push_back(std::move(e));
    });
    return out;
}

} // namespace

DecideResult decide(const Scenario& sc) {
    Network net = build(sc);
    if (net.immediate_inconsistent) return {};
    std::optional<Solution> sol = net.store.solve();
    if (!sol) return {};
    return solution_to_result(sc, net, *sol);
}

long decide_all(const Scenario& sc,
                const std::function<bool(const DecideResult&)>& on_scenario) {
    Network net = build(sc);
    if (net.immediate_inconsistent) return 0;
    return net.store.solve_all([&](const Solution& sol) {
        return on_scenario(solution_to_result(sc, net, sol));
    });
}

// ---------------------------------------------------------------------------
// object queries
// ---------------------------------------------------------------------------

std::vector<VarId> post_object_query(Network& net, int count,
                                     const std::vector<ObjectQueryEntry>& entries) {
    const Scenario& sc = *net.scenario();
    const int n = static_cast<int>(sc.objects.size());
    if (n == 0) throw std::invalid_argument("object query needs objects");
    if (count < 1) throw std::invalid_argument("object query needs object variables");

    std::vector<VarId> ovars;
    for (int i = 0; i < count; ++i)
        ovars.push_back(net.store.new_var(FiniteDomain::full(n)));

    for (const ObjectQueryEntry& e : entries) {
        const AspectDecl* ad = sc.find_aspect(e.aspect);
        if (!ad) throw std::invalid_argument("query on undeclared aspect '" + e.aspect + "'");
        if (ad->arity != 2)
            throw std::invalid_argument("object queries support binary aspects only");
        if (static_cast<int>(e.index_vars.size()) != ad->arity)
            throw std::invalid_argument("query index tuple arity mismatch");
        for (int p : e.index_vars)
            if (p < 0 || p >= count)
                throw std::invalid_argument("query index variable out of range");
        if (e.time < 1 || e.time > sc.time_steps)
            throw std::invalid_argument("query time step out of range");

        // diagonal cells are the aspect identity, fixed
        int ident = ad->binary ? ad->binary->identity
                               : ad->dir->set_index(1);
        VarId diag = net.store.new_var(
            FiniteDomain::of(ad->universe(), {ident}));

        std::vector<VarId> cells;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cells.push_back(i == j ? diag
                                       : static_cast<VarId>(net.rel_var(
                                             e.aspect, e.time, {i, j})));
        net.store.post_array_constraint(
            {ovars[e.index_vars[0]], ovars[e.index_vars[1]]}, {n, n}, cells,
            e.target);
    }
    return ovars;
}

// ---------------------------------------------------------------------------
// shipped tables
// ---------------------------------------------------------------------------

namespace {

int need_symbol(const Calculus& c, const char* s) {
    int i = c.index_of(s);
    if (i < 0)
        throw std::invalid_argument("calculus '" + c.name + "' lacks relation '" + s + "'");
    return i;
}

} // namespace

LinkTable link_topo_size(const Calculus& topo, const Calculus& size) {
    LinkTable lt;
    lt.name = "topo_size";
    lt.object_count = 2;
    lt.slots = {{topo.name, {0, 1}}, {size.name, {0, 1}}};
    int lt_ = need_symbol(size, "<"), eq = need_symbol(size, "="),
        gt = need_symbol(size, ">");
    auto add = [&](const char* t, int s) {
        lt.tuples.push_back({need_symbol(topo, t), s});
    };
    add("TPP", lt_);
    add("NTPP", lt_);
    add("TPPi", gt);
    add("NTPPi", gt);
    add("EQ", eq);
    for (const char* t : {"DC", "EC", "PO"}) {
        add(t, lt_);
        add(t, eq);
        add(t, gt);
    }
    return lt;
}

LinkTable link_topo_dir(const Calculus& topo, const DirectionUniverse& dir) {
    LinkTable lt;
    lt.name = "topo_dir";
    lt.object_count = 2;
    lt.slots = {{topo.name, {0, 1}}, {"dirsets", {0, 1}}};
    int only_b = dir.set_index(1);
    const int m = static_cast<int>(dir.valid_sets.size());
    // containment forces the tile B: equal or contained regions sit at B
    for (const char* t : {"EQ", "NTPP", "TPP"})
        lt.tuples.push_back({need_symbol(topo, t), only_b});
    for (const char* t : {"NTPPi", "TPPi"})
        for (int s = 0; s < m; ++s)
            if (dir.valid_sets[s] & 1)
                lt.tuples.push_back({need_symbol(topo, t), s});
    for (const char* t : {"DC", "EC", "PO"})
        for (int s = 0; s < m; ++s)
            lt.tuples.push_back({need_symbol(topo, t), s});
    return lt;
}

NeighbourTable neighbour_rcc8(const Calculus& topo) {
    NeighbourTable nt;
    nt.name = "rcc8_step";
    nt.calculus_name = topo.name;
    static const char* moves[][2] = {
        {"DC", "EC"},  {"EC", "PO"},   {"PO", "TPP"},  {"PO", "TPPi"},
        {"PO", "EQ"},  {"TPP", "NTPP"}, {"TPPi", "NTPPi"}, {"TPP", "EQ"},
        {"TPPi", "EQ"},
    };
    for (auto& m : moves) {
        int a = need_symbol(topo, m[0]), b = need_symbol(topo, m[1]);
        nt.pairs.emplace_back(a, b);
        nt.pairs.emplace_back(b, a);
    }
    for (int r = 0; r < topo.size(); ++r) nt.pairs.emplace_back(r, r);
    return nt;
}

} // namespace qsr
