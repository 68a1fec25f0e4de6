#include "qsr/pc_oracle.hpp"

#include <stdexcept>

namespace qsr {

BinaryNetwork BinaryNetwork::full(const Calculus& c, int n) {
    BinaryNetwork net;
    net.calc = &c;
    net.n = n;
    net.rel.assign(static_cast<std::size_t>(n) * n, c.full());
    for (int i = 0; i < n; ++i) net.at(i, i) = Bits::single(c.identity);
    return net;
}

Bits BinaryNetwork::conv_image(const Bits& s) const {
    Bits out;
    for (int r : s) out.set(calc->conv(r));
    return out;
}

void BinaryNetwork::restrict(int i, int j, const Bits& allowed) {
    at(i, j) &= allowed;
    if (i != j) at(j, i) &= conv_image(allowed);
}

PcResult pc_enforce(BinaryNetwork& net) {
    const int n = net.n;
    const Calculus& c = *net.calc;

    // initial mirror normalization
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Bits v = net.at(i, j) & net.conv_image(net.at(j, i));
            net.at(i, j) = v;
            net.at(j, i) = net.conv_image(v);
            if (v.empty()) return PcResult::EmptyRelation;
        }

    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Bits image;
                    for (int r : net.at(i, j))
                        for (int s : net.at(j, k)) image |= c.comp(r, s);
                    Bits v = net.at(i, k) & image;
                    if (v == net.at(i, k)) continue;
                    if (v.empty()) return PcResult::EmptyRelation;
                    net.at(i, k) = v;
                    if (i != k) net.at(k, i) = net.conv_image(v);
                    changed = true;
                }
    }
    return PcResult::Fixpoint;
}

// ---------------------------------------------------------------------------
// atomic enumeration
// ---------------------------------------------------------------------------

namespace {

struct AtomicSearch {
    const BinaryNetwork* net;
    std::vector<std::pair<int, int>> pairs; // unordered, lex order
    std::vector<int> choice;                // one base relation per pair
    std::vector<std::vector<int>> pair_index; // (i,j) -> index into pairs
    long count = 0;
    bool stop_at_first = false;
    bool found = false;

    explicit AtomicSearch(const BinaryNetwork& bn) : net(&bn) {
        const int n = bn.n;
        pair_index.assign(n, std::vector<int>(n, -1));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                pair_index[i][j] = static_cast<int>(pairs.size());
                pairs.emplace_back(i, j);
            }
        choice.assign(pairs.size(), -1);
    }

    int rel_of(int x, int y) const {
        if (x == y) return net->calc->identity;
        if (x < y) return choice[pair_index[x][y]];
        return net->calc->conv(choice[pair_index[y][x]]);
    }

    // all orientations of the completed triple {a, b} ∪ {the new pair}
    bool triple_ok(int a, int b, int c) const {
        int perm[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                          {b, c, a}, {c, a, b}, {c, b, a}};
        for (auto& p : perm) {
            int r = rel_of(p[0], p[1]);
            int s = rel_of(p[1], p[2]);
            int t = rel_of(p[0], p[2]);
            if (!net->calc->comp(r, s).test(t)) return false;
        }
        return true;
    }

    void search(std::size_t p) {
        if (found && stop_at_first) return;
        if (p == pairs.size()) {
            ++count;
            found = true;
            return;
        }
        auto [i, j] = pairs[p];
        Bits allowed = net->at(i, j) &
                       net->conv_image(net->at(j, i));
        for (int r : allowed) {
            choice[p] = r;
            bool ok = true;
            // triples completed by this pair: {k, i, j} for k < i
            for (int k = 0; k < i && ok; ++k) ok = triple_ok(k, i, j);
            if (ok) search(p + 1);
            if (found && stop_at_first) return;
        }
        choice[p] = -1;
    }
};

} // namespace

bool enumerate_atomic(const BinaryNetwork& net) {
    if (net.n > 5)
        throw std::invalid_argument("atomic enumeration is guarded to 5 objects");
    AtomicSearch s(net);
    s.stop_at_first = true;
    s.search(0);
    return s.found;
}

long atomic_count(const BinaryNetwork& net) {
    if (net.n > 5)
        throw std::invalid_argument("atomic enumeration is guarded to 5 objects");
    AtomicSearch s(net);
    s.search(0);
    return s.count;
}

// ---------------------------------------------------------------------------
// relation-variable reading and pc/gac comparison
// ---------------------------------------------------------------------------

Scenario to_scenario(const BinaryNetwork& net, std::string aspect) {
    Scenario sc;
    for (int i = 0; i < net.n; ++i) sc.objects.push_back("o" + std::to_string(i));
    sc.aspects.push_back(AspectDecl::make_binary(std::move(aspect), *net.calc));
    const std::string& name = sc.aspects[0].name;
    for (int i = 0; i < net.n; ++i)
        for (int j = 0; j < net.n; ++j) {
            if (i == j) continue;
            if (net.at(i, j) == net.calc->full()) continue;
            sc.restrictions.push_back({name, {i, j}, net.at(i, j), -1});
        }
    return sc;
}

PcGacReport compare_pc_gac(const BinaryNetwork& net) {
    PcGacReport rep;

    BinaryNetwork pc = net;
    rep.pc_failed = pc_enforce(pc) == PcResult::EmptyRelation;

    Scenario sc = to_scenario(net);
    CheckResult gac = check(sc);
    rep.gac_failed = gac.inconsistent;

    if (rep.pc_failed || rep.gac_failed) {
        rep.equal = rep.pc_failed == rep.gac_failed;
        if (!rep.equal) rep.detail = rep.pc_failed ? "only pc failed" : "only gac failed";
        return rep;
    }
    for (const TupleDomain& td : gac.domains) {
        if (!(td.domain == pc.at(td.objects[0], td.objects[1]))) {
            rep.detail = "cell (" + std::to_string(td.objects[0]) + "," +
                         std::to_string(td.objects[1]) + ") differs";
            return rep;
        }
    }
    rep.equal = true;
    return rep;
}

} // namespace qsr
