#include "qsr/calculi.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace qsr {

Calculus load_rcc8() {
    Calculus c = parse_calculus(rcc8_table_text(), "rcc8");
    std::vector<std::string> violations = validate_calculus(c);
    if (!violations.empty()) {
        std::string msg = "embedded rcc8 table is damaged:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw std::runtime_error(msg);
    }
    return c;
}

// ---------------------------------------------------------------------------
// size point algebra
// ---------------------------------------------------------------------------

namespace {

int order_class(int a, int b) { return a < b ? 0 : a == b ? 1 : 2; } // < = >

} // namespace

Calculus derive_size_pa() {
    Calculus c;
    c.name = "size";
    c.relations = {"<", "=", ">"};
    c.identity = 1;
    c.converse.assign(3, -1);
    c.composition.assign(9, Bits::none());
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            int r = order_class(x, y);
            int rc = order_class(y, x);
            if (c.converse[r] >= 0 && c.converse[r] != rc)
                throw std::logic_error("size converse is not functional");
            c.converse[r] = rc;
            for (int z = 0; z < 3; ++z)
                c.comp(r, order_class(y, z)).set(order_class(x, z));
        }
    return c;
}

// ---------------------------------------------------------------------------
// point cardinal directions
// ---------------------------------------------------------------------------

namespace {

// Relation of point a to point b from the displacement pos(a) - pos(b);
// N means strictly north, EQ coincident.
int sign_class(int dx, int dy) {
    // symbol order: N NE E SE S SW W NW EQ
    if (dx == 0 && dy > 0) return 0;
    if (dx > 0 && dy > 0) return 1;
    if (dx > 0 && dy == 0) return 2;
    if (dx > 0 && dy < 0) return 3;
    if (dx == 0 && dy < 0) return 4;
    if (dx < 0 && dy < 0) return 5;
    if (dx < 0 && dy == 0) return 6;
    if (dx < 0 && dy > 0) return 7;
    return 8;
}

} // namespace

Calculus derive_point_cd() {
    Calculus c;
    c.name = "pointcd";
    c.relations = {"N", "NE", "E", "SE", "S", "SW", "W", "NW", "EQ"};
    c.identity = 8;
    c.converse.assign(9, -1);
    c.composition.assign(81, Bits::none());
    for (int x1 = -2; x1 <= 2; ++x1)
        for (int y1 = -2; y1 <= 2; ++y1) {
            int r = sign_class(x1, y1);
            int rc = sign_class(-x1, -y1);
            if (c.converse[r] >= 0 && c.converse[r] != rc)
                throw std::logic_error("point direction converse is not functional");
            c.converse[r] = rc;
            for (int x2 = -2; x2 <= 2; ++x2)
                for (int y2 = -2; y2 <= 2; ++y2)
                    c.comp(r, sign_class(x2, y2)).set(sign_class(x1 + x2, y1 + y2));
        }
    return c;
}

// ---------------------------------------------------------------------------
// cyclic ordering of orientations
// ---------------------------------------------------------------------------

namespace {

// e/l/o/r classification of a whole-degree angle; exact since 0 and 180 are
// hit without rounding.
int orient_class(int deg) {
    deg %= 360;
    if (deg < 0) deg += 360;
    if (deg == 0) return 0;   // e
    if (deg < 180) return 1;  // l
    if (deg == 180) return 2; // o
    return 3;                 // r
}

// Triple of classifications for ordered orientations (p, q, r) given the
// angle differences p-q and q-r.
std::array<int, 3> orient_triple(int d_pq, int d_qr) {
    return {orient_class(d_pq), orient_class(d_qr), orient_class(d_pq + d_qr)};
}

} // namespace

TernaryCalculus derive_cyc() {
    static const char letters[4] = {'e', 'l', 'o', 'r'};

    // realizable triples, over all whole-degree configurations
    std::map<std::array<int, 3>, int> index;
    for (int da = 0; da < 360; ++da)
        for (int db = 0; db < 360; ++db)
            index.emplace(orient_triple(da, db), 0);
    if (index.size() != 24)
        throw std::logic_error("orientation triple enumeration found " +
                               std::to_string(index.size()) + " relations, expected 24");

    TernaryCalculus c;
    c.name = "cyc";
    int next = 0;
    for (auto& [t, id] : index) {
        id = next++;
        c.relations.push_back({letters[t[0]], letters[t[1]], letters[t[2]]});
    }
    c.converse.assign(24, -1);
    c.rotation.assign(24, -1);
    c.composition.assign(24 * 24, Bits::none());

    // converse (p,q,r)->(p,r,q) and rotation (p,q,r)->(r,p,q), collected from
    // the same configurations; both must come out functional
    for (int da = 0; da < 360; ++da)
        for (int db = 0; db < 360; ++db) {
            int t = index.at(orient_triple(da, db));
            int tc = index.at(orient_triple(da + db, -db));
            int tr = index.at(orient_triple(-da - db, da));
            if (c.converse[t] >= 0 && c.converse[t] != tc)
                throw std::logic_error("orientation converse is not functional");
            if (c.rotation[t] >= 0 && c.rotation[t] != tr)
                throw std::logic_error("orientation rotation is not functional");
            c.converse[t] = tc;
            c.rotation[t] = tr;
        }

    // composition over chains (a,b,c)+(a,c,d) -> (a,b,d) on a 15-degree grid;
    // every realizable configuration pattern has a witness on this grid
    // because the pattern is determined by the cyclic order of the points
    // and their antipodes, and any such order is placeable on the grid
    for (int tb = 0; tb < 360; tb += 15)
        for (int tc_ = 0; tc_ < 360; tc_ += 15)
            for (int td = 0; td < 360; td += 15) {
                int t1 = index.at(orient_triple(-tb, tb - tc_));
                int t2 = index.at(orient_triple(-tc_, tc_ - td));
                int t3 = index.at(orient_triple(-tb, tb - td));
                c.comp(t1, t2).set(t3);
            }

    // symmetry closure: reading each chain backwards gives the same table
    for (int r = 0; r < 24; ++r)
        for (int s = 0; s < 24; ++s)
            for (int t = 0; t < 24; ++t) {
                if (c.comp(r, s).test(t) !=
                    c.comp(c.converse[s], c.converse[r]).test(c.converse[t]))
                    throw std::logic_error("orientation composition violates converse symmetry");
                if (c.comp(r, s).test(t) !=
                    c.comp(t, c.converse[s]).test(r))
                    throw std::logic_error("orientation composition violates cycle symmetry");
            }
    return c;
}

// ---------------------------------------------------------------------------
// valid direction-tile sets
// ---------------------------------------------------------------------------

DirectionUniverse derive_valid_direction_sets() {
    DirectionUniverse u;
    u.symbols = {"B", "N", "NW", "W", "SW", "S", "SE", "E", "NE"};
    // tile positions on the 3x3 grid, (col, row), row 0 at the north edge
    static const int col[9] = {1, 1, 0, 0, 0, 1, 2, 2, 2};
    static const int row[9] = {1, 0, 0, 1, 2, 2, 2, 1, 0};

    for (int mask = 1; mask < 512; ++mask) {
        // flood fill from the lowest tile; edge adjacency only
        int seen = 0;
        int stack[9];
        int top = 0;
        for (int i = 0; i < 9; ++i)
            if ((mask >> i) & 1) {
                stack[top++] = i;
                seen = 1 << i;
                break;
            }
        while (top > 0) {
            int i = stack[--top];
            for (int j = 0; j < 9; ++j) {
                if (!((mask >> j) & 1) || (seen >> j) & 1) continue;
                if (std::abs(col[i] - col[j]) + std::abs(row[i] - row[j]) == 1) {
                    seen |= 1 << j;
                    stack[top++] = j;
                }
            }
        }
        if (seen == mask) u.valid_sets.push_back(static_cast<std::uint16_t>(mask));
    }
    if (u.valid_sets.size() != 218)
        throw std::logic_error("connected direction-set enumeration found " +
                               std::to_string(u.valid_sets.size()) +
                               " sets, expected 218");
    return u;
}

} // namespace qsr
