#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "qsr/calculi.hpp"
#include "qsr/calculus.hpp"

using namespace qsr;

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// independent re-statement of the orientation classification used by the
// geometric soundness samples
int orient_class(int deg) {
    deg %= 360;
    if (deg < 0) deg += 360;
    if (deg == 0) return 0;
    if (deg < 180) return 1;
    if (deg == 180) return 2;
    return 3;
}

std::string orient_symbol(int p, int q, int r) {
    static const char letters[4] = {'e', 'l', 'o', 'r'};
    return {letters[orient_class(p - q)], letters[orient_class(q - r)],
            letters[orient_class(p - r)]};
}

bool same_tables(const Calculus& a, const Calculus& b) {
    return a.relations == b.relations && a.identity == b.identity &&
           a.converse == b.converse && a.composition == b.composition;
}

} // namespace

TEST_CASE("rcc8 table") {
    Calculus c = load_rcc8();
    CHECK(c.relations == std::vector<std::string>{"DC", "EC", "PO", "EQ", "TPP", "NTPP",
                                                  "TPPi", "NTPPi"});
    CHECK(c.identity == c.index_of("EQ"));
    CHECK(validate_calculus(c).empty());
    CHECK(c.triple_count() == 193);

    SUBCASE("converse pairs") {
        CHECK(c.conv(c.index_of("DC")) == c.index_of("DC"));
        CHECK(c.conv(c.index_of("EQ")) == c.index_of("EQ"));
        CHECK(c.conv(c.index_of("TPP")) == c.index_of("TPPi"));
        CHECK(c.conv(c.index_of("NTPP")) == c.index_of("NTPPi"));
        CHECK(c.conv(c.index_of("PO")) == c.index_of("PO"));
    }
    SUBCASE("composition entries") {
        CHECK(c.comp(c.index_of("NTPP"), c.index_of("EC")) == Bits::single(c.index_of("DC")));
        CHECK(c.comp(c.index_of("TPP"), c.index_of("TPP")) ==
              Bits::of({c.index_of("TPP"), c.index_of("NTPP")}));
        CHECK(c.comp(c.index_of("DC"), c.index_of("DC")) == c.full());
    }
}

TEST_CASE("validator flags corrupted tables") {
    Calculus good = load_rcc8();

    SUBCASE("broken converse") {
        Calculus c = good;
        c.converse[c.index_of("TPP")] = c.index_of("TPP");
        CHECK_FALSE(validate_calculus(c).empty());
    }
    SUBCASE("emptied composition entry") {
        Calculus c = good;
        c.comp(c.index_of("NTPP"), c.index_of("EC")) = Bits::none();
        CHECK_FALSE(validate_calculus(c).empty());
    }
    SUBCASE("identity smuggled into a non-converse entry") {
        Calculus c = good;
        c.comp(c.index_of("NTPP"), c.index_of("EC")).set(c.index_of("EQ"));
        CHECK_FALSE(validate_calculus(c).empty());
    }
    SUBCASE("identity law broken") {
        Calculus c = good;
        c.comp(c.index_of("TPP"), c.index_of("EQ")).set(c.index_of("DC"));
        CHECK_FALSE(validate_calculus(c).empty());
    }
}

TEST_CASE("size point algebra") {
    Calculus c = derive_size_pa();
    CHECK(c.relations == std::vector<std::string>{"<", "=", ">"});
    CHECK(c.identity == 1);
    CHECK(validate_calculus(c).empty());
    CHECK(c.triple_count() == 13);
    CHECK(c.conv(c.index_of("<")) == c.index_of(">"));
    CHECK(c.comp(c.index_of("<"), c.index_of("<")) == Bits::single(c.index_of("<")));
    CHECK(c.comp(c.index_of("<"), c.index_of(">")) == c.full());

    SUBCASE("derivation is deterministic") {
        CHECK(same_tables(c, derive_size_pa()));
    }
}

TEST_CASE("point cardinal directions") {
    Calculus c = derive_point_cd();
    CHECK(c.relations == std::vector<std::string>{"N", "NE", "E", "SE", "S", "SW", "W",
                                                  "NW", "EQ"});
    CHECK(c.identity == c.index_of("EQ"));
    CHECK(validate_calculus(c).empty());
    CHECK(c.triple_count() == 169);

    SUBCASE("converses are the opposite compass points") {
        CHECK(c.conv(c.index_of("N")) == c.index_of("S"));
        CHECK(c.conv(c.index_of("NW")) == c.index_of("SE"));
        CHECK(c.conv(c.index_of("E")) == c.index_of("W"));
        CHECK(c.conv(c.index_of("EQ")) == c.index_of("EQ"));
    }
    SUBCASE("composition follows displacement arithmetic") {
        CHECK(c.comp(c.index_of("N"), c.index_of("N")) == Bits::single(c.index_of("N")));
        CHECK(c.comp(c.index_of("N"), c.index_of("E")) == Bits::single(c.index_of("NE")));
        // opposite displacements can cancel, overshoot, or undershoot, but
        // never leave the north-south axis
        CHECK(c.comp(c.index_of("N"), c.index_of("S")) ==
              Bits::of({c.index_of("N"), c.index_of("S"), c.index_of("EQ")}));
        CHECK(c.comp(c.index_of("NE"), c.index_of("SW")) == c.full());
    }
    SUBCASE("derivation is deterministic") {
        CHECK(same_tables(c, derive_point_cd()));
    }
}

TEST_CASE("cyclic orientation calculus") {
    TernaryCalculus c = derive_cyc();
    REQUIRE(c.size() == 24);
    CHECK(validate_ternary_calculus(c).empty());
    CHECK(c.relations.front() == "eee");
    CHECK(c.index_of("lll") >= 0);
    CHECK(c.index_of("rrr") >= 0);
    CHECK(c.index_of("oeo") >= 0);
    CHECK(c.index_of("eel") == -1); // e in the first two slots forces e in the third

    SUBCASE("converse swaps the last two arguments") {
        CHECK(c.conv(c.index_of("eee")) == c.index_of("eee"));
        CHECK(c.conv(c.index_of("lll")) == c.index_of("lrl"));
        CHECK(c.conv(c.conv(c.index_of("llr"))) == c.index_of("llr"));
    }
    SUBCASE("rotation cycles the arguments") {
        CHECK(c.rot(c.index_of("eee")) == c.index_of("eee"));
        CHECK(c.rot(c.index_of("lll")) == c.index_of("rlr"));
        for (int r = 0; r < 24; ++r) CHECK(c.rot(c.rot(c.rot(r))) == r);
    }
    SUBCASE("composition chains only through a shared middle relation") {
        CHECK(c.comp(c.index_of("eee"), c.index_of("eee")) == Bits::single(c.index_of("eee")));
        int nonempty = 0;
        for (int r = 0; r < 24; ++r)
            for (int s = 0; s < 24; ++s) {
                bool chainable = c.relations[r][2] == c.relations[s][0];
                CHECK(c.comp(r, s).empty() == !chainable);
                if (!c.comp(r, s).empty()) ++nonempty;
            }
        CHECK(nonempty == 160);
        CHECK(c.triple_count() == 208);
    }
    SUBCASE("sampled configurations land inside the table") {
        std::uint64_t state = 2026;
        for (int i = 0; i < 1000; ++i) {
            int a = static_cast<int>(splitmix(state) % 360);
            int b = static_cast<int>(splitmix(state) % 360);
            int d = static_cast<int>(splitmix(state) % 360);
            int e = static_cast<int>(splitmix(state) % 360);
            int t1 = c.index_of(orient_symbol(a, b, d));
            int t2 = c.index_of(orient_symbol(a, d, e));
            int t3 = c.index_of(orient_symbol(a, b, e));
            REQUIRE(t1 >= 0);
            REQUIRE(t2 >= 0);
            REQUIRE(t3 >= 0);
            CHECK(c.comp(t1, t2).test(t3));
        }
    }
    SUBCASE("derivation is deterministic") {
        CHECK(emit_ternary_calculus(c) == emit_ternary_calculus(derive_cyc()));
    }
}

TEST_CASE("valid direction-tile sets") {
    DirectionUniverse d = derive_valid_direction_sets();
    REQUIRE(d.valid_sets.size() == 218);
    CHECK(d.symbols == std::vector<std::string>{"B", "N", "NW", "W", "SW", "S", "SE", "E",
                                                "NE"});

    SUBCASE("masks are ascending and unique") {
        for (std::size_t i = 1; i < d.valid_sets.size(); ++i)
            CHECK(d.valid_sets[i - 1] < d.valid_sets[i]);
    }
    SUBCASE("edge-connected sets are in, disconnected ones are out") {
        std::uint16_t mask = 0;
        REQUIRE(d.parse_set("N+NE+E", mask) == 0);
        CHECK(d.set_index(mask) >= 0);
        REQUIRE(d.parse_set("N+S", mask) == 0);
        CHECK(d.set_index(mask) == -1); // opposite edges never touch
        REQUIRE(d.parse_set("NW+SE", mask) == 0);
        CHECK(d.set_index(mask) == -1); // corner contact does not count
        CHECK(d.set_index(0b000000001) >= 0); // B alone
        CHECK(d.set_index(0b111111111) >= 0); // everything
        CHECK(d.set_index(0) == -1);
    }
    SUBCASE("sets containing the base tile") {
        int with_base = 0;
        for (std::uint16_t mask : d.valid_sets)
            if (mask & 1) ++with_base;
        CHECK(with_base == 161);
    }
    SUBCASE("names round trip") {
        CHECK(d.set_name(0) == "(empty)");
        for (std::uint16_t mask : d.valid_sets) {
            std::uint16_t back = 0;
            REQUIRE(d.parse_set(d.set_name(mask), back) == 0);
            CHECK(back == mask);
        }
        std::uint16_t out = 0;
        CHECK(d.parse_set("N+XX", out) == -1);
    }
}

TEST_CASE("calculus table text round trips") {
    SUBCASE("binary") {
        Calculus c = load_rcc8();
        Calculus back = parse_calculus(emit_calculus(c), c.name);
        CHECK(back.name == c.name);
        CHECK(same_tables(c, back));
    }
    SUBCASE("ternary") {
        TernaryCalculus c = derive_cyc();
        TernaryCalculus back = parse_ternary_calculus(emit_ternary_calculus(c), c.name);
        CHECK(back.relations == c.relations);
        CHECK(back.converse == c.converse);
        CHECK(back.rotation == c.rotation);
        CHECK(back.composition == c.composition);
    }
}

TEST_CASE("table text parse errors carry line numbers") {
    auto error_of = [](const char* text) -> std::string {
        try {
            (void)parse_calculus(text, "t");
        } catch (const std::exception& e) {
            return e.what();
        }
        return "";
    };

    SUBCASE("unknown symbol in a composition row") {
        std::string msg = error_of("relations\nA B\nidentity\nA\nconverse\nA A\nB B\n"
                                   "composition\nA A -> C\n");
        CHECK(msg.find("line 9") != std::string::npos);
    }
    SUBCASE("duplicate composition row") {
        std::string msg = error_of("relations\nA\nidentity\nA\nconverse\nA A\n"
                                   "composition\nA A -> A\nA A -> A\n");
        CHECK(msg.find("line 9") != std::string::npos);
    }
    SUBCASE("rotation section rejected in a binary table") {
        std::string msg = error_of("relations\nA\nrotation\nA A\n");
        CHECK(msg.find("line 3") != std::string::npos);
    }
    SUBCASE("well-formed text still needs every section") {
        std::string msg = error_of("relations\nA B\nidentity\nA\n");
        CHECK_FALSE(msg.empty());
    }
}
