#include "doctest.h"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qsr/random_instance.hpp"
#include "qsr/scenario_io.hpp"

using namespace qsr;

namespace {

const CalculusRegistry& reg() {
    static const CalculusRegistry r;
    return r;
}

using DomainKey = std::tuple<std::string, int, std::vector<int>>;

std::map<DomainKey, Bits> domain_map(const CheckResult& res) {
    std::map<DomainKey, Bits> out;
    for (const TupleDomain& td : res.domains)
        out[{td.aspect, td.time, td.objects}] = td.domain;
    return out;
}

const char* kFiveRegions = R"(# two views of the same five regions
aspect topo rcc8
aspect size size
objects r0 r1 r2 r3 r4
link topo_size topo size

rel topo r0 r2 { TPP EQ }
rel topo r1 r0 { TPP EQ PO }
rel topo r1 r2 { TPP EQ }
rel topo r4 r3 { TPP EQ }

rel size r0 r2 { < }
rel size r3 r1 { < = }
rel size r2 r4 { < = }
)";

// a random scenario touching every directive; meaning is irrelevant, only
// that emission and reparsing preserve it
Scenario random_scenario(RandomStream& rng) {
    Scenario sc;
    int n = 3 + static_cast<int>(rng.below(3));
    for (int i = 0; i < n; ++i) sc.objects.push_back("o" + std::to_string(i));

    sc.aspects.push_back(reg().make_aspect("topo", "rcc8"));
    bool with_size = rng.below(2) == 0;
    bool with_dir = rng.below(2) == 0;
    bool with_cyc = rng.below(2) == 0;
    if (with_size) {
        sc.aspects.push_back(reg().make_aspect("size", "size"));
        sc.links.push_back(LinkBinding{reg().link("topo_size"), {"topo", "size"}});
    }
    if (with_dir) {
        sc.aspects.push_back(reg().make_aspect("dir", "dirsets"));
        sc.links.push_back(LinkBinding{reg().link("topo_dir"), {"topo", "dir"}});
    }
    if (with_cyc) sc.aspects.push_back(reg().make_aspect("ori", "cyc"));
    if (rng.below(2) == 0) {
        sc.time_steps = 2 + static_cast<int>(rng.below(2));
        sc.neighbours.push_back(
            NeighbourBinding{reg().neighbour("rcc8_step"), "topo"});
    }

    int picks = 1 + static_cast<int>(rng.below(4));
    for (int p = 0; p < picks; ++p) {
        const AspectDecl& ad = sc.aspects[rng.below(sc.aspects.size())];
        Restriction r;
        r.aspect = ad.name;
        std::set<int> used;
        while (static_cast<int>(used.size()) < ad.arity)
            used.insert(static_cast<int>(rng.below(n)));
        r.objects.assign(used.begin(), used.end());
        if (ad.arity == 3 && n < 3) continue;
        if (sc.time_steps > 1 && rng.below(2) == 0)
            r.time = 1 + static_cast<int>(rng.below(sc.time_steps));
        while (r.allowed.empty())
            for (int v = 0; v < ad.universe(); ++v)
                if (rng.below(3) == 0) r.allowed.set(v);
        sc.restrictions.push_back(std::move(r));
    }
    return sc;
}

} // namespace

TEST_CASE("registry serves the shipped tables") {
    REQUIRE(reg().binary("rcc8") != nullptr);
    CHECK(reg().binary("rcc8")->size() == 8);
    REQUIRE(reg().binary("size") != nullptr);
    REQUIRE(reg().binary("pointcd") != nullptr);
    CHECK(reg().binary("cyc") == nullptr);
    CHECK(reg().binary("nope") == nullptr);

    REQUIRE(reg().ternary("cyc") != nullptr);
    CHECK(reg().ternary("cyc")->size() == 24);
    CHECK(reg().ternary("rcc8") == nullptr);

    REQUIRE(reg().link("topo_size") != nullptr);
    REQUIRE(reg().link("topo_dir") != nullptr);
    CHECK(reg().link("rcc8_step") == nullptr);

    REQUIRE(reg().neighbour("rcc8_step") != nullptr);
    CHECK(reg().neighbour("topo_size") == nullptr);

    CHECK(reg().direction().valid_sets.size() == 218);

    AspectDecl d = reg().make_aspect("d", "dirsets");
    CHECK(d.set_valued);
    CHECK(d.arity == 2);
    CHECK(d.symbol_index("B+N") >= 0);
    CHECK(d.symbol_index("N+S") == -1); // not edge-connected
    CHECK_THROWS_AS(reg().make_aspect("x", "foo"), std::invalid_argument);
}

TEST_CASE("parsing a full scenario") {
    const char* text = R"(# layout with motion
aspect topo rcc8
aspect size size
aspect dir dirsets set_valued
objects a b c
time 2
link topo_size topo size
link topo_dir topo dir
neighbour rcc8_step topo
rel topo a b @1 { DC EC }
rel topo a b @2 { PO }
rel size b c { < = }
rel dir a c { B+N N+NE+E }
)";
    Scenario sc = parse_scenario(text, reg());

    REQUIRE(sc.aspects.size() == 3);
    CHECK(sc.aspects[0].calculus_name == "rcc8");
    CHECK(sc.aspects[2].set_valued);
    CHECK(sc.objects == std::vector<std::string>{"a", "b", "c"});
    CHECK(sc.time_steps == 2);
    REQUIRE(sc.links.size() == 2);
    CHECK(sc.links[0].table == reg().link("topo_size"));
    CHECK(sc.links[1].aspects == std::vector<std::string>{"topo", "dir"});
    REQUIRE(sc.neighbours.size() == 1);
    CHECK(sc.neighbours[0].table == reg().neighbour("rcc8_step"));
    CHECK(sc.neighbours[0].aspect == "topo");

    REQUIRE(sc.restrictions.size() == 4);
    CHECK(sc.restrictions[0].objects == std::vector<int>{0, 1});
    CHECK(sc.restrictions[0].time == 1);
    CHECK(sc.restrictions[0].allowed.count() == 2);
    CHECK(sc.restrictions[1].time == 2);
    CHECK(sc.restrictions[2].time == -1);
    CHECK(sc.restrictions[3].allowed.count() == 2);

    // the parsed scenario is buildable and propagates
    CHECK_FALSE(check(sc).inconsistent);
}

TEST_CASE("emission is a parse fixpoint") {
    Scenario sc = parse_scenario(kFiveRegions, reg());
    std::string emitted = emit_scenario(sc);
    Scenario again = parse_scenario(emitted, reg());
    CHECK(emit_scenario(again) == emitted);
    CHECK(check(sc).inconsistent == check(again).inconsistent);

    SUBCASE("emission is canonical regardless of input spacing") {
        std::string crowded(kFiveRegions);
        for (char& c : crowded)
            if (c == ' ') c = '\t';
        // comments and blank lines vanish, tabs separate as well as spaces
        CHECK(emit_scenario(parse_scenario(crowded, reg())) == emitted);
    }
}

TEST_CASE("random scenarios survive emission and reparsing") {
    RandomStream rng(7);
    for (int i = 0; i < 30; ++i) {
        CAPTURE(i);
        Scenario sc = random_scenario(rng);
        std::string emitted = emit_scenario(sc);
        Scenario back = parse_scenario(emitted, reg());
        CHECK(emit_scenario(back) == emitted);

        CheckResult a = check(sc);
        CheckResult b = check(back);
        CHECK(a.inconsistent == b.inconsistent);
        if (!a.inconsistent) CHECK(domain_map(a) == domain_map(b));
    }
}

TEST_CASE("set-valued scenarios round trip with tile lists") {
    const char* text = R"(aspect dir dirsets set_valued
objects a b
rel dir a b { B+N }
)";
    Scenario sc = parse_scenario(text, reg());
    REQUIRE(sc.restrictions.size() == 1);
    CHECK(sc.restrictions[0].allowed.count() == 1);

    std::string emitted = emit_scenario(sc);
    CHECK(emitted.find("set_valued") != std::string::npos);
    CHECK(emitted.find("B+N") != std::string::npos);
    CHECK(emit_scenario(parse_scenario(emitted, reg())) == emitted);

    SUBCASE("the set_valued flag is implied by the calculus") {
        Scenario bare = parse_scenario("aspect dir dirsets\nobjects a b\n", reg());
        CHECK(bare.aspects[0].set_valued);
        CHECK(emit_scenario(bare).find("set_valued") != std::string::npos);
    }
}

TEST_CASE("temporal scenarios round trip") {
    const char* text = R"(aspect topo rcc8
objects a b
time 3
neighbour rcc8_step topo
rel topo a b @1 { DC }
rel topo a b @3 { PO }
)";
    Scenario sc = parse_scenario(text, reg());
    CHECK(sc.time_steps == 3);
    std::string emitted = emit_scenario(sc);
    CHECK(emitted.find("time 3") != std::string::npos);
    CHECK(emitted.find("@1") != std::string::npos);
    CHECK(emit_scenario(parse_scenario(emitted, reg())) == emitted);

    std::map<DomainKey, Bits> dom = domain_map(check(sc));
    CHECK(dom[{"topo", 2, {0, 1}}] ==
          Bits::single(reg().binary("rcc8")->index_of("EC")));
}

TEST_CASE("parse errors carry line numbers") {
    auto parse = [](const char* text) { return parse_scenario(text, reg()); };

    CHECK_THROWS_WITH_AS(parse("aspect t foo\nobjects a b\n"),
                         "line 1: unknown calculus 'foo'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nrel t a b { XX }\n"),
                         "line 3: unknown relation 'XX' for aspect 't'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nrel t a b { DC\n"),
                         "line 3: missing '}'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\n"), "scenario declares no objects",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse("aspect t rcc8\nobjects a b\ntime 2\nrel t a b @5 { DC }\n"),
        "line 4: step 5 exceeds time 2", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nrel t a b { }\n"),
                         "line 3: empty relation set", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8 set_valued\nobjects a b\n"),
                         "line 1: only dirsets aspects are set_valued",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nlink topo_size t\n"),
                         "line 3: link 'topo_size' binds 2 aspects",
                         std::runtime_error);

    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\naspect t size\nobjects a\n"),
                         "line 2: duplicate aspect 't'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a a\n"),
                         "line 2: duplicate object 'a'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("objects a\ntime 2\ntime 3\n"),
                         "line 3: duplicate time directive", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("objects a\nbogus x\n"),
                         "line 2: unknown directive 'bogus'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nrel t a x { DC }\n"),
                         "line 3: unknown object 'x'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nrel t a { DC }\n"),
                         "line 3: aspect 't' needs 2 objects", std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse("aspect o cyc\nobjects a b c\nrel o a a b { eee }\n"),
        "line 3: ternary relation needs distinct objects", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nrel t a b { DC } x\n"),
                         "line 3: unexpected token 'x' after '}'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("objects a\ntime 0\n"),
                         "line 2: time must be a positive integer, got '0'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nrel t a b @x { DC }\n"),
                         "line 3: step must be a positive integer, got 'x'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect t rcc8\nobjects a b\nlink nope t t\n"),
                         "line 3: unknown link table 'nope'", std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse("aspect t rcc8\naspect s size\nobjects a\nlink topo_size s t\n"),
        "line 4: aspect 's' is size, slot needs rcc8", std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse("aspect s size\nobjects a\nneighbour rcc8_step s\n"),
        "line 3: aspect 's' is size, table needs rcc8", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("aspect s size\nobjects a\nneighbour nope s\n"),
                         "line 3: unknown neighbour table 'nope'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse("aspect d dirsets\nobjects a b\nrel d a b { N+S }\n"),
        "line 3: unknown relation 'N+S' for aspect 'd'", std::runtime_error);
}

TEST_CASE("emission rejects dangling restrictions") {
    Scenario sc;
    sc.objects = {"a", "b"};
    sc.aspects.push_back(reg().make_aspect("topo", "rcc8"));
    Restriction r;
    r.aspect = "ghost";
    r.objects = {0, 1};
    r.allowed.set(0);
    sc.restrictions.push_back(r);
    CHECK_THROWS_AS(emit_scenario(sc), std::invalid_argument);

    sc.restrictions[0].aspect = "topo";
    sc.restrictions[0].objects = {0, 9};
    CHECK_THROWS_AS(emit_scenario(sc), std::invalid_argument);
}
