#include "qsr/scenario_io.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace qsr {

CalculusRegistry::CalculusRegistry()
    : rcc8_(load_rcc8()),
      size_(derive_size_pa()),
      pointcd_(derive_point_cd()),
      cyc_(derive_cyc()),
      dir_(derive_valid_direction_sets()),
      link_topo_size_(qsr::link_topo_size(rcc8_, size_)),
      link_topo_dir_(qsr::link_topo_dir(rcc8_, dir_)),
      neighbour_rcc8_(qsr::neighbour_rcc8(rcc8_)) {}

const Calculus* CalculusRegistry::binary(std::string_view name) const {
    if (name == rcc8_.name) return &rcc8_;
    if (name == size_.name) return &size_;
    if (name == pointcd_.name) return &pointcd_;
    return nullptr;
}

const TernaryCalculus* CalculusRegistry::ternary(std::string_view name) const {
    return name == cyc_.name ? &cyc_ : nullptr;
}

const LinkTable* CalculusRegistry::link(std::string_view name) const {
    if (name == link_topo_size_.name) return &link_topo_size_;
    if (name == link_topo_dir_.name) return &link_topo_dir_;
    return nullptr;
}

const NeighbourTable* CalculusRegistry::neighbour(std::string_view name) const {
    return name == neighbour_rcc8_.name ? &neighbour_rcc8_ : nullptr;
}

AspectDecl CalculusRegistry::make_aspect(std::string aspect_name,
                                         std::string_view calculus) const {
    if (const Calculus* b = binary(calculus))
        return AspectDecl::make_binary(std::move(aspect_name), *b);
    if (const TernaryCalculus* t = ternary(calculus))
        return AspectDecl::make_ternary(std::move(aspect_name), *t);
    if (calculus == "dirsets")
        return AspectDecl::make_set_valued(std::move(aspect_name), dir_);
    throw std::invalid_argument("unknown calculus '" + std::string(calculus) + "'");
}

namespace {

struct Directive {
    int line = 0;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

// Whitespace-separated tokens; '{' and '}' always stand alone.
std::vector<Directive> tokenize(std::string_view text) {
    std::vector<Directive> out;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? text.size() - pos
                                                     : eol - pos);
        ++line_no;
        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        Directive d;
        d.line = line_no;
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) {
                d.tokens.push_back(cur);
                cur.clear();
            }
        };
        for (char ch : line) {
            if (std::isspace(static_cast<unsigned char>(ch))) {
                flush();
            } else if (ch == '{' || ch == '}') {
                flush();
                d.tokens.push_back(std::string(1, ch));
            } else {
                cur.push_back(ch);
            }
        }
        flush();
        if (!d.tokens.empty()) out.push_back(std::move(d));

        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return out;
}

int parse_positive_int(const std::string& tok, int line, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 1)
        fail(line, std::string(what) + " must be a positive integer, got '" + tok + "'");
    return value;
}

} // namespace

Scenario parse_scenario(std::string_view text, const CalculusRegistry& reg) {
    std::vector<Directive> directives = tokenize(text);
    Scenario sc;
    bool time_seen = false;

    // declarations first, so rel/link/neighbour lines may precede them
    for (const Directive& d : directives) {
        const std::vector<std::string>& t = d.tokens;
        const std::string& kw = t[0];
        if (kw == "aspect") {
            if (t.size() != 3 && t.size() != 4)
                fail(d.line, "expected: aspect <name> <calculus> [set_valued]");
            if (sc.find_aspect(t[1])) fail(d.line, "duplicate aspect '" + t[1] + "'");
            if (t.size() == 4 && t[3] != "set_valued")
                fail(d.line, "unexpected token '" + t[3] + "'");
            if (t.size() == 4 && t[2] != "dirsets")
                fail(d.line, "only dirsets aspects are set_valued");
            try {
                sc.aspects.push_back(reg.make_aspect(t[1], t[2]));
            } catch (const std::invalid_argument& e) {
                fail(d.line, e.what());
            }
        } else if (kw == "objects") {
            if (t.size() < 2) fail(d.line, "expected: objects <name>...");
            for (size_t i = 1; i < t.size(); ++i) {
                if (sc.object_index(t[i]) >= 0)
                    fail(d.line, "duplicate object '" + t[i] + "'");
                sc.objects.push_back(t[i]);
            }
        } else if (kw == "time") {
            if (t.size() != 2) fail(d.line, "expected: time <steps>");
            if (time_seen) fail(d.line, "duplicate time directive");
            time_seen = true;
            sc.time_steps = parse_positive_int(t[1], d.line, "time");
        } else if (kw != "rel" && kw != "link" && kw != "neighbour") {
            fail(d.line, "unknown directive '" + kw + "'");
        }
    }
    if (sc.objects.empty()) throw std::runtime_error("scenario declares no objects");

    for (const Directive& d : directives) {
        const std::vector<std::string>& t = d.tokens;
        const std::string& kw = t[0];
        if (kw == "rel") {
            if (t.size() < 2) fail(d.line, "expected: rel <aspect> <objects> { <relations> }");
            const AspectDecl* decl = sc.find_aspect(t[1]);
            if (!decl) fail(d.line, "unknown aspect '" + t[1] + "'");

            Restriction r;
            r.aspect = decl->name;
            size_t i = 2;
            for (int k = 0; k < decl->arity; ++k, ++i) {
                if (i >= t.size() || t[i] == "{" || t[i][0] == '@')
                    fail(d.line, "aspect '" + decl->name + "' needs " +
                                     std::to_string(decl->arity) + " objects");
                int obj = sc.object_index(t[i]);
                if (obj < 0) fail(d.line, "unknown object '" + t[i] + "'");
                r.objects.push_back(obj);
            }
            if (decl->arity == 3 &&
                (r.objects[0] == r.objects[1] || r.objects[0] == r.objects[2] ||
                 r.objects[1] == r.objects[2]))
                fail(d.line, "ternary relation needs distinct objects");
            if (i < t.size() && t[i][0] == '@') {
                int step = parse_positive_int(t[i].substr(1), d.line, "step");
                if (step > sc.time_steps)
                    fail(d.line, "step " + std::to_string(step) + " exceeds time " +
                                     std::to_string(sc.time_steps));
                r.time = step;
                ++i;
            }
            if (i >= t.size() || t[i] != "{") fail(d.line, "expected '{'");
            ++i;
            bool closed = false;
            for (; i < t.size(); ++i) {
                if (t[i] == "}") {
                    closed = true;
                    ++i;
                    break;
                }
                int v = decl->symbol_index(t[i]);
                if (v < 0)
                    fail(d.line, "unknown relation '" + t[i] + "' for aspect '" +
                                     decl->name + "'");
                r.allowed.set(v);
            }
            if (!closed) fail(d.line, "missing '}'");
            if (i != t.size()) fail(d.line, "unexpected token '" + t[i] + "' after '}'");
            if (r.allowed.empty()) fail(d.line, "empty relation set");
            sc.restrictions.push_back(std::move(r));
        } else if (kw == "link") {
            if (t.size() < 3) fail(d.line, "expected: link <table> <aspect>...");
            const LinkTable* table = reg.link(t[1]);
            if (!table) fail(d.line, "unknown link table '" + t[1] + "'");
            if (t.size() - 2 != table->slots.size())
                fail(d.line, "link '" + table->name + "' binds " +
                                 std::to_string(table->slots.size()) + " aspects");
            LinkBinding b;
            b.table = table;
            for (size_t i = 2; i < t.size(); ++i) {
                const AspectDecl* decl = sc.find_aspect(t[i]);
                if (!decl) fail(d.line, "unknown aspect '" + t[i] + "'");
                if (decl->calculus_name != table->slots[i - 2].calculus_name)
                    fail(d.line, "aspect '" + decl->name + "' is " + decl->calculus_name +
                                     ", slot needs " + table->slots[i - 2].calculus_name);
                b.aspects.push_back(decl->name);
            }
            sc.links.push_back(std::move(b));
        } else if (kw == "neighbour") {
            if (t.size() != 3) fail(d.line, "expected: neighbour <table> <aspect>");
            const NeighbourTable* table = reg.neighbour(t[1]);
            if (!table) fail(d.line, "unknown neighbour table '" + t[1] + "'");
            const AspectDecl* decl = sc.find_aspect(t[2]);
            if (!decl) fail(d.line, "unknown aspect '" + t[2] + "'");
            if (decl->calculus_name != table->calculus_name)
                fail(d.line, "aspect '" + decl->name + "' is " + decl->calculus_name +
                                 ", table needs " + table->calculus_name);
            sc.neighbours.push_back(NeighbourBinding{table, decl->name});
        }
    }
    return sc;
}

std::string emit_scenario(const Scenario& sc) {
    std::string out;
    for (const AspectDecl& a : sc.aspects) {
        out += "aspect " + a.name + " " + a.calculus_name;
        if (a.set_valued) out += " set_valued";
        out += "\n";
    }
    out += "objects";
    for (const std::string& o : sc.objects) out += " " + o;
    out += "\n";
    if (sc.time_steps != 1) out += "time " + std::to_string(sc.time_steps) + "\n";
    for (const LinkBinding& b : sc.links) {
        out += "link " + b.table->name;
        for (const std::string& a : b.aspects) out += " " + a;
        out += "\n";
    }
    for (const NeighbourBinding& b : sc.neighbours)
        out += "neighbour " + b.table->name + " " + b.aspect + "\n";
    for (const Restriction& r : sc.restrictions) {
        const AspectDecl* decl = sc.find_aspect(r.aspect);
        if (!decl) throw std::invalid_argument("restriction on unknown aspect '" + r.aspect + "'");
        out += "rel " + decl->name;
        for (int obj : r.objects) {
            if (obj < 0 || obj >= static_cast<int>(sc.objects.size()))
                throw std::invalid_argument("restriction object index out of range");
            out += " " + sc.objects[obj];
        }
        if (r.time != -1) out += " @" + std::to_string(r.time);
        out += " {";
        for (int v : r.allowed) out += " " + decl->symbol(v);
        out += " }\n";
    }
    return out;
}

} // namespace qsr
