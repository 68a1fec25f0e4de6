#include "qsr/calculus.hpp"

#include <sstream>
#include <stdexcept>

namespace qsr {

// ---------------------------------------------------------------------------
// direction universe helpers
// ---------------------------------------------------------------------------

std::string DirectionUniverse::set_name(std::uint16_t mask) const {
    std::string out;
    for (int i = 0; i < static_cast<int>(symbols.size()); ++i) {
        if (!((mask >> i) & 1)) continue;
        if (!out.empty()) out += '+';
        out += symbols[i];
    }
    return out.empty() ? "(empty)" : out;
}

int DirectionUniverse::parse_set(std::string_view text, std::uint16_t& out) const {
    out = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t plus = text.find('+', pos);
        std::string_view part = text.substr(
            pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos);
        int t = tile_index(part);
        if (t < 0) return -1;
        out = static_cast<std::uint16_t>(out | (1u << t));
        if (plus == std::string_view::npos) break;
        pos = plus + 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// axiom validation
// ---------------------------------------------------------------------------

std::vector<std::string> validate_calculus(const Calculus& c) {
    std::vector<std::string> out;
    const int n = c.size();
    auto sym = [&](int r) { return c.relations[r]; };

    if (n == 0) {
        out.push_back("no base relations");
        return out;
    }
    if (c.identity < 0 || c.identity >= n)
        out.push_back("identity relation missing");
    if (static_cast<int>(c.converse.size()) != n)
        out.push_back("converse map is not total");
    if (static_cast<int>(c.composition.size()) != n * n)
        out.push_back("composition map is not total");
    if (!out.empty()) return out; // structural damage; skip axiom checks

    for (int r = 0; r < n; ++r) {
        if (c.converse[r] < 0 || c.converse[r] >= n) {
            out.push_back("converse of " + sym(r) + " is out of range");
            return out;
        }
    }

    for (int r = 0; r < n; ++r)
        if (c.conv(c.conv(r)) != r)
            out.push_back("converse not involutive at " + sym(r) + ": conv(conv(" +
                          sym(r) + ")) = " + sym(c.conv(c.conv(r))));

    for (int r = 0; r < n; ++r) {
        if (!(c.comp(r, c.identity) == Bits::single(r)))
            out.push_back("identity law fails: comp(" + sym(r) + ", " +
                          sym(c.identity) + ") != {" + sym(r) + "}");
        if (!(c.comp(c.identity, r) == Bits::single(r)))
            out.push_back("identity law fails: comp(" + sym(c.identity) + ", " +
                          sym(r) + ") != {" + sym(r) + "}");
    }

    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            if (c.comp(r, s).empty())
                out.push_back("composition entry empty: comp(" + sym(r) + ", " +
                              sym(s) + ")");
            for (int t = 0; t < n; ++t) {
                bool fwd = c.comp(r, s).test(t);
                bool bwd = c.comp(c.conv(s), c.conv(r)).test(c.conv(t));
                if (fwd != bwd)
                    out.push_back("converse-composition law fails at (" + sym(r) +
                                  ", " + sym(s) + ", " + sym(t) + ")");
            }
        }

    // The converse table must be recoverable from composition: the identity
    // is feasible for a chained pair exactly when the pair is converse.
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            bool has_id = c.comp(r, s).test(c.identity);
            bool is_conv = (c.conv(r) == s);
            if (has_id != is_conv)
                out.push_back(
                    "converse not derivable from composition at (" + sym(r) + ", " +
                    sym(s) + "): identity " + (has_id ? "present" : "absent") +
                    ", converse pairing " + (is_conv ? "present" : "absent"));
        }

    return out;
}

std::vector<std::string> validate_ternary_calculus(const TernaryCalculus& c) {
    std::vector<std::string> out;
    const int n = c.size();
    auto sym = [&](int r) { return c.relations[r]; };

    if (n == 0) {
        out.push_back("no base relations");
        return out;
    }
    if (static_cast<int>(c.converse.size()) != n)
        out.push_back("converse map is not total");
    if (static_cast<int>(c.rotation.size()) != n)
        out.push_back("rotation map is not total");
    if (static_cast<int>(c.composition.size()) != n * n)
        out.push_back("composition map is not total");
    if (!out.empty()) return out;

    for (int r = 0; r < n; ++r) {
        if (c.converse[r] < 0 || c.converse[r] >= n || c.rotation[r] < 0 ||
            c.rotation[r] >= n) {
            out.push_back("converse/rotation of " + sym(r) + " is out of range");
            return out;
        }
    }

    for (int r = 0; r < n; ++r)
        if (c.conv(c.conv(r)) != r)
            out.push_back("converse not involutive at " + sym(r));

    for (int r = 0; r < n; ++r)
        if (c.rot(c.rot(c.rot(r))) != r)
            out.push_back("rotation cubed is not the identity at " + sym(r));

    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) {
                bool fwd = c.comp(r, s).test(t);
                bool bwd = c.comp(c.conv(s), c.conv(r)).test(c.conv(t));
                if (fwd != bwd)
                    out.push_back("converse-composition law fails at (" + sym(r) +
                                  ", " + sym(s) + ", " + sym(t) + ")");
            }

    return out;
}

// ---------------------------------------------------------------------------
// table file format
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void fail_at(int line_no, const std::string& msg) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + msg);
}

// Shared line scanner: strips comments, yields (line_no, tokens) for
// non-blank lines.
struct LineScanner {
    std::string_view text;
    std::size_t pos = 0;
    int line_no = 0;

    bool next(std::vector<std::string>& tokens) {
        while (pos < text.size()) {
            std::size_t eol = text.find('\n', pos);
            std::string_view line = text.substr(
                pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
            pos = eol == std::string_view::npos ? text.size() : eol + 1;
            ++line_no;
            std::size_t hash = line.find('#');
            if (hash != std::string_view::npos) line = line.substr(0, hash);
            tokens = split_ws(line);
            if (!tokens.empty()) return true;
        }
        return false;
    }
};

bool is_section(const std::string& word) {
    return word == "relations" || word == "identity" || word == "converse" ||
           word == "rotation" || word == "composition";
}

// Common parse core. Ternary tables have a rotation section and no identity;
// binary tables the reverse.
struct ParsedTable {
    std::vector<std::string> relations;
    int identity = -1;
    std::vector<int> converse;
    std::vector<int> rotation;
    std::vector<Bits> composition;
    std::vector<bool> comp_seen;
};

ParsedTable parse_table(std::string_view text, bool ternary) {
    ParsedTable t;
    LineScanner sc{text};
    std::vector<std::string> tok;
    std::string section;

    auto rel_index = [&](const std::string& s, int line_no) {
        for (int i = 0; i < static_cast<int>(t.relations.size()); ++i)
            if (t.relations[i] == s) return i;
        fail_at(line_no, "unknown relation symbol '" + s + "'");
    };
    auto need_relations = [&](int line_no) {
        if (t.relations.empty())
            fail_at(line_no, "section requires a preceding relations section");
        if (t.converse.empty()) {
            t.converse.assign(t.relations.size(), -1);
            t.rotation.assign(t.relations.size(), -1);
            t.composition.assign(t.relations.size() * t.relations.size(), Bits::none());
            t.comp_seen.assign(t.relations.size() * t.relations.size(), false);
        }
    };

    while (sc.next(tok)) {
        if (tok.size() == 1 && is_section(tok[0])) {
            section = tok[0];
            if (section == "rotation" && !ternary)
                fail_at(sc.line_no, "rotation section not allowed here");
            if (section == "identity" && ternary)
                fail_at(sc.line_no, "identity section not allowed here");
            continue;
        }
        if (section.empty())
            fail_at(sc.line_no, "content before any section header");
        if (section == "relations") {
            for (const auto& s : tok) {
                for (const auto& seen : t.relations)
                    if (seen == s) fail_at(sc.line_no, "duplicate relation '" + s + "'");
                t.relations.push_back(s);
            }
        } else if (section == "identity") {
            need_relations(sc.line_no);
            if (tok.size() != 1) fail_at(sc.line_no, "identity takes one symbol");
            if (t.identity >= 0) fail_at(sc.line_no, "identity declared twice");
            t.identity = rel_index(tok[0], sc.line_no);
        } else if (section == "converse" || section == "rotation") {
            need_relations(sc.line_no);
            if (tok.size() != 2) fail_at(sc.line_no, section + " rows take two symbols");
            int r = rel_index(tok[0], sc.line_no);
            int s = rel_index(tok[1], sc.line_no);
            auto& map = section == "converse" ? t.converse : t.rotation;
            if (map[r] >= 0) fail_at(sc.line_no, section + " of '" + tok[0] + "' declared twice");
            map[r] = s;
        } else { // composition
            need_relations(sc.line_no);
            if (tok.size() < 3 || tok[2] != "->")
                fail_at(sc.line_no, "composition rows look like 'R S -> T1 T2 ...'");
            int r = rel_index(tok[0], sc.line_no);
            int s = rel_index(tok[1], sc.line_no);
            std::size_t cell = static_cast<std::size_t>(r) * t.relations.size() + s;
            if (t.comp_seen[cell])
                fail_at(sc.line_no, "composition of (" + tok[0] + ", " + tok[1] +
                                        ") declared twice");
            t.comp_seen[cell] = true;
            for (std::size_t k = 3; k < tok.size(); ++k)
                t.composition[cell].set(rel_index(tok[k], sc.line_no));
        }
    }

    if (t.relations.empty()) fail_at(sc.line_no, "no relations section");
    if (t.converse.empty()) {
        // relations section present but nothing else
        t.converse.assign(t.relations.size(), -1);
        t.rotation.assign(t.relations.size(), -1);
        t.composition.assign(t.relations.size() * t.relations.size(), Bits::none());
        t.comp_seen.assign(t.relations.size() * t.relations.size(), false);
    }
    for (std::size_t r = 0; r < t.relations.size(); ++r) {
        if (t.converse[r] < 0)
            throw std::runtime_error("converse of '" + t.relations[r] + "' missing");
        if (ternary && t.rotation[r] < 0)
            throw std::runtime_error("rotation of '" + t.relations[r] + "' missing");
    }
    if (!ternary && t.identity < 0) throw std::runtime_error("identity missing");
    for (std::size_t r = 0; r < t.relations.size(); ++r)
        for (std::size_t s = 0; s < t.relations.size(); ++s)
            if (!t.comp_seen[r * t.relations.size() + s])
                throw std::runtime_error("composition of (" + t.relations[r] + ", " +
                                         t.relations[s] + ") missing");
    return t;
}

} // namespace

Calculus parse_calculus(std::string_view text, std::string name) {
    ParsedTable t = parse_table(text, false);
    Calculus c;
    c.name = std::move(name);
    c.relations = std::move(t.relations);
    c.identity = t.identity;
    c.converse = std::move(t.converse);
    c.composition = std::move(t.composition);
    return c;
}

TernaryCalculus parse_ternary_calculus(std::string_view text, std::string name) {
    ParsedTable t = parse_table(text, true);
    TernaryCalculus c;
    c.name = std::move(name);
    c.relations = std::move(t.relations);
    c.converse = std::move(t.converse);
    c.rotation = std::move(t.rotation);
    c.composition = std::move(t.composition);
    return c;
}

namespace {

void emit_common(std::ostringstream& os, const std::vector<std::string>& relations,
                 const std::vector<int>& converse) {
    os << "relations\n";
    for (std::size_t i = 0; i < relations.size(); ++i)
        os << relations[i] << (i + 1 < relations.size() ? ' ' : '\n');
    os << "converse\n";
    for (std::size_t r = 0; r < relations.size(); ++r)
        os << relations[r] << ' ' << relations[converse[r]] << '\n';
}

void emit_composition(std::ostringstream& os, const std::vector<std::string>& relations,
                      const std::vector<Bits>& composition) {
    os << "composition\n";
    const std::size_t n = relations.size();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
            os << relations[r] << ' ' << relations[s] << " ->";
            for (int v : composition[r * n + s]) os << ' ' << relations[v];
            os << '\n';
        }
}

} // namespace

std::string emit_calculus(const Calculus& c) {
    std::ostringstream os;
    os << "# " << c.name << "\n";
    emit_common(os, c.relations, c.converse);
    os << "identity\n" << c.relations[c.identity] << '\n';
    emit_composition(os, c.relations, c.composition);
    return os.str();
}

std::string emit_ternary_calculus(const TernaryCalculus& c) {
    std::ostringstream os;
    os << "# " << c.name << "\n";
    emit_common(os, c.relations, c.converse);
    os << "rotation\n";
    for (std::size_t r = 0; r < c.relations.size(); ++r)
        os << c.relations[r] << ' ' << c.relations[c.rotation[r]] << '\n';
    emit_composition(os, c.relations, c.composition);
    return os.str();
}

} // namespace qsr
