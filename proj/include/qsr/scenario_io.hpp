#pragma once

#include <string>
#include <string_view>

#include "qsr/calculi.hpp"
#include "qsr/scenario.hpp"

namespace qsr {

// Owns the shipped calculi and the link/neighbour tables; scenario
// declarations point into it, so a registry must outlive every scenario
// parsed against it.
class CalculusRegistry {
public:
    CalculusRegistry();

    const Calculus& rcc8() const { return rcc8_; }
    const Calculus& size() const { return size_; }
    const Calculus& pointcd() const { return pointcd_; }
    const TernaryCalculus& cyc() const { return cyc_; }
    const DirectionUniverse& direction() const { return dir_; }

    // nullptr when the name is unknown
    const Calculus* binary(std::string_view name) const;
    const TernaryCalculus* ternary(std::string_view name) const;
    const LinkTable* link(std::string_view name) const;
    const NeighbourTable* neighbour(std::string_view name) const;

    // aspect declaration for any known calculus name ("rcc8", "size",
    // "pointcd", "cyc", "dirsets"); throws std::invalid_argument otherwise
    AspectDecl make_aspect(std::string aspect_name, std::string_view calculus) const;

private:
    Calculus rcc8_, size_, pointcd_;
    TernaryCalculus cyc_;
    DirectionUniverse dir_;
    LinkTable link_topo_size_, link_topo_dir_;
    NeighbourTable neighbour_rcc8_;
};

// Scenario file format, line-oriented with `#` comments:
//   aspect <name> <calculus> [set_valued]
//   objects <name>...
//   time <T>
//   rel <aspect> <obj>... [@<step>] { <relation>... }
//   link <table-name> <aspect>...
//   neighbour <table-name> <aspect>
// Relations of set-valued aspects are tile lists like B+N. A rel line
// without @<step> restricts every step. Declaration order is free.
// Throws std::runtime_error with a line-numbered message on bad input.
Scenario parse_scenario(std::string_view text, const CalculusRegistry& reg);

// Canonical emission; parse_scenario(emit_scenario(s)) reproduces s.
std::string emit_scenario(const Scenario& sc);

} // namespace qsr
