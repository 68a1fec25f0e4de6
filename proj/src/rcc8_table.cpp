#include "qsr/calculi.hpp"

namespace qsr {

const char* rcc8_table_text() {
    return R"(# RCC-8: topological relations between plane regions
relations
DC EC PO EQ TPP NTPP TPPi NTPPi

identity
EQ

converse
DC DC
EC EC
PO PO
EQ EQ
TPP TPPi
NTPP NTPPi
TPPi TPP
NTPPi NTPP

composition
DC DC -> DC EC PO EQ TPP NTPP TPPi NTPPi
DC EC -> DC EC PO TPP NTPP
DC PO -> DC EC PO TPP NTPP
DC EQ -> DC
DC TPP -> DC EC PO TPP NTPP
DC NTPP -> DC EC PO TPP NTPP
DC TPPi -> DC
DC NTPPi -> DC

EC DC -> DC EC PO TPPi NTPPi
EC EC -> DC EC PO EQ TPP TPPi
EC PO -> DC EC PO TPP NTPP
EC EQ -> EC
EC TPP -> EC PO TPP NTPP
EC NTPP -> PO TPP NTPP
EC TPPi -> DC EC
EC NTPPi -> DC

PO DC -> DC EC PO TPPi NTPPi
PO EC -> DC EC PO TPPi NTPPi
PO PO -> DC EC PO EQ TPP NTPP TPPi NTPPi
PO EQ -> PO
PO TPP -> PO TPP NTPP
PO NTPP -> PO TPP NTPP
PO TPPi -> DC EC PO TPPi NTPPi
PO NTPPi -> DC EC PO TPPi NTPPi

EQ DC -> DC
EQ EC -> EC
EQ PO -> PO
EQ EQ -> EQ
EQ TPP -> TPP
EQ NTPP -> NTPP
EQ TPPi -> TPPi
EQ NTPPi -> NTPPi

TPP DC -> DC
TPP EC -> DC EC
TPP PO -> DC EC PO TPP NTPP
TPP EQ -> TPP
TPP TPP -> TPP NTPP
TPP NTPP -> NTPP
TPP TPPi -> DC EC PO EQ TPP TPPi
TPP NTPPi -> DC EC PO TPPi NTPPi

NTPP DC -> DC
NTPP EC -> DC
NTPP PO -> DC EC PO TPP NTPP
NTPP EQ -> NTPP
NTPP TPP -> NTPP
NTPP NTPP -> NTPP
NTPP TPPi -> DC EC PO TPP NTPP
NTPP NTPPi -> DC EC PO EQ TPP NTPP TPPi NTPPi

TPPi DC -> DC EC PO TPPi NTPPi
TPPi EC -> EC PO TPPi NTPPi
TPPi PO -> PO TPPi NTPPi
TPPi EQ -> TPPi
TPPi TPP -> PO EQ TPP TPPi
TPPi NTPP -> PO TPP NTPP
TPPi TPPi -> TPPi NTPPi
TPPi NTPPi -> NTPPi

NTPPi DC -> DC EC PO TPPi NTPPi
NTPPi EC -> PO TPPi NTPPi
NTPPi PO -> PO TPPi NTPPi
NTPPi EQ -> NTPPi
NTPPi TPP -> PO TPPi NTPPi
NTPPi NTPP -> PO EQ TPP NTPP TPPi NTPPi
NTPPi TPPi -> NTPPi
NTPPi NTPPi -> NTPPi
)";
}

} // namespace qsr
