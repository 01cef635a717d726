// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <string>

#include "stprune/instance.hpp"
#include "stprune/stp_io.hpp"

namespace stprune::testing {

// Star-plus-triangle: hub node 4 with unit spokes, heavy triangle on the
// terminals {1,2,3}. Optimal tree = the three spokes, weight 3.
inline const char* kG1 = R"(33D32945 STP File, STP Format Version 1.0

SECTION Graph
Nodes 4
Edges 6
E 1 4 1
E 2 4 1
E 3 4 1
E 1 2 3
E 1 3 3
E 2 3 3
END

SECTION Terminals
Terminals 3
T 1
T 2
T 3
END

EOF
)";

// Triangle with a cheap two-hop path between the terminals {1,3}.
// Optimal tree = path 1-2-3, weight 2.
inline const char* kG2 = R"(SECTION Graph
Nodes 3
Edges 3
E 1 2 1
E 2 3 1
E 1 3 3
END

SECTION Terminals
Terminals 2
T 1
T 3
END

EOF
)";

// Single edge, both endpoints terminals. Optimal tree weight 5.
inline const char* kG3 = R"(SECTION Graph
Nodes 2
Edges 1
E 1 2 5
END

SECTION Terminals
Terminals 2
T 1
T 2
END

EOF
)";

inline SteinerInstance g1() { return parse_instance(kG1, "g1"); }
inline SteinerInstance g2() { return parse_instance(kG2, "g2"); }
inline SteinerInstance g3() { return parse_instance(kG3, "g3"); }

}  // namespace stprune::testing
