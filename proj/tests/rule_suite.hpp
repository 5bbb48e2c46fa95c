#pragma once

// Shared six-rule suite used across the test and acceptance binaries.

#include <string_view>

namespace suite {

inline constexpr std::string_view kSixRules = R"(
alphabet a b
degreecap 8

rule delete_link rate 1
  lhs
    v 0 a
    v 1 a
    e 0 1
  rhs
    v 0 a
    v 1 a
  anchor 0 1
  glue 0 -> 0
  glue 1 -> 1
end

rule append_leaf rate 1
  lhs
    v 0 a
  rhs
    v 0 a
    v 1 a
    e 0 1
  anchor 0
  glue 0 -> 0
end

rule join_pair rate 1
  lhs
    v 0 a
    v 1 a
    v 2 a
    e 0 1
    e 1 2
  rhs
    v 0 a
    v 1 a
    v 2 a
    e 0 1
    e 1 2
    e 0 2
  anchor 0 1 2
  glue 0 -> 0
  glue 1 -> 1
  glue 2 -> 2
end

rule spin_flip rate 1
  lhs
    v 0 a
  rhs
    v 0 b
  anchor 0
  glue 0 -> 0
end

rule vertex_delete rate 1
  lhs
    v 0 a
  rhs
end

rule subdivide rate 1
  lhs
    v 0 a
    v 1 a
    e 0 1
  rhs
    v 0 a
    v 1 a
    v 2 a
    e 0 2
    e 2 1
  anchor 0 1
  glue 0 -> 0
  glue 1 -> 1
end
)";

inline constexpr std::string_view kSpinFlipBoth = R"(
alphabet a b
degreecap 8

rule flip_ab rate 1
  lhs
    v 0 a
  rhs
    v 0 b
  anchor 0
  glue 0 -> 0
end

rule flip_ba rate 1
  lhs
    v 0 b
  rhs
    v 0 a
  anchor 0
  glue 0 -> 0
end
)";

inline constexpr std::string_view kSpinFlipOneWay = R"(
alphabet a b
degreecap 8

rule flip_ab rate 1
  lhs
    v 0 a
  rhs
    v 0 b
  anchor 0
  glue 0 -> 0
end
)";

// contact-style dynamics: spontaneous flips both ways plus spread along edges
inline constexpr std::string_view kContact = R"(
alphabet a b
degreecap 8

rule flip_ab rate 0.5
  lhs
    v 0 a
  rhs
    v 0 b
  anchor 0
  glue 0 -> 0
end

rule flip_ba rate 0.5
  lhs
    v 0 b
  rhs
    v 0 a
  anchor 0
  glue 0 -> 0
end

rule spread rate 1
  lhs
    v 0 b
    v 1 a
    e 0 1
  rhs
    v 0 b
    v 1 b
    e 0 1
  anchor 0 1
  glue 0 -> 0
  glue 1 -> 1
end
)";

// locally reversible edge dynamics: close a 2-path into a triangle and open a
// triangle back into a 2-path, at equal rates. Transition rates between any
// two adjacent states match, so detailed balance holds with uniform weights.
inline constexpr std::string_view kTriangleEdge = R"(
alphabet a
degreecap 8

rule close_triangle rate 0.02
  lhs
    v 0 a
    v 1 a
    v 2 a
    e 0 1
    e 1 2
  rhs
    v 0 a
    v 1 a
    v 2 a
    e 0 1
    e 1 2
    e 0 2
  anchor 0 1 2
  glue 0 -> 0
  glue 1 -> 1
  glue 2 -> 2
end

rule open_triangle rate 0.02
  lhs
    v 0 a
    v 1 a
    v 2 a
    e 0 1
    e 1 2
    e 0 2
  rhs
    v 0 a
    v 1 a
    v 2 a
    e 0 1
    e 1 2
  anchor 0 1 2
  glue 0 -> 0
  glue 1 -> 1
  glue 2 -> 2
end
)";

inline constexpr std::string_view kAppendLeafOnly = R"(
alphabet a
degreecap 8

rule append_leaf rate 1
  lhs
    v 0 a
  rhs
    v 0 a
    v 1 a
    e 0 1
  anchor 0
  glue 0 -> 0
end
)";

inline constexpr std::string_view kFrozen = R"(
alphabet a b
degreecap 8
)";

}  // namespace suite
