#pragma once

#include "morph/model.hpp"

namespace fixtures {

// Strongly coupled reference set: b = [100,10,10,10,10], c = [10,10,1,10,10],
// p1 = p3 = 100, d = 1/10. Produces the characteristic spike/dip pair of the
// bound-receptor species at the source.
inline morph::Params reference_params() {
  return morph::Params(0.1, {100.0, 10.0, 10.0, 10.0, 10.0},
                       {10.0, 10.0, 1.0, 10.0, 10.0}, 100.0, 100.0);
}

// Decoupled point-source set (c = 0, p3 = 0, b = 1, p1 = 2): the ligand
// profile has the closed form cosh(1-|x|)/sinh(1) and everything else is 0.
inline morph::Params point_source_params() {
  return morph::Params(1.0, {1.0, 1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0, 0.0}, 2.0,
                       0.0);
}

}  // namespace fixtures
