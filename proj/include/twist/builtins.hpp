#pragma once

// Built-in example documents, emitted in canonical serialized form:
//
//   quantum-torus    - two-variable torus, exponential pairing exp(2 t)
//                      (or, with a cyclotomic order N, the root-of-unity
//                      bicharacter with entries zeta^{+-1});
//   moyal            - affine plane with the canonical pairing of the two
//                      translation directions;
//   heisenberg       - 3x3 unitriangular group, pairing the center
//                      direction against one side;
//   mixed-nilpotent  - two torus directions and one translation direction,
//                      pairing torus-torus and torus-translation;
//   borel            - extended torus/line group with the terminating
//                      series cocycle.

#include <string>
#include <vector>

namespace twist::cli {

std::vector<std::string> builtin_names();

// cyclotomic = 0 keeps the generic document; N >= 2 swaps quantum-torus to
// the root-of-unity variant (SchemaError for other names or N = 1).
std::string builtin_document(const std::string& name, long cyclotomic = 0);

}  // namespace twist::cli
