#pragma once

// Declarative input documents: UTF-8 JSON with a top-level schema_version,
// carrying the group presentation, an optional Lie section (basis,
// structure constants, derivation realizations), an optional cocycle
// description, and task options.  Expression-valued fields use the grammar
// from exprparse.hpp; tensor pairs are two-element lists.
//
// parse_document validates the schema and every referenced name eagerly
// (diagnostics carry the JSON path and a column); serialize_document emits
// canonical bytes, so parse -> serialize -> parse is the identity.  The
// build_* helpers turn the declarative sections into engine objects.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twist/cocycle.hpp"

namespace twist::cli {

struct FilteredVarSpec {
  std::string name;
  long degree = 1;
  std::vector<std::pair<std::string, std::string>> coproduct;  // correction terms
};

struct GroupSection {
  std::string mode = "strict";
  std::vector<std::string> torus;
  std::vector<FilteredVarSpec> filtered;
};

struct BracketSpec {
  std::string a, b;
  std::vector<std::pair<std::string, std::string>> value;  // basis name -> coeff
};

struct DerivationSpec {
  std::string name;
  std::string tag;  // "toral" or "nilpotent"
  std::vector<std::pair<std::string, std::string>> on;  // variable -> value
};

struct LieSection {
  std::vector<std::string> basis;
  std::vector<BracketSpec> brackets;
  std::vector<DerivationSpec> derivations;
};

struct WedgeSpec {
  std::string a, b;   // Lie basis names
  std::string coeff;  // scalar expression
};

struct CocycleSpec {
  // "trivial" | "bicharacter" | "exp-bivector" | "borel-series" | "convolution"
  std::string variant;
  std::vector<std::vector<std::string>> matrix;  // bicharacter: k x k units
  std::string sign = "1";                        // exp-bivector exponent factor
  std::vector<WedgeSpec> wedges;                 // exp-bivector terms
  std::string parameter;                         // borel-series parameter name
  std::vector<CocycleSpec> factors;              // convolution factors
};

struct TaskOptions {
  long degree = 4;
  long box = 4;  // torus exponents range over [-box, box]
  std::string format = "text";
};

struct Document {
  GroupSection group_section;
  std::optional<LieSection> lie;
  std::optional<CocycleSpec> cocycle;
  TaskOptions options;
  hopf::GroupData group;  // built and name-checked during parsing
};

Document parse_document(const std::string& text);
std::string serialize_document(const Document& doc);

// Lie section as engine objects; realizations follow the basis order.
struct LieModel {
  lie::LieAlgebra algebra;
  std::vector<lie::Derivation> realizations;
};
LieModel build_lie(const Document& doc);

// Cocycle section as an evaluable description (the exp-bivector variant
// restricts its generator list to the derivations its wedges mention).
cocycle::Cocycle build_cocycle(const Document& doc);

// The wedge list of the unique exp-bivector in the cocycle section as a
// bivector over the full Lie basis; nullopt when there is none.
std::optional<lie::Bivector> document_bivector(const Document& doc);

}  // namespace twist::cli
