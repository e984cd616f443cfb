#include "twist/builtins.hpp"

#include <json.hpp>

#include "twist/document.hpp"
#include "twist/error.hpp"

namespace twist::cli {

using json = nlohmann::ordered_json;

namespace {

json options_block() {
  return {{"degree", 4}, {"box", 4}, {"format", "text"}};
}

json quantum_torus(long cyclotomic) {
  json j;
  j["schema_version"] = 1;
  if (cyclotomic == 0) {
    j["params"] = {{"names", {"t"}}, {"cyclotomic_order", 1}};
  } else {
    j["params"] = {{"names", json::array()}, {"cyclotomic_order", cyclotomic}};
  }
  j["group"] = {{"mode", "strict"},
                {"torus", {"x", "y"}},
                {"filtered", json::array()}};
  if (cyclotomic == 0) {
    j["lie"] = {
        {"basis", {"X", "Y"}},
        {"brackets", json::array()},
        {"derivations",
         {{{"name", "X"}, {"tag", "toral"}, {"on", {{"x", "x"}}}},
          {{"name", "Y"}, {"tag", "toral"}, {"on", {{"y", "y"}}}}}}};
    j["cocycle"] = {{"variant", "exp-bivector"},
                    {"sign", "1/2"},
                    {"wedges",
                     {{{"pair", {"X", "Y"}}, {"coeff", "2*t"}}}}};
  } else {
    json matrix = json::array();
    matrix.push_back(json::array({"1", "zeta"}));
    matrix.push_back(json::array({"zeta^-1", "1"}));
    j["cocycle"] = {{"variant", "bicharacter"}, {"matrix", matrix}};
  }
  j["options"] = options_block();
  return j;
}

json moyal() {
  json j;
  j["schema_version"] = 1;
  j["params"] = {{"names", json::array()}, {"cyclotomic_order", 1}};
  j["group"] = {
      {"mode", "strict"},
      {"torus", json::array()},
      {"filtered",
       {{{"name", "x"}, {"degree", 1}, {"coproduct", json::array()}},
        {{"name", "y"}, {"degree", 1}, {"coproduct", json::array()}}}}};
  j["lie"] = {
      {"basis", {"dx", "dy"}},
      {"brackets", json::array()},
      {"derivations",
       {{{"name", "dx"}, {"tag", "nilpotent"}, {"on", {{"x", "1"}}}},
        {{"name", "dy"}, {"tag", "nilpotent"}, {"on", {{"y", "1"}}}}}}};
  j["cocycle"] = {{"variant", "exp-bivector"},
                  {"sign", "1/2"},
                  {"wedges", {{{"pair", {"dx", "dy"}}, {"coeff", "1"}}}}};
  j["options"] = options_block();
  return j;
}

json heisenberg() {
  json j;
  j["schema_version"] = 1;
  j["params"] = {{"names", json::array()}, {"cyclotomic_order", 1}};
  j["group"] = {
      {"mode", "strict"},
      {"torus", json::array()},
      {"filtered",
       {{{"name", "x"}, {"degree", 1}, {"coproduct", json::array()}},
        {{"name", "y"}, {"degree", 1}, {"coproduct", json::array()}},
        {{"name", "z"},
         {"degree", 2},
         {"coproduct", json::array({json::array({"x", "y"})})}}}}};
  j["lie"] = {
      {"basis", {"dx", "dy", "dz"}},
      {"brackets", {{{"pair", {"dx", "dy"}}, {"value", {{"dz", "1"}}}}}},
      {"derivations",
       {{{"name", "dx"}, {"tag", "nilpotent"}, {"on", {{"x", "1"}}}},
        {{"name", "dy"}, {"tag", "nilpotent"}, {"on", {{"y", "1"}, {"z", "x"}}}},
        {{"name", "dz"}, {"tag", "nilpotent"}, {"on", {{"z", "1"}}}}}}};
  j["cocycle"] = {{"variant", "exp-bivector"},
                  {"sign", "1/2"},
                  {"wedges", {{{"pair", {"dz", "dy"}}, {"coeff", "1"}}}}};
  j["options"] = options_block();
  return j;
}

json mixed_nilpotent() {
  json j;
  j["schema_version"] = 1;
  j["params"] = {{"names", {"h"}}, {"cyclotomic_order", 1}};
  j["group"] = {
      {"mode", "strict"},
      {"torus", {"x", "y"}},
      {"filtered",
       {{{"name", "z"}, {"degree", 1}, {"coproduct", json::array()}}}}};
  j["lie"] = {
      {"basis", {"X", "Y", "Z"}},
      {"brackets", json::array()},
      {"derivations",
       {{{"name", "X"}, {"tag", "toral"}, {"on", {{"x", "x"}}}},
        {{"name", "Y"}, {"tag", "toral"}, {"on", {{"y", "y"}}}},
        {{"name", "Z"}, {"tag", "nilpotent"}, {"on", {{"z", "1"}}}}}}};
  j["cocycle"] = {{"variant", "exp-bivector"},
                  {"sign", "1/2"},
                  {"wedges",
                   {{{"pair", {"X", "Y"}}, {"coeff", "h"}},
                    {{"pair", {"X", "Z"}}, {"coeff", "1"}}}}};
  j["options"] = options_block();
  return j;
}

json borel() {
  json j;
  j["schema_version"] = 1;
  j["params"] = {{"names", {"h"}}, {"cyclotomic_order", 1}};
  j["group"] = {
      {"mode", "extended"},
      {"torus", {"x"}},
      {"filtered",
       {{{"name", "y"},
         {"degree", 1},
         {"coproduct", json::array({json::array({"y", "x - 1"})})}}}}};
  j["lie"] = {
      {"basis", {"X", "Y"}},
      {"brackets", {{{"pair", {"X", "Y"}}, {"value", {{"Y", "1"}}}}}},
      {"derivations",
       {{{"name", "X"}, {"tag", "toral"}, {"on", {{"x", "x"}}}},
        {{"name", "Y"}, {"tag", "nilpotent"}, {"on", {{"y", "x"}}}}}}};
  j["cocycle"] = {{"variant", "borel-series"}, {"parameter", "h"}};
  j["options"] = options_block();
  return j;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"quantum-torus", "moyal", "heisenberg", "mixed-nilpotent", "borel"};
}

std::string builtin_document(const std::string& name, long cyclotomic) {
  if (cyclotomic != 0 && name != "quantum-torus")
    fail(Err::SchemaError, "only quantum-torus has a cyclotomic variant");
  if (cyclotomic == 1 || cyclotomic < 0)
    fail(Err::SchemaError, "cyclotomic order must be at least 2");
  json j;
  if (name == "quantum-torus")
    j = quantum_torus(cyclotomic);
  else if (name == "moyal")
    j = moyal();
  else if (name == "heisenberg")
    j = heisenberg();
  else if (name == "mixed-nilpotent")
    j = mixed_nilpotent();
  else if (name == "borel")
    j = borel();
  else {
    std::string known;
    for (const std::string& n : builtin_names()) known += " " + n;
    fail(Err::UnknownName, "no built-in example '" + name + "' (known:" + known + ")");
  }
  // normalize through the document layer so the emitted bytes are canonical
  return serialize_document(parse_document(j.dump()));
}

}  // namespace twist::cli
