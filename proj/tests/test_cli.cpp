#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "twist/builtins.hpp"
#include "twist/commands.hpp"
#include "twist/document.hpp"
#include "twist/error.hpp"
#include "twist/exprparse.hpp"

using json = nlohmann::ordered_json;
using namespace twist;
using namespace twist::cli;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

// Run the installed binary through the shell; stdout captured, stderr dropped.
RunResult run_twist(const std::string& args) {
  std::string cmd = std::string(TWIST_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int rc = pclose(p);
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

std::string write_temp(const std::string& text) {
  static int counter = 0;
  auto path = std::filesystem::temp_directory_path() /
              ("twist_cli_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter++) + ".json");
  std::ofstream f(path);
  f << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Byte-for-byte comparison against a frozen reference output.  Set
// TWIST_REGEN=1 to rewrite the reference files from the current binary.
void golden_case(const std::string& name, const std::string& args,
                 int want_status = 0) {
  INFO("case ", name, ": twist ", args);
  RunResult r = run_twist(args);
  CHECK(r.status == want_status);
  std::string path = std::string(TWIST_GOLDEN_DIR) + "/" + name;
  if (std::getenv("TWIST_REGEN")) {
    std::ofstream f(path, std::ios::binary);
    f << r.out;
    return;
  }
  REQUIRE_MESSAGE(std::filesystem::exists(path), "missing reference ", path);
  CHECK_MESSAGE(read_file(path) == r.out, "reference mismatch for ", name);
}

std::string corrupted_heisenberg() {
  json j = json::parse(builtin_document("heisenberg"));
  j["group"]["filtered"][2]["coproduct"] = json::array(
      {json::array({"x", "1"})});
  return j.dump();
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression grammar.

TEST_CASE("element grammar accepts the documented forms") {
  Document doc = parse_document(builtin_document("quantum-torus"));
  const hopf::GroupData& g = doc.group;

  CHECK(g.element_str(parse_element("x*y", g)) == "x*y");
  CHECK(g.element_str(parse_element("x^-2", g)) == "x^-2");
  CHECK(g.element_str(parse_element("3*x + 2", g)) == "3*x + 2");
  CHECK(g.element_str(parse_element("(1/2)*x", g)) == "(1/2)*x");
  CHECK(g.element_str(parse_element("exp(2*t)*x", g)) == "exp(2*t)*x");
  CHECK(g.element_str(parse_element("exp(t)^2", g)) == "exp(2*t)");
  CHECK(g.element_str(parse_element("exp(t)^(1/2)", g)) == "(exp(1/2*t))");
  CHECK(g.element_str(parse_element("x - x", g)) == "0");
}

TEST_CASE("ambiguous fractional exponent is rejected with guidance") {
  Document doc = parse_document(builtin_document("quantum-torus"));
  try {
    parse_element("exp(t)^1/2", doc.group);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::SyntaxError);
    CHECK(std::string(e.what()).find("parentheses") != std::string::npos);
  }
}

TEST_CASE("grammar rejections carry the right error kinds") {
  Document doc = parse_document(builtin_document("quantum-torus"));
  const hopf::GroupData& g = doc.group;

  CHECK_THROWS_AS(parse_element("w", g), Error);           // undeclared
  CHECK_THROWS_AS(parse_element("x y", g), Error);         // implicit product
  CHECK_THROWS_AS(parse_element("x/2", g), Error);         // '/' outside literal
  CHECK_THROWS_AS(parse_element("zeta", g), Error);        // no root of unity
  CHECK_THROWS_AS(parse_element("x^(1/2)", g), Error);     // non-unit base
  CHECK_THROWS_AS(parse_element("(x+1)^-1", g), Error);    // non-monomial inverse

  try {
    parse_element("w", g);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::UnknownName);
  }
}

TEST_CASE("zeta is available exactly when a cyclotomic order is declared") {
  Document doc = parse_document(builtin_document("quantum-torus", 3));
  const hopf::GroupData& g = doc.group;
  scalars::Scalar z = parse_scalar("zeta", g.params);
  CHECK(z.pow(3) == scalars::Scalar(1));
  CHECK(z != scalars::Scalar(1));
  // zeta^-1 = zeta^2 = -1 - zeta in the reduced cyclotomic basis
  CHECK(g.element_str(parse_element("zeta^-1*x", g)) == "(-1 - zeta)*x");
  CHECK(parse_scalar("zeta^-1", g.params) * z == scalars::Scalar(1));
}

TEST_CASE("word grammar: separators, powers, and filtered variables") {
  Document doc = parse_document(builtin_document("heisenberg"));
  const hopf::GroupData& g = doc.group;

  twistalg::Word w = parse_word("z y^2 x", g);
  CHECK(w.size() == 3);  // one letter per name^power group
  CHECK(parse_word("z * y", g).size() == 2);
  CHECK(parse_word("x^0 y", g).size() == 1);  // trivial letters drop out

  try {
    parse_word("y^-1", g);
    FAIL("filtered variables are not invertible");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::SchemaError);
  }
}

// ---------------------------------------------------------------------------
// Document schema.

TEST_CASE("builtin documents are serialization fixed points") {
  for (const std::string& name : builtin_names()) {
    INFO("builtin ", name);
    std::string s = builtin_document(name);
    Document d = parse_document(s);
    CHECK(serialize_document(d) == s);
    CHECK(serialize_document(parse_document(serialize_document(d))) == s);
  }
  std::string s3 = builtin_document("quantum-torus", 3);
  CHECK(serialize_document(parse_document(s3)) == s3);
}

TEST_CASE("schema violations are rejected with located errors") {
  auto reject = [](const std::string& text, Err kind, const char* fragment) {
    try {
      parse_document(text);
      FAIL_CHECK("expected rejection: ", fragment);
    } catch (const Error& e) {
      CHECK(e.kind() == kind);
      CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos,
                    e.what());
    }
  };

  reject("{", Err::SyntaxError, "line 1");
  reject(R"({"schema_version": 2})", Err::SchemaError, "schema_version");

  json j = json::parse(builtin_document("moyal"));
  j["bogus"] = 1;
  reject(j.dump(), Err::SchemaError, "bogus");

  j = json::parse(builtin_document("moyal"));
  j["group"]["filtered"][0]["extra"] = true;
  reject(j.dump(), Err::SchemaError, "group.filtered[0]");

  // a coproduct term that names an undeclared variable
  j = json::parse(builtin_document("heisenberg"));
  j["group"]["filtered"][2]["coproduct"][0][1] = "w";
  reject(j.dump(), Err::UnknownName, "w");

  // duplicate generator names
  j = json::parse(builtin_document("quantum-torus"));
  j["group"]["torus"] = {"x", "x"};
  reject(j.dump(), Err::SchemaError, "x");

  // reserved function names cannot be generators
  j = json::parse(builtin_document("quantum-torus"));
  j["group"]["torus"] = {"x", "exp"};
  reject(j.dump(), Err::SchemaError, "exp");

  // a bicharacter entry that is not an invertible unit
  j = json::parse(builtin_document("quantum-torus", 3));
  j["cocycle"]["matrix"][0][1] = "1 + zeta";
  reject(j.dump(), Err::SchemaError, "unit");
}

TEST_CASE("document bivector is exposed exactly for exp-bivector cocycles") {
  CHECK(document_bivector(parse_document(builtin_document("heisenberg")))
            .has_value());
  CHECK(document_bivector(parse_document(builtin_document("moyal")))
            .has_value());
  CHECK_FALSE(
      document_bivector(parse_document(builtin_document("quantum-torus", 3)))
          .has_value());
  CHECK_FALSE(
      document_bivector(parse_document(builtin_document("borel"))).has_value());
}

// ---------------------------------------------------------------------------
// Command layer (direct calls).

TEST_CASE("validate passes every builtin and fails a corrupted coproduct") {
  for (const std::string& name : builtin_names()) {
    INFO("builtin ", name);
    Report r = cmd_validate(parse_document(builtin_document(name)));
    CHECK(r.status == 0);
    json j = json::parse(r.machine);
    CHECK(j["ok"] == true);
    CHECK(j["schema_version"] == 1);
    CHECK(j["group_axioms"]["ok"] == true);
  }

  Report bad = cmd_validate(parse_document(corrupted_heisenberg()));
  CHECK(bad.status == 1);
  json j = json::parse(bad.machine);
  CHECK(j["ok"] == false);
  CHECK(j["group_axioms"]["failures"].size() == 1);
}

TEST_CASE("center command reports the verified basis") {
  Report r = cmd_center(parse_document(builtin_document("heisenberg")), 4, 4);
  CHECK(r.status == 0);
  json j = json::parse(r.machine);
  CHECK(j["count"] == 5);
  CHECK(j["verified"] == true);
  CHECK(j["basis"] == json::array({"1", "x", "x^2", "x^3", "x^4"}));
  CHECK(j["box_too_small"] == false);
}

TEST_CASE("support command covers the no-torus and no-bivector corners") {
  json moyal = json::parse(
      cmd_support(parse_document(builtin_document("moyal"))).machine);
  CHECK(moyal["torus"]["rank"] == 0);
  CHECK(moyal["torus"]["gamma_rank"] == 0);
  CHECK(moyal["bivector"]["support_dim"] == 2);
  CHECK(moyal["bivector"]["nondegenerate"] == true);

  json qt3 = json::parse(
      cmd_support(parse_document(builtin_document("quantum-torus", 3)))
          .machine);
  CHECK(qt3["torus"]["factors"] == json::array({3, 3}));
  CHECK(qt3["bivector"].is_null());
}

TEST_CASE("check command rejects unknown kinds") {
  Document doc = parse_document(builtin_document("moyal"));
  CHECK_THROWS_AS(cmd_check(doc, "frobenius", 3, 1), Error);
}

TEST_CASE("report formats") {
  Report r = cmd_check(parse_document(builtin_document("moyal")), "hopf", 3, 1);
  CHECK(emit_report(r, "machine") == r.machine);
  CHECK(emit_report(r, "text") == r.text);
  CHECK_THROWS_AS(emit_report(r, "yaml"), Error);
  CHECK(r.machine.back() == '\n');
  CHECK(json::parse(r.machine)["command"] == "check");
}

// ---------------------------------------------------------------------------
// Process-level behavior.

TEST_CASE("exit codes: success, verification failure, input error") {
  CHECK(run_twist("check hopf -e moyal").status == 0);

  std::string bad = write_temp(corrupted_heisenberg());
  CHECK(run_twist("check hopf -i " + bad).status == 1);
  CHECK(run_twist("validate -i " + bad).status == 1);

  CHECK(run_twist("multiply -e quantum-torus 'exp(t)^1/2' x").status == 2);
  CHECK(run_twist("validate -e no-such-example").status == 2);
  CHECK(run_twist("validate -i /no/such/file.json").status == 2);
  CHECK(run_twist("check frobenius -e moyal").status == 2);
  CHECK(run_twist("frobnicate").status == 2);

  std::string garbage = write_temp("{\"schema_version\":");
  CHECK(run_twist("validate -i " + garbage).status == 2);
}

TEST_CASE("documents load identically from file and stdin") {
  std::string path = write_temp(builtin_document("mixed-nilpotent"));
  RunResult from_file = run_twist("present -i " + path + " -f machine");
  RunResult from_example = run_twist("present -e mixed-nilpotent -f machine");
  CHECK(from_file.status == 0);
  CHECK(from_file.out == from_example.out);

  std::string cmd = "cat " + path + " | " + std::string(TWIST_BIN) +
                    " present -f machine 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  CHECK(out == from_example.out);
}

TEST_CASE("example subcommand prints the canonical document") {
  RunResult r = run_twist("example borel");
  CHECK(r.status == 0);
  CHECK(r.out == builtin_document("borel"));
  RunResult r3 = run_twist("example quantum-torus --cyclotomic 3");
  CHECK(r3.out == builtin_document("quantum-torus", 3));
  CHECK(run_twist("example quantum-torus --cyclotomic 1").status == 2);
}

// ---------------------------------------------------------------------------
// Frozen machine reports: every subcommand over every builtin document.

TEST_CASE("machine reports are byte-stable across the builtin corpus") {
  struct Extra {
    std::string mul_args;
    std::string nf_word;
    bool has_lie;
    bool has_bivector;
  };
  const std::vector<std::pair<std::string, Extra>> table = {
      {"quantum-torus", {"x y", "y x^2", true, true}},
      {"moyal", {"x y", "y x", true, true}},
      {"heisenberg", {"z y", "z y", true, true}},
      {"mixed-nilpotent", {"x z", "z x", true, true}},
      {"borel", {"x y", "y x", true, false}},
  };

  for (const auto& [name, extra] : table) {
    std::string src = " -e " + name + " -f machine";
    golden_case(name + "_validate.json", "validate" + src);
    golden_case(name + "_present.json", "present" + src);
    golden_case(name + "_support.json", "support" + src);
    golden_case(name + "_simple.json", "simple" + src);
    golden_case(name + "_structure.json", "structure" + src);
    golden_case(name + "_center.json", "center" + src);
    golden_case(name + "_multiply.json",
                "multiply " + extra.mul_args + src);
    golden_case(name + "_normal-form.json",
                "normal-form '" + extra.nf_word + "'" + src);
    golden_case(name + "_check-hopf.json", "check hopf" + src);
    golden_case(name + "_check-cocycle.json",
                "check cocycle -d 3 -b 1" + src);
    if (extra.has_lie)
      golden_case(name + "_check-invariance.json", "check invariance" + src);
    if (extra.has_bivector)
      golden_case(name + "_check-cybe.json", "check cybe" + src);
    golden_case(name + "_document.json", "example " + name);
  }

  // cyclotomic specialization of the quantum torus
  std::string src3 = " -e quantum-torus --cyclotomic 3 -f machine";
  golden_case("quantum-torus-3_validate.json", "validate" + src3);
  golden_case("quantum-torus-3_present.json", "present" + src3);
  golden_case("quantum-torus-3_support.json", "support" + src3);
  golden_case("quantum-torus-3_simple.json", "simple" + src3);
  golden_case("quantum-torus-3_structure.json", "structure" + src3);
  golden_case("quantum-torus-3_center.json", "center -d 3 -b 3" + src3);
  golden_case("quantum-torus-3_multiply.json", "multiply x y" + src3);
  golden_case("quantum-torus-3_normal-form.json", "normal-form 'y x^2'" + src3);
  golden_case("quantum-torus-3_check-hopf.json", "check hopf" + src3);
  golden_case("quantum-torus-3_check-cocycle.json",
              "check cocycle -d 3 -b 1" + src3);
  golden_case("quantum-torus-3_document.json",
              "example quantum-torus --cyclotomic 3");

  // deeper cocycle sweep on the series-defined document
  golden_case("borel_check-cocycle-deep.json",
              "check cocycle -d 4 -b 2 -e borel -f machine");
}
