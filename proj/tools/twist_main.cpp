// Command-line front end.  Reads a document from --input (or stdin, or one
// of the built-in examples via --example), runs one subcommand against it,
// and prints a text or machine (JSON) report.  Exit status: 0 when the
// requested check or computation succeeds, 1 when a verification fails,
// 2 on malformed input or usage errors.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "twist/builtins.hpp"
#include "twist/commands.hpp"
#include "twist/document.hpp"
#include "twist/error.hpp"

namespace {

using twist::cli::Document;
using twist::cli::Report;

struct Common {
  std::string input;
  std::string example;
  long cyclotomic = 0;
  std::string format;  // empty: take the document's own option
  long degree = -1;    // -1: take the document's own option
  long box = -1;
};

void add_source_opts(CLI::App* sub, Common& c) {
  auto* in = sub->add_option("-i,--input", c.input,
                             "document file to read ('-' for stdin)");
  auto* ex = sub->add_option("-e,--example", c.example,
                             "use a built-in document instead of a file");
  ex->excludes(in);
  sub->add_option("--cyclotomic", c.cyclotomic,
                  "root-of-unity order for the quantum-torus example")
      ->needs(ex);
  sub->add_option("-f,--format", c.format, "report format")
      ->check(CLI::IsMember({"text", "machine"}));
}

void add_bound_opts(CLI::App* sub, Common& c) {
  sub->add_option("-d,--degree", c.degree, "filtered degree bound");
  sub->add_option("-b,--box", c.box, "torus exponent box radius");
}

std::string read_source(const Common& c) {
  if (!c.example.empty())
    return twist::cli::builtin_document(c.example, c.cyclotomic);
  if (c.input.empty() || c.input == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(c.input);
  if (!f) twist::fail(twist::Err::SchemaError, "cannot read '" + c.input + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_report(const Common& c,
               const std::function<Report(const Document&, long, long)>& fn) {
  Document doc = twist::cli::parse_document(read_source(c));
  long degree = c.degree >= 0 ? c.degree : doc.options.degree;
  long box = c.box >= 0 ? c.box : doc.options.box;
  Report r = fn(doc, degree, box);
  std::string format = !c.format.empty() ? c.format : doc.options.format;
  std::cout << twist::cli::emit_report(r, format);
  return r.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact symbolic engine for 2-cocycle twists of coordinate rings"};
  app.require_subcommand(1);

  Common c;
  std::string left, right, word, check_kind, example_name;

  CLI::App* validate = app.add_subcommand(
      "validate", "check group axioms, cocycle admission, and the lie section");
  add_source_opts(validate, c);

  CLI::App* present = app.add_subcommand(
      "present", "derive the twisted commutation relations");
  add_source_opts(present, c);

  CLI::App* multiply =
      app.add_subcommand("multiply", "twisted product of two elements");
  add_source_opts(multiply, c);
  multiply->add_option("left", left, "first factor")->required();
  multiply->add_option("right", right, "second factor")->required();

  CLI::App* nform =
      app.add_subcommand("normal-form", "rewrite a word into normal order");
  add_source_opts(nform, c);
  nform->add_option("word", word, "generator word, e.g. \"y x^2 z\"")
      ->required();

  CLI::App* center = app.add_subcommand(
      "center", "solve for the degree-bounded center and re-verify it");
  add_source_opts(center, c);
  add_bound_opts(center, c);

  CLI::App* support = app.add_subcommand(
      "support", "degeneracy lattice and bivector span of the twist");
  add_source_opts(support, c);

  CLI::App* simple =
      app.add_subcommand("simple", "simplicity verdict with evidence");
  add_source_opts(simple, c);
  add_bound_opts(simple, c);

  CLI::App* structure = app.add_subcommand(
      "structure", "match the twisted algebra against standard models");
  add_source_opts(structure, c);
  add_bound_opts(structure, c);

  CLI::App* check = app.add_subcommand(
      "check", "run one verification: hopf, cocycle, cybe, or invariance");
  add_source_opts(check, c);
  add_bound_opts(check, c);
  check->add_option("kind", check_kind, "which identity to verify")
      ->required()
      ->check(CLI::IsMember({"hopf", "cocycle", "cybe", "invariance"}));

  CLI::App* example =
      app.add_subcommand("example", "print a built-in document");
  example->add_option("name", example_name, "one of: quantum-torus, moyal, "
                                            "heisenberg, mixed-nilpotent, borel")
      ->required();
  example->add_option("--cyclotomic", c.cyclotomic,
                      "root-of-unity order for the quantum-torus example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    using twist::cli::cmd_check;
    if (validate->parsed())
      return run_report(c, [](const Document& d, long, long) {
        return twist::cli::cmd_validate(d);
      });
    if (present->parsed())
      return run_report(c, [](const Document& d, long, long) {
        return twist::cli::cmd_present(d);
      });
    if (multiply->parsed())
      return run_report(c, [&](const Document& d, long, long) {
        return twist::cli::cmd_multiply(d, left, right);
      });
    if (nform->parsed())
      return run_report(c, [&](const Document& d, long, long) {
        return twist::cli::cmd_normal_form(d, word);
      });
    if (center->parsed())
      return run_report(c, [](const Document& d, long deg, long box) {
        return twist::cli::cmd_center(d, deg, box);
      });
    if (support->parsed())
      return run_report(c, [](const Document& d, long, long) {
        return twist::cli::cmd_support(d);
      });
    if (simple->parsed())
      return run_report(c, [](const Document& d, long deg, long box) {
        return twist::cli::cmd_simple(d, deg, box);
      });
    if (structure->parsed())
      return run_report(c, [](const Document& d, long deg, long box) {
        return twist::cli::cmd_structure(d, deg, box);
      });
    if (check->parsed())
      return run_report(c, [&](const Document& d, long deg, long box) {
        return cmd_check(d, check_kind, deg, box);
      });
    if (example->parsed()) {
      std::cout << twist::cli::builtin_document(example_name, c.cyclotomic);
      return 0;
    }
  } catch (const twist::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
