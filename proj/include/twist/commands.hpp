#pragma once

// Command implementations behind the CLI: each one takes a parsed Document
// plus resolved options and produces a Report carrying both renderings of
// the same result.  The machine rendering is canonical JSON with a
// schema_version field (stable key order, lossless round trip); the text
// rendering is a short human-readable summary.  status is 0 for a
// successful run, 1 when a check found violations; input errors are thrown
// as twist::Error and mapped to exit code 2 by the tool.

#include <string>

#include "twist/document.hpp"

namespace twist::cli {

struct Report {
  std::string text;
  std::string machine;
  int status = 0;
};

// format is "text" or "machine"
std::string emit_report(const Report& r, const std::string& format);

Report cmd_validate(const Document& doc);
Report cmd_present(const Document& doc);
Report cmd_multiply(const Document& doc, const std::string& left,
                    const std::string& right);
Report cmd_normal_form(const Document& doc, const std::string& word);
Report cmd_center(const Document& doc, long degree, long box);
Report cmd_support(const Document& doc);
Report cmd_simple(const Document& doc, long degree, long box);
Report cmd_structure(const Document& doc, long degree, long box);
// kind is one of hopf, cybe, cocycle, invariance
Report cmd_check(const Document& doc, const std::string& kind, long degree,
                 long box);

}  // namespace twist::cli
