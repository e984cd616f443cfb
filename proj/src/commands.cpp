#include "twist/commands.hpp"

#include <json.hpp>

#include "twist/analysis.hpp"
#include "twist/error.hpp"
#include "twist/exprparse.hpp"

namespace twist::cli {

using json = nlohmann::ordered_json;
using cocycle::CocycleContext;
using hopf::Element;
using hopf::GroupData;
using scalars::Scalar;
using twistalg::Presentation;

namespace {

json head(const char* command) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command;
  return j;
}

Report make(const json& j, std::string text, int status) {
  return Report{std::move(text), j.dump(2) + "\n", status};
}

json json_int(const analysis::Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

json int_matrix(const analysis::IntMatrix& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& v : row) r.push_back(json_int(v));
    rows.push_back(r);
  }
  return rows;
}

std::string plural(long n, const char* noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

std::string bracketed(long box) {
  return "[" + std::to_string(-box) + ", " + std::to_string(box) + "]";
}

// Delta(d f) = (d (x) id)(Delta f) on every generator; the mirror of the
// left-invariance check.
bool right_invariant(const GroupData& g, const lie::Derivation& d) {
  hopf::EvalContext hctx(g);
  auto holds = [&](const Element& gen, const Element& val) {
    hopf::Tensor lhs = hctx.coproduct(val);
    hopf::Tensor rhs = lie::apply_derivation_leg(g, d, hctx.coproduct(gen), 0);
    return lhs == rhs;
  };
  for (int i = 0; i < g.k(); ++i)
    if (!holds(Element::monomial(g.xgen(i)), d.on_x[i])) return false;
  for (int j = 0; j < g.m(); ++j)
    if (!holds(Element::monomial(g.zgen(j)), d.on_z[j])) return false;
  return true;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < s.size()) {
    size_t nl = s.find('\n', start);
    if (nl == std::string::npos) nl = s.size();
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

CocycleContext context_of(const Document& doc) {
  return CocycleContext(doc.group, build_cocycle(doc));
}

}  // namespace

std::string emit_report(const Report& r, const std::string& format) {
  if (format == "machine") return r.machine;
  if (format == "text") return r.text;
  fail(Err::SchemaError, "unknown report format '" + format + "'");
}

// ---------------------------------------------------------------------------

Report cmd_validate(const Document& doc) {
  json j = head("validate");
  std::string text;
  bool ok = true;

  hopf::ValidationReport hv = hopf::validate_hopf(doc.group);
  json failures = json::array();
  for (const auto& f : hv.failures)
    failures.push_back({{"axiom", f.axiom}, {"witness", f.witness}});
  j["group_axioms"] = {{"ok", hv.ok()}, {"failures", failures}};
  if (hv.ok()) {
    text += "group axioms: ok\n";
  } else {
    ok = false;
    text += "group axioms: " + plural((long)hv.failures.size(), "failure") + "\n";
    for (const auto& f : hv.failures)
      text += "  " + f.axiom + ": " + f.witness + "\n";
  }

  json cj;
  cj["present"] = doc.cocycle.has_value();
  cj["variant"] = doc.cocycle ? json(doc.cocycle->variant) : json(nullptr);
  std::string label = doc.cocycle ? doc.cocycle->variant : "trivial";
  if (hv.ok()) {
    try {
      context_of(doc);
      cj["admitted"] = true;
      cj["error"] = nullptr;
      text += "cocycle (" + label + "): admitted\n";
    } catch (const Error& e) {
      ok = false;
      cj["admitted"] = false;
      cj["error"] = std::string(e.what());
      text += "cocycle (" + label + "): rejected - " + e.what() + "\n";
    }
  } else {
    cj["admitted"] = false;
    cj["error"] = "skipped: group axioms failed";
    text += "cocycle (" + label + "): skipped (group axioms failed)\n";
  }
  j["cocycle"] = cj;

  json lj;
  lj["present"] = doc.lie.has_value();
  if (doc.lie) {
    LieModel model = build_lie(doc);
    bool jac = lie::check_jacobi(model.algebra);
    bool real =
        lie::check_realization(doc.group, model.algebra, model.realizations);
    json tags = json::array();
    bool tags_ok = true;
    for (const lie::Derivation& d : model.realizations) {
      bool t = lie::check_derivation_tag(doc.group, d);
      tags_ok = tags_ok && t;
      tags.push_back({{"name", d.name}, {"ok", t}});
    }
    lj["jacobi"] = jac;
    lj["realization"] = real;
    lj["tags"] = tags;
    bool lie_ok = jac && real && tags_ok;
    ok = ok && lie_ok;
    text += std::string("lie section: ") + (lie_ok ? "ok" : "FAILED") + "\n";
    if (!jac) text += "  jacobi identity fails\n";
    if (!real) text += "  derivations do not realize the declared brackets\n";
    for (const auto& t : tags)
      if (!t["ok"].get<bool>())
        text += "  tag check fails for " + t["name"].get<std::string>() + "\n";
  } else {
    text += "lie section: none\n";
  }
  j["lie"] = lj;

  j["ok"] = ok;
  text = std::string("document: ") + (ok ? "ok" : "FAILED") + "\n" + text;
  return make(j, text, ok ? 0 : 1);
}

// ---------------------------------------------------------------------------

Report cmd_present(const Document& doc) {
  CocycleContext ctx = context_of(doc);
  Presentation P = twistalg::derive_presentation(ctx);
  const GroupData& g = P.g;

  json j = head("present");
  j["torus"] = g.xnames;
  j["filtered"] = g.znames;
  j["relations"] = split_lines(P.relations_str());
  json lam = json::array();
  for (int i = 0; i < g.k(); ++i) {
    json row = json::array();
    for (int l = 0; l < g.k(); ++l) row.push_back(P.lambda[i][l].str(g.params));
    lam.push_back(row);
  }
  j["lambda"] = lam;
  json pj = json::array();
  for (int i = 0; i < g.k(); ++i) {
    json row = json::array();
    for (int l = 0; l < g.m(); ++l) row.push_back(g.element_str(P.p[i][l]));
    pj.push_back(row);
  }
  j["p"] = pj;
  json cj = json::array();
  for (int i = 0; i < g.m(); ++i) {
    json row = json::array();
    for (int l = 0; l < g.m(); ++l) row.push_back(g.element_str(P.C[i][l]));
    cj.push_back(row);
  }
  j["C"] = cj;

  std::string text = "commutation relations:\n";
  for (const std::string& line : split_lines(P.relations_str()))
    text += "  " + line + "\n";
  return make(j, text, 0);
}

// ---------------------------------------------------------------------------

Report cmd_multiply(const Document& doc, const std::string& left,
                    const std::string& right) {
  CocycleContext ctx = context_of(doc);
  Element a = parse_element(left, doc.group);
  Element b = parse_element(right, doc.group);
  Element prod = twistalg::twisted_product(ctx, a, b);
  twistalg::TwistedElement nf = twistalg::to_normal(ctx, prod);

  json j = head("multiply");
  j["left"] = left;
  j["right"] = right;
  j["product"] = doc.group.element_str(prod);
  j["normal_form"] = doc.group.element_str(nf.rep);
  std::string text = "product: " + doc.group.element_str(prod) + "\n" +
                     "normal form: " + doc.group.element_str(nf.rep) + "\n";
  return make(j, text, 0);
}

Report cmd_normal_form(const Document& doc, const std::string& word) {
  CocycleContext ctx = context_of(doc);
  Presentation P = twistalg::derive_presentation(ctx);
  twistalg::Word w = parse_word(word, doc.group);
  twistalg::TwistedElement nf = twistalg::normal_form(w, P);

  json j = head("normal-form");
  j["word"] = word;
  j["normal_form"] = doc.group.element_str(nf.rep);
  return make(j, "normal form: " + doc.group.element_str(nf.rep) + "\n", 0);
}

// ---------------------------------------------------------------------------

Report cmd_center(const Document& doc, long degree, long box) {
  CocycleContext ctx = context_of(doc);
  Presentation P = twistalg::derive_presentation(ctx);
  analysis::CenterBasis cb = analysis::center_upto(P, degree, box);
  if (!analysis::center_verified(ctx, cb))
    fail(Err::Internal, "center basis failed independent re-verification");

  json j = head("center");
  j["degree"] = degree;
  j["box"] = box;
  j["count"] = static_cast<long>(cb.elements.size());
  json basis = json::array();
  for (const auto& e : cb.elements) basis.push_back(doc.group.element_str(e.rep));
  j["basis"] = basis;
  j["box_too_small"] = cb.box_too_small;
  j["verified"] = true;

  std::string text;
  bool constants_only =
      cb.elements.size() == 1 && doc.group.element_str(cb.elements[0].rep) == "1";
  if (constants_only) {
    text = "center (degree <= " + std::to_string(degree) + "): constants only\n";
  } else {
    text = "center (degree <= " + std::to_string(degree) + "): " +
           plural((long)cb.elements.size(), "element") + "\n";
    for (const auto& e : cb.elements)
      text += "  " + doc.group.element_str(e.rep) + "\n";
  }
  if (cb.box_too_small)
    text += "warning: exponent box " + bracketed(box) + " may clip the center\n";
  return make(j, text, 0);
}

// ---------------------------------------------------------------------------

Report cmd_support(const Document& doc) {
  json j = head("support");
  std::string text;

  analysis::SupportReport torus;
  torus.torus_rank = doc.group.k();
  if (doc.group.k() > 0) {
    CocycleContext ctx = context_of(doc);
    Presentation P = twistalg::derive_presentation(ctx);
    torus = analysis::torus_support(P.lambda);
  }
  json factors = json::array();
  for (const auto& f : torus.factors) factors.push_back(json_int(f));
  j["torus"] = {{"rank", torus.torus_rank},
                {"gamma", int_matrix(torus.gamma)},
                {"gamma_rank", torus.gamma_rank},
                {"factors", factors},
                {"support_rank", torus.torus_support_rank}};
  text += "torus block: rank " + std::to_string(torus.torus_rank) +
          ", degeneracy rank " + std::to_string(torus.gamma_rank) +
          ", support rank " + std::to_string(torus.torus_support_rank) + "\n";
  std::string fstr;
  for (const auto& f : torus.factors) fstr += " " + f.get_str();
  text += "invariant factors:" + (fstr.empty() ? " none" : fstr) + "\n";

  std::optional<lie::Bivector> r = document_bivector(doc);
  if (r) {
    analysis::SupportReport uni = analysis::unipotent_support(*r);
    j["bivector"] = {{"ambient_dim", uni.dim_u},
                     {"support_dim", uni.dim_v},
                     {"nondegenerate", uni.nondegenerate}};
    text += "bivector block: support dimension " + std::to_string(uni.dim_v) +
            " of " + std::to_string(uni.dim_u) +
            (uni.nondegenerate ? ", nondegenerate on its span"
                               : ", degenerate on its span") +
            "\n";
  } else {
    j["bivector"] = nullptr;
    text += "bivector block: none\n";
  }
  return make(j, text, 0);
}

// ---------------------------------------------------------------------------

namespace {

json notes_json(const std::vector<std::string>& notes) {
  json out = json::array();
  for (const std::string& n : notes) out.push_back(n);
  return out;
}

std::string notes_text(const std::vector<std::string>& notes) {
  if (notes.empty()) return "";
  std::string t = "notes:\n";
  for (const std::string& n : notes) t += "  " + n + "\n";
  return t;
}

}  // namespace

Report cmd_simple(const Document& doc, long degree, long box) {
  CocycleContext ctx = context_of(doc);
  Presentation P = twistalg::derive_presentation(ctx);
  analysis::StructureReport rep =
      analysis::simplicity_verdict(ctx, P, degree, box);

  json j = head("simple");
  j["verdict"] = analysis::simplicity_name(rep.simple);
  j["gamma_rank"] = rep.gamma_rank;
  j["dimV"] = rep.covered_rank;
  j["center_box"] = {{"degree", degree}, {"box", box}, {"count", rep.center_count}};
  j["notes"] = notes_json(rep.notes);

  std::string text = std::string("verdict: ") +
                     analysis::simplicity_name(rep.simple) + "\n" +
                     "torus degeneracy rank: " + std::to_string(rep.gamma_rank) +
                     "\n" +
                     "covered filtered dimension: " +
                     std::to_string(rep.covered_rank) + " of " +
                     std::to_string(doc.group.m()) + "\n";
  if (rep.center_count >= 0)
    text += "center corroboration (degree <= " + std::to_string(degree) +
            ", box " + bracketed(box) + "): " +
            plural(rep.center_count, "element") + "\n";
  text += notes_text(rep.notes);
  return make(j, text, 0);
}

Report cmd_structure(const Document& doc, long degree, long box) {
  CocycleContext ctx = context_of(doc);
  Presentation P = twistalg::derive_presentation(ctx);
  analysis::StructureReport rep = analysis::structure_report(ctx, P, degree, box);

  json j = head("structure");
  j["kind"] = analysis::structure_name(rep.kind);
  j["description"] = rep.description;
  j["verdict"] = analysis::simplicity_name(rep.simple);
  j["weyl_pairs"] = rep.weyl_pairs;
  j["poly_coords"] = rep.poly_coords;
  j["gamma_rank"] = rep.gamma_rank;
  j["center_count"] = rep.center_count;
  j["notes"] = notes_json(rep.notes);

  std::string text = std::string("structure: ") +
                     analysis::structure_name(rep.kind) + "\n";
  if (!rep.description.empty()) text += "description: " + rep.description + "\n";
  text += std::string("simplicity: ") + analysis::simplicity_name(rep.simple) +
          "\n" + notes_text(rep.notes);
  return make(j, text, 0);
}

// ---------------------------------------------------------------------------

namespace {

Report check_hopf(const Document& doc) {
  hopf::ValidationReport hv = hopf::validate_hopf(doc.group);
  json j = head("check");
  j["kind"] = "hopf";
  j["ok"] = hv.ok();
  json failures = json::array();
  for (const auto& f : hv.failures)
    failures.push_back({{"axiom", f.axiom}, {"witness", f.witness}});
  j["failures"] = failures;

  std::string text;
  if (hv.ok()) {
    text = "group axiom check: ok\n";
  } else {
    text = "group axiom check: " + plural((long)hv.failures.size(), "failure") + "\n";
    for (const auto& f : hv.failures)
      text += "  " + f.axiom + ": " + f.witness + "\n";
  }
  return make(j, text, hv.ok() ? 0 : 1);
}

Report check_cocycle_axiom(const Document& doc, long degree, long box) {
  cocycle::CheckOptions opts;
  opts.degree = static_cast<int>(degree);
  opts.box_lo = -box;
  opts.box_hi = box;
  cocycle::AxiomReport rep =
      cocycle::cocycle_axiom_check(doc.group, build_cocycle(doc), opts);

  json j = head("check");
  j["kind"] = "cocycle";
  j["degree"] = degree;
  j["box"] = box;
  j["triples_checked"] = rep.triples_checked;
  j["ok"] = rep.ok();
  json viols = json::array();
  for (const auto& v : rep.violations) {
    json mons = json::array();
    for (const auto& m : v.mons) mons.push_back(doc.group.monomial_str(m));
    viols.push_back({{"identity", v.kind},
                     {"monomials", mons},
                     {"lhs", v.lhs.str(doc.group.params)},
                     {"rhs", v.rhs.str(doc.group.params)}});
  }
  j["violations"] = viols;

  std::string text = "cocycle identity check (degree <= " +
                     std::to_string(degree) + ", box " + bracketed(box) + "): ";
  if (rep.ok()) {
    text += "ok, " + plural(rep.triples_checked, "triple") + "\n";
  } else {
    text += plural((long)rep.violations.size(), "violation") + " in " +
            plural(rep.triples_checked, "triple") + "\n";
    size_t shown = std::min<size_t>(rep.violations.size(), 5);
    for (size_t i = 0; i < shown; ++i) {
      const auto& v = rep.violations[i];
      std::string mons;
      for (const auto& m : v.mons) mons += " " + doc.group.monomial_str(m);
      text += "  " + v.kind + " at" + mons + ": " +
              v.lhs.str(doc.group.params) + " != " + v.rhs.str(doc.group.params) +
              "\n";
    }
    if (rep.violations.size() > shown)
      text += "  ... and " + std::to_string(rep.violations.size() - shown) +
              " more\n";
  }
  return make(j, text, rep.ok() ? 0 : 1);
}

Report check_cybe(const Document& doc) {
  std::optional<lie::Bivector> r = document_bivector(doc);
  if (!r)
    fail(Err::SchemaError,
         "check cybe needs a lie section and an exp-bivector cocycle");
  LieModel model = build_lie(doc);
  bool jac = lie::check_jacobi(model.algebra);
  lie::CybeReport rep = lie::cybe_check(model.algebra, *r);
  bool ok = jac && rep.ok;

  json j = head("check");
  j["kind"] = "cybe";
  j["jacobi"] = jac;
  j["ok"] = ok;
  json viols = json::array();
  for (const auto& [a, b, c, val] : rep.violations)
    viols.push_back(
        {{"indices", {a, b, c}}, {"value", val.str(doc.group.params)}});
  j["violations"] = viols;

  std::string text;
  if (!jac) text += "jacobi identity: FAILED\n";
  text += std::string("yang-baxter check: ") + (rep.ok ? "ok" : "FAILED") + "\n";
  for (const auto& [a, b, c, val] : rep.violations)
    text += "  defect[" + model.algebra.basis[a] + ", " +
            model.algebra.basis[b] + ", " + model.algebra.basis[c] +
            "] = " + val.str(doc.group.params) + "\n";
  return make(j, text, ok ? 0 : 1);
}

Report check_invariance(const Document& doc) {
  LieModel model = build_lie(doc);
  bool jac = lie::check_jacobi(model.algebra);
  bool real =
      lie::check_realization(doc.group, model.algebra, model.realizations);

  json j = head("check");
  j["kind"] = "invariance";
  j["jacobi"] = jac;
  j["realization"] = real;
  json ds = json::array();
  bool fields_ok = true;
  std::string lines;
  for (const lie::Derivation& d : model.realizations) {
    bool tag_ok = lie::check_derivation_tag(doc.group, d);
    bool left = lie::check_left_invariant(doc.group, d);
    bool right = right_invariant(doc.group, d);
    fields_ok = fields_ok && tag_ok && (left || right);
    ds.push_back({{"name", d.name},
                  {"tag", d.toral ? "toral" : "nilpotent"},
                  {"tag_ok", tag_ok},
                  {"left_invariant", left},
                  {"right_invariant", right}});
    lines += "  " + d.name + ": tag " + (d.toral ? "toral" : "nilpotent") +
             (tag_ok ? " ok" : " FAILED") + ", left-invariant " +
             (left ? "yes" : "no") + ", right-invariant " +
             (right ? "yes" : "no") + "\n";
  }
  j["derivations"] = ds;
  bool ok = jac && real && fields_ok;
  j["ok"] = ok;

  std::string text = std::string("jacobi identity: ") + (jac ? "ok" : "FAILED") +
                     "\n" + "bracket realization: " + (real ? "ok" : "FAILED") +
                     "\n" + "invariant fields:\n" + lines;
  return make(j, text, ok ? 0 : 1);
}

}  // namespace

Report cmd_check(const Document& doc, const std::string& kind, long degree,
                 long box) {
  if (kind == "hopf") return check_hopf(doc);
  if (kind == "cocycle") return check_cocycle_axiom(doc, degree, box);
  if (kind == "cybe") return check_cybe(doc);
  if (kind == "invariance") return check_invariance(doc);
  fail(Err::SchemaError,
       "unknown check '" + kind + "' (expected hopf, cybe, cocycle, or invariance)");
}

}  // namespace twist::cli
