#include "twist/document.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "twist/error.hpp"
#include "twist/exprparse.hpp"

namespace twist::cli {

using json = nlohmann::ordered_json;
using hopf::Element;
using hopf::GroupData;
using scalars::Scalar;

namespace {

// Error::what() is "Kind: message"; recover the bare message so context
// prefixes do not stack kind names.
std::string bare_message(const Error& e) {
  std::string w = e.what();
  std::string prefix = std::string(err_name(e.kind())) + ": ";
  if (w.rfind(prefix, 0) == 0) return w.substr(prefix.size());
  return w;
}

[[noreturn]] void rethrow_at(const Error& e, const std::string& path) {
  fail(e.kind(), path + ": " + bare_message(e));
}

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  fail(Err::SchemaError, path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok) schema(path, "unknown key '" + it.key() + "'");
  }
}

const json& req(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema(path, "missing required key '" + std::string(key) + "'");
  return *it;
}

std::string str_at(const json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

long int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<long>();
}

std::vector<std::string> str_list(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(str_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::pair<std::string, std::string>> str_map(const json& j,
                                                         const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object of expression strings");
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out.emplace_back(it.key(), str_at(it.value(), path + "." + it.key()));
  return out;
}

Element element_at(const std::string& text, const GroupData& g,
                   const std::string& path) {
  try {
    return parse_element(text, g);
  } catch (const Error& e) {
    rethrow_at(e, path);
  }
}

Scalar scalar_at(const std::string& text, const scalars::ParamTable& pt,
                 const std::string& path) {
  try {
    return parse_scalar(text, pt);
  } catch (const Error& e) {
    rethrow_at(e, path);
  }
}

int lie_index(const std::vector<std::string>& basis, const std::string& name,
              const std::string& path) {
  auto it = std::find(basis.begin(), basis.end(), name);
  if (it == basis.end())
    fail(Err::UnknownName, path + ": '" + name + "' is not a Lie basis element");
  return static_cast<int>(it - basis.begin());
}

CocycleSpec parse_cocycle_spec(const json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  CocycleSpec spec;
  spec.variant = str_at(req(j, path, "variant"), path + ".variant");
  if (spec.variant == "trivial") {
    check_keys(j, path, {"variant"});
  } else if (spec.variant == "bicharacter") {
    check_keys(j, path, {"variant", "matrix"});
    const json& m = req(j, path, "matrix");
    if (!m.is_array()) schema(path + ".matrix", "expected an array of rows");
    for (size_t i = 0; i < m.size(); ++i)
      spec.matrix.push_back(str_list(m[i], path + ".matrix[" + std::to_string(i) + "]"));
  } else if (spec.variant == "exp-bivector") {
    check_keys(j, path, {"variant", "sign", "wedges"});
    if (j.contains("sign")) spec.sign = str_at(j["sign"], path + ".sign");
    const json& w = req(j, path, "wedges");
    if (!w.is_array()) schema(path + ".wedges", "expected an array");
    for (size_t i = 0; i < w.size(); ++i) {
      std::string wp = path + ".wedges[" + std::to_string(i) + "]";
      const json& e = w[i];
      if (!e.is_object()) schema(wp, "expected an object");
      check_keys(e, wp, {"pair", "coeff"});
      std::vector<std::string> pr = str_list(req(e, wp, "pair"), wp + ".pair");
      if (pr.size() != 2) schema(wp + ".pair", "expected a two-element list");
      spec.wedges.push_back(
          {pr[0], pr[1], str_at(req(e, wp, "coeff"), wp + ".coeff")});
    }
  } else if (spec.variant == "borel-series") {
    check_keys(j, path, {"variant", "parameter"});
    spec.parameter = str_at(req(j, path, "parameter"), path + ".parameter");
  } else if (spec.variant == "convolution") {
    check_keys(j, path, {"variant", "factors"});
    const json& f = req(j, path, "factors");
    if (!f.is_array()) schema(path + ".factors", "expected an array");
    for (size_t i = 0; i < f.size(); ++i)
      spec.factors.push_back(
          parse_cocycle_spec(f[i], path + ".factors[" + std::to_string(i) + "]"));
  } else {
    schema(path + ".variant", "unknown cocycle variant '" + spec.variant + "'");
  }
  return spec;
}

json cocycle_to_json(const CocycleSpec& spec) {
  json j;
  j["variant"] = spec.variant;
  if (spec.variant == "bicharacter") {
    j["matrix"] = spec.matrix;
  } else if (spec.variant == "exp-bivector") {
    j["sign"] = spec.sign;
    json ws = json::array();
    for (const WedgeSpec& w : spec.wedges)
      ws.push_back({{"pair", {w.a, w.b}}, {"coeff", w.coeff}});
    j["wedges"] = ws;
  } else if (spec.variant == "borel-series") {
    j["parameter"] = spec.parameter;
  } else if (spec.variant == "convolution") {
    json fs = json::array();
    for (const CocycleSpec& f : spec.factors) fs.push_back(cocycle_to_json(f));
    j["factors"] = fs;
  }
  return j;
}

// Names must be unique across parameters and group variables so expression
// resolution is unambiguous.
void check_names(const Document& doc) {
  std::set<std::string> seen;
  auto add = [&](const std::string& n, const std::string& what) {
    if (n.empty()) fail(Err::SchemaError, what + ": empty name");
    if (n == "exp" || n == "zeta")
      fail(Err::SchemaError, what + ": '" + n + "' is a reserved word");
    if (!seen.insert(n).second)
      fail(Err::SchemaError, what + ": duplicate name '" + n + "'");
  };
  for (const std::string& n : doc.group.params.names) add(n, "params.names");
  for (const std::string& n : doc.group.xnames) add(n, "group.torus");
  for (const std::string& n : doc.group.znames) add(n, "group.filtered");
}

void validate_sections(const Document& doc) {
  if (doc.lie) build_lie(doc);
  if (doc.cocycle) build_cocycle(doc);
}

}  // namespace

Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // map the byte offset to line/column for the diagnostic
    size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(Err::SyntaxError, "invalid JSON at line " + std::to_string(line) +
                               ", column " + std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) fail(Err::SchemaError, "document: expected a JSON object");
  check_keys(j, "document",
             {"schema_version", "params", "group", "lie", "cocycle", "options"});
  long version = int_at(req(j, "document", "schema_version"), "schema_version");
  if (version != 1)
    schema("schema_version", "unsupported version " + std::to_string(version));

  Document doc;

  if (j.contains("params")) {
    const json& p = j["params"];
    check_keys(p, "params", {"names", "cyclotomic_order"});
    if (p.contains("names"))
      doc.group.params.names = str_list(p["names"], "params.names");
    if (p.contains("cyclotomic_order")) {
      long n = int_at(p["cyclotomic_order"], "params.cyclotomic_order");
      if (n < 1) schema("params.cyclotomic_order", "expected a positive integer");
      doc.group.params.cyclotomic_order = n;
    }
  }

  const json& gj = req(j, "document", "group");
  check_keys(gj, "group", {"mode", "torus", "filtered"});
  if (gj.contains("mode")) {
    doc.group_section.mode = str_at(gj["mode"], "group.mode");
    if (doc.group_section.mode != "strict" && doc.group_section.mode != "extended")
      schema("group.mode", "expected 'strict' or 'extended'");
  }
  if (gj.contains("torus"))
    doc.group_section.torus = str_list(gj["torus"], "group.torus");
  if (gj.contains("filtered")) {
    const json& fj = gj["filtered"];
    if (!fj.is_array()) schema("group.filtered", "expected an array");
    for (size_t i = 0; i < fj.size(); ++i) {
      std::string fp = "group.filtered[" + std::to_string(i) + "]";
      const json& v = fj[i];
      if (!v.is_object()) schema(fp, "expected an object");
      check_keys(v, fp, {"name", "degree", "coproduct"});
      FilteredVarSpec fv;
      fv.name = str_at(req(v, fp, "name"), fp + ".name");
      fv.degree = int_at(req(v, fp, "degree"), fp + ".degree");
      if (fv.degree < 1) schema(fp + ".degree", "expected a positive integer");
      if (v.contains("coproduct")) {
        const json& cj = v["coproduct"];
        if (!cj.is_array()) schema(fp + ".coproduct", "expected an array of pairs");
        for (size_t t = 0; t < cj.size(); ++t) {
          std::string tp = fp + ".coproduct[" + std::to_string(t) + "]";
          std::vector<std::string> pr = str_list(cj[t], tp);
          if (pr.size() != 2) schema(tp, "tensor terms are two-element lists");
          fv.coproduct.emplace_back(pr[0], pr[1]);
        }
      }
      doc.group_section.filtered.push_back(std::move(fv));
    }
  }

  // shape the group before parsing any embedded expression
  doc.group.xnames = doc.group_section.torus;
  doc.group.extended = doc.group_section.mode == "extended";
  for (const FilteredVarSpec& fv : doc.group_section.filtered) {
    doc.group.znames.push_back(fv.name);
    doc.group.zdeg.push_back(fv.degree);
  }
  doc.group.zcorr.resize(doc.group.znames.size());
  check_names(doc);
  for (size_t v = 0; v < doc.group_section.filtered.size(); ++v) {
    const FilteredVarSpec& fv = doc.group_section.filtered[v];
    std::string fp = "group.filtered[" + std::to_string(v) + "].coproduct";
    for (size_t t = 0; t < fv.coproduct.size(); ++t) {
      std::string tp = fp + "[" + std::to_string(t) + "]";
      hopf::ZTerm zt;
      zt.left = element_at(fv.coproduct[t].first, doc.group, tp + "[0]");
      zt.right = element_at(fv.coproduct[t].second, doc.group, tp + "[1]");
      doc.group.zcorr[v].push_back(std::move(zt));
    }
  }

  if (j.contains("lie")) {
    const json& lj = j["lie"];
    check_keys(lj, "lie", {"basis", "brackets", "derivations"});
    LieSection lsec;
    lsec.basis = str_list(req(lj, "lie", "basis"), "lie.basis");
    if (lj.contains("brackets")) {
      const json& bj = lj["brackets"];
      if (!bj.is_array()) schema("lie.brackets", "expected an array");
      for (size_t i = 0; i < bj.size(); ++i) {
        std::string bp = "lie.brackets[" + std::to_string(i) + "]";
        const json& b = bj[i];
        if (!b.is_object()) schema(bp, "expected an object");
        check_keys(b, bp, {"pair", "value"});
        std::vector<std::string> pr = str_list(req(b, bp, "pair"), bp + ".pair");
        if (pr.size() != 2) schema(bp + ".pair", "expected a two-element list");
        BracketSpec bs;
        bs.a = pr[0];
        bs.b = pr[1];
        bs.value = str_map(req(b, bp, "value"), bp + ".value");
        lsec.brackets.push_back(std::move(bs));
      }
    }
    const json& dj = req(lj, "lie", "derivations");
    if (!dj.is_array()) schema("lie.derivations", "expected an array");
    for (size_t i = 0; i < dj.size(); ++i) {
      std::string dp = "lie.derivations[" + std::to_string(i) + "]";
      const json& d = dj[i];
      if (!d.is_object()) schema(dp, "expected an object");
      check_keys(d, dp, {"name", "tag", "on"});
      DerivationSpec ds;
      ds.name = str_at(req(d, dp, "name"), dp + ".name");
      ds.tag = str_at(req(d, dp, "tag"), dp + ".tag");
      if (ds.tag != "toral" && ds.tag != "nilpotent")
        schema(dp + ".tag", "expected 'toral' or 'nilpotent'");
      if (d.contains("on")) ds.on = str_map(d["on"], dp + ".on");
      lsec.derivations.push_back(std::move(ds));
    }
    doc.lie = std::move(lsec);
  }

  if (j.contains("cocycle"))
    doc.cocycle = parse_cocycle_spec(j["cocycle"], "cocycle");

  if (j.contains("options")) {
    const json& oj = j["options"];
    check_keys(oj, "options", {"degree", "box", "format"});
    if (oj.contains("degree")) {
      doc.options.degree = int_at(oj["degree"], "options.degree");
      if (doc.options.degree < 0) schema("options.degree", "expected >= 0");
    }
    if (oj.contains("box")) {
      doc.options.box = int_at(oj["box"], "options.box");
      if (doc.options.box < 0) schema("options.box", "expected >= 0");
    }
    if (oj.contains("format")) {
      doc.options.format = str_at(oj["format"], "options.format");
      if (doc.options.format != "text" && doc.options.format != "machine")
        schema("options.format", "expected 'text' or 'machine'");
    }
  }

  doc.group.params.validate();
  validate_sections(doc);
  return doc;
}

std::string serialize_document(const Document& doc) {
  json j;
  j["schema_version"] = 1;
  j["params"] = {{"names", doc.group.params.names},
                 {"cyclotomic_order", doc.group.params.cyclotomic_order}};
  json fj = json::array();
  for (const FilteredVarSpec& fv : doc.group_section.filtered) {
    json terms = json::array();
    for (const auto& [l, r] : fv.coproduct) terms.push_back({l, r});
    fj.push_back(
        {{"name", fv.name}, {"degree", fv.degree}, {"coproduct", terms}});
  }
  j["group"] = {{"mode", doc.group_section.mode},
                {"torus", doc.group_section.torus},
                {"filtered", fj}};
  if (doc.lie) {
    json bj = json::array();
    for (const BracketSpec& b : doc.lie->brackets) {
      json val = json::object();
      for (const auto& [name, coeff] : b.value) val[name] = coeff;
      bj.push_back({{"pair", {b.a, b.b}}, {"value", val}});
    }
    json dj = json::array();
    for (const DerivationSpec& d : doc.lie->derivations) {
      json on = json::object();
      for (const auto& [var, expr] : d.on) on[var] = expr;
      dj.push_back({{"name", d.name}, {"tag", d.tag}, {"on", on}});
    }
    j["lie"] = {{"basis", doc.lie->basis}, {"brackets", bj}, {"derivations", dj}};
  }
  if (doc.cocycle) j["cocycle"] = cocycle_to_json(*doc.cocycle);
  j["options"] = {{"degree", doc.options.degree},
                  {"box", doc.options.box},
                  {"format", doc.options.format}};
  return j.dump(2) + "\n";
}

LieModel build_lie(const Document& doc) {
  if (!doc.lie) fail(Err::SchemaError, "document has no lie section");
  const LieSection& sec = *doc.lie;
  if (sec.basis.empty()) fail(Err::SchemaError, "lie.basis: empty basis");
  {
    std::set<std::string> seen(sec.basis.begin(), sec.basis.end());
    if (seen.size() != sec.basis.size())
      fail(Err::SchemaError, "lie.basis: duplicate basis name");
  }

  LieModel model{lie::LieAlgebra::abelian(sec.basis), {}};
  for (size_t i = 0; i < sec.brackets.size(); ++i) {
    const BracketSpec& b = sec.brackets[i];
    std::string bp = "lie.brackets[" + std::to_string(i) + "]";
    int ia = lie_index(sec.basis, b.a, bp + ".pair");
    int ib = lie_index(sec.basis, b.b, bp + ".pair");
    for (const auto& [name, coeff] : b.value) {
      int ie = lie_index(sec.basis, name, bp + ".value");
      model.algebra.set_bracket(ia, ib, ie,
                                scalar_at(coeff, doc.group.params, bp + ".value"));
    }
  }

  std::vector<const DerivationSpec*> by_basis(sec.basis.size(), nullptr);
  for (const DerivationSpec& d : sec.derivations) {
    auto it = std::find(sec.basis.begin(), sec.basis.end(), d.name);
    if (it == sec.basis.end())
      fail(Err::UnknownName,
           "lie.derivations: '" + d.name + "' is not a Lie basis element");
    size_t idx = it - sec.basis.begin();
    if (by_basis[idx])
      fail(Err::SchemaError, "lie.derivations: duplicate realization of '" +
                                 d.name + "'");
    by_basis[idx] = &d;
  }
  for (size_t i = 0; i < sec.basis.size(); ++i) {
    if (!by_basis[i])
      fail(Err::SchemaError,
           "lie.derivations: missing realization of '" + sec.basis[i] + "'");
    const DerivationSpec& spec = *by_basis[i];
    lie::Derivation d =
        lie::Derivation::zero(doc.group, spec.name, spec.tag == "toral");
    std::string dp = "lie.derivations['" + spec.name + "'].on";
    for (const auto& [var, expr] : spec.on) {
      bool found = false;
      for (int x = 0; x < doc.group.k() && !found; ++x)
        if (doc.group.xnames[x] == var) {
          d.on_x[x] = element_at(expr, doc.group, dp + "." + var);
          found = true;
        }
      for (int z = 0; z < doc.group.m() && !found; ++z)
        if (doc.group.znames[z] == var) {
          d.on_z[z] = element_at(expr, doc.group, dp + "." + var);
          found = true;
        }
      if (!found)
        fail(Err::UnknownName,
             dp + ": '" + var + "' is not a declared group variable");
    }
    model.realizations.push_back(std::move(d));
  }
  return model;
}

namespace {

cocycle::Cocycle build_spec(const Document& doc, const CocycleSpec& spec,
                            const std::string& path) {
  if (spec.variant == "trivial") return cocycle::Cocycle::trivial();

  if (spec.variant == "bicharacter") {
    int k = doc.group.k();
    if (static_cast<int>(spec.matrix.size()) != k)
      schema(path + ".matrix", "expected " + std::to_string(k) + " rows");
    cocycle::Bicharacter b;
    b.mat.resize(k);
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(spec.matrix[i].size()) != k)
        schema(path + ".matrix[" + std::to_string(i) + "]",
               "expected " + std::to_string(k) + " entries");
      for (int j = 0; j < k; ++j) {
        std::string ep =
            path + ".matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        Scalar s = scalar_at(spec.matrix[i][j], doc.group.params, ep);
        auto u = s.as_unit();
        if (!u) schema(ep, "bicharacter entries must be invertible units");
        b.mat[i].push_back(*u);
      }
    }
    return cocycle::Cocycle{std::move(b)};
  }

  if (spec.variant == "exp-bivector") {
    LieModel model = build_lie(doc);
    Scalar sgn = scalar_at(spec.sign, doc.group.params, path + ".sign");
    auto sr = sgn.as_rational();
    if (!sr) schema(path + ".sign", "expected a rational constant");
    // generators restricted to wedge-mentioned derivations, first mention first
    std::vector<int> used;
    auto use = [&](const std::string& name) {
      int idx = lie_index(doc.lie->basis, name, path + ".wedges");
      for (size_t u = 0; u < used.size(); ++u)
        if (used[u] == idx) return static_cast<int>(u);
      used.push_back(idx);
      return static_cast<int>(used.size()) - 1;
    };
    std::vector<std::tuple<int, int, Scalar>> entries;
    for (size_t i = 0; i < spec.wedges.size(); ++i) {
      const WedgeSpec& w = spec.wedges[i];
      std::string wp = path + ".wedges[" + std::to_string(i) + "]";
      int a = use(w.a);
      int b = use(w.b);
      if (a == b) schema(wp, "wedge of a basis element with itself");
      entries.emplace_back(a, b,
                           scalar_at(w.coeff, doc.group.params, wp + ".coeff"));
    }
    cocycle::ExpBivector e;
    e.sign = *sr;
    for (int idx : used) e.gens.push_back(model.realizations[idx]);
    e.r = lie::Bivector::zero(static_cast<int>(used.size()));
    for (const auto& [a, b, c] : entries) e.r.add_wedge(a, b, c);
    return cocycle::Cocycle{std::move(e)};
  }

  if (spec.variant == "borel-series") {
    int hp = doc.group.params.index_of(spec.parameter);
    if (hp < 0)
      fail(Err::UnknownName, path + ".parameter: '" + spec.parameter +
                                 "' is not a declared parameter");
    return cocycle::borel_builtin(doc.group, hp);
  }

  if (spec.variant == "convolution") {
    cocycle::Convolution conv;
    for (size_t i = 0; i < spec.factors.size(); ++i)
      conv.factors.push_back(build_spec(
          doc, spec.factors[i], path + ".factors[" + std::to_string(i) + "]"));
    return cocycle::Cocycle{std::move(conv)};
  }

  schema(path, "unknown cocycle variant '" + spec.variant + "'");
}

void collect_bivectors(const CocycleSpec& spec,
                       std::vector<const CocycleSpec*>& out) {
  if (spec.variant == "exp-bivector") out.push_back(&spec);
  for (const CocycleSpec& f : spec.factors) collect_bivectors(f, out);
}

}  // namespace

cocycle::Cocycle build_cocycle(const Document& doc) {
  if (!doc.cocycle) return cocycle::Cocycle::trivial();
  return build_spec(doc, *doc.cocycle, "cocycle");
}

std::optional<lie::Bivector> document_bivector(const Document& doc) {
  if (!doc.cocycle) return std::nullopt;
  std::vector<const CocycleSpec*> specs;
  collect_bivectors(*doc.cocycle, specs);
  if (specs.empty()) return std::nullopt;
  if (specs.size() > 1)
    fail(Err::SchemaError,
         "cocycle: more than one exp-bivector in the convolution");
  LieModel model = build_lie(doc);
  lie::Bivector r = lie::Bivector::zero(model.algebra.dim());
  for (const WedgeSpec& w : specs[0]->wedges) {
    int a = lie_index(doc.lie->basis, w.a, "cocycle.wedges");
    int b = lie_index(doc.lie->basis, w.b, "cocycle.wedges");
    r.add_wedge(a, b, scalar_at(w.coeff, doc.group.params, "cocycle.wedges"));
  }
  return r;
}

}  // namespace twist::cli
