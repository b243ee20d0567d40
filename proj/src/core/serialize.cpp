#include "serialize.hpp"

#include <sstream>

#include "error.hpp"

namespace semival {

namespace {

json int_json(const Int& v) {
  if (v.fits_slong_p()) return v.get_si();
  return to_string(v);
}

json weights_json(const std::vector<Int>& w) {
  json out = json::array();
  for (const auto& x : w) out.push_back(int_json(x));
  return out;
}

std::vector<Int> weights_from(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorKind::usage, std::string(what) + " must be an array of integers");
  std::vector<Int> out;
  for (const auto& x : j) out.push_back(json_int(x, what));
  return out;
}

std::vector<Int> chosen(const json& j, const char* key, bool decreasing) {
  if (!j.is_object() || !j.contains(key) || !j.contains("i_max"))
    fail(ErrorKind::usage, std::string("weight choice needs \"") + key + "\" and \"i_max\"");
  const IntFunction fn = IntFunction::parse(j.at(key).get<std::string>());
  const Int i_max = json_int(j.at("i_max"), "i_max");
  if (i_max < 1 || i_max > 62) fail(ErrorKind::usage, "i_max must lie in 1..62");
  return decreasing ? choose_sigma(fn, i_max.get_ui()) : choose_tau(fn, i_max.get_ui());
}

json exps_json(const std::vector<std::uint64_t>& e) {
  json out = json::array();
  for (auto x : e) out.push_back(x);
  return out;
}

}  // namespace

Int json_int(const json& j, const char* what) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<unsigned long>()) : Int(j.get<long>());
  if (j.is_string()) return parse_int(j.get<std::string>());
  fail(ErrorKind::usage, std::string(what) + " must be an integer");
}

json valuation_to_json(const ValuationDef& v) {
  json out;
  out["form"] = form_name(v.form());
  if (v.form() == Form::Q3) {
    out["tau"] = weights_json(v.inner().weights());
  } else {
    out["sigma"] = weights_json(v.inner().weights());
    if (v.outer()) out["tau"] = weights_json(v.outer()->weights());
  }
  return out;
}

ValuationDef valuation_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::usage, "valuation descriptor must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "form" && key != "sigma" && key != "tau" && key != "choose_sigma" && key != "choose_tau")
      fail(ErrorKind::usage, "unknown valuation field '" + key + "'");
  auto get = [&](const char* explicit_key, const char* choice_key, const char* fn_key, bool decreasing)
      -> std::optional<std::vector<Int>> {
    if (j.contains(explicit_key) && j.contains(choice_key))
      fail(ErrorKind::usage, std::string("give either ") + explicit_key + " or " + choice_key);
    if (j.contains(explicit_key)) return weights_from(j.at(explicit_key), explicit_key);
    if (j.contains(choice_key)) return chosen(j.at(choice_key), fn_key, decreasing);
    return std::nullopt;
  };
  auto sigma = get("sigma", "choose_sigma", "f", true);
  auto tau = get("tau", "choose_tau", "g", false);
  Form form;
  if (j.contains("form")) {
    form = parse_form(j.at("form").get<std::string>());
  } else if (sigma && tau) {
    form = Form::Combined5;
  } else {
    form = tau ? Form::Q3 : Form::P3;
  }
  switch (form) {
    case Form::P3:
      if (!sigma || tau) fail(ErrorKind::usage, "P3 takes sigma weights only");
      return ValuationDef::p3(std::move(*sigma));
    case Form::Q3:
      if (!tau || sigma) fail(ErrorKind::usage, "Q3 takes tau weights only");
      return ValuationDef::q3(std::move(*tau));
    case Form::Combined5:
      if (!sigma || !tau) fail(ErrorKind::usage, "Combined5 takes sigma and tau weights");
      return ValuationDef::combined5(std::move(*sigma), std::move(*tau));
  }
  fail(ErrorKind::internal, "unreachable form");
}

json expansion_to_json(const ValuationDef& v, const Expansion& e) {
  json terms = json::array();
  for (const auto& t : e.terms) {
    json row;
    row["term"] = term_label(v, t);
    row["coeff"] = t.coeff.str();
    row["alpha"] = exps_json(t.alpha);
    if (v.outer()) row["beta"] = exps_json(t.beta);
    try {
      row["value"] = term_value(v, t).str();
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::domain) throw;
      row["value"] = nullptr;  // weight needed for this term is missing
    }
    terms.push_back(std::move(row));
  }
  return terms;
}

json valuation_result_to_json(const ValuationDef& v, const MPoly& f, const Valuation& val) {
  json out;
  out["valuation"] = valuation_to_json(v);
  out["poly"] = f.str();
  out["value"] = val.value.str();
  out["witness"] = term_label(v, val.expansion.terms[val.witness]);
  out["witness_index"] = val.witness;
  out["expansion"] = expansion_to_json(v, val.expansion);
  return out;
}

json key_identity_to_json(const KeyIdentity& k) {
  json out;
  out["index"] = k.index;
  out["family"] = k.outer ? "outer" : "inner";
  out["square_side"] = k.square_side.str();
  out["tail_side"] = k.tail_side.str();
  out["next_value"] = k.next_value.str();
  out["arithmetic"] = k.arithmetic;
  out["symbolic"] = k.symbolic ? json(*k.symbolic) : json(nullptr);
  out["holds"] = k.holds();
  return out;
}

json generators_to_json(const GenSemigroup& g) {
  json out = json::array();
  for (std::size_t k = 0; k < g.size(); ++k) out.push_back({{"label", g.labels()[k]}, {"value", g.generators()[k].str()}});
  return out;
}

json tilde_to_json(const GenSemigroup& g, const QuadReal& lambda, const std::optional<TildeEntry>& t) {
  json out;
  out["lambda"] = lambda.str();
  out["in_projected_semigroup"] = t.has_value();
  if (t) {
    out["tilde"] = t->tilde.str();
    out["witness"] = witness_label(g, t->witness);
  } else {
    out["tilde"] = nullptr;
    out["witness"] = nullptr;
  }
  return out;
}

json contradiction_to_json(const ContradictionTable& t) {
  json out;
  out["r"] = t.r;
  out["y1"] = to_string(t.y1);
  out["d"] = to_string(t.d);
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"y2", to_string(r.y2)},
                    {"lower", to_string(r.lower)},
                    {"count", to_string(r.count)},
                    {"claimed", to_string(r.claimed)},
                    {"exceeds", r.exceeds}});
  out["rows"] = std::move(rows);
  out["first_crossing"] = t.first_crossing ? json(to_string(t.rows[*t.first_crossing].y2)) : json(nullptr);
  return out;
}

std::string contradiction_to_csv(const ContradictionTable& t) {
  std::ostringstream out;
  out << "y2,lower,count,claimed,exceeds\n";
  for (const auto& r : t.rows)
    out << r.y2 << ',' << r.lower << ',' << r.count << ',' << r.claimed << ',' << (r.exceeds ? "true" : "false") << '\n';
  return out.str();
}

json box_report_to_json(const BoxBoundReport& r) {
  json out;
  out["y1"] = to_string(r.y1);
  out["y2"] = to_string(r.y2);
  out["dims"] = r.dims;
  out["count"] = r.count;
  out["bound"] = to_string(r.bound);
  out["pass"] = r.pass;
  out["note"] = "count of the generated sub-semigroup inside the pseudo-box";
  return out;
}

json certificate_to_json(const WildCertificate& c, const ValuationDef& v, const std::optional<IntFunction>& f,
                         const std::optional<IntFunction>& g) {
  json out;
  out["kind"] = wild_kind_name(c.kind);
  out["valuation"] = valuation_to_json(v);
  json params;
  params["a"] = c.params.a.str();
  if (c.kind == WildKind::both) params["a2"] = c.a2.str();
  params["c"] = to_string(c.params.c);
  params["e"] = to_string(c.e);
  params["n0"] = to_string(c.n0);
  params["N"] = to_string(c.N);
  params["f"] = f ? json(f->descriptor()) : json(nullptr);
  params["g"] = g ? json(g->descriptor()) : json(nullptr);
  out["params"] = std::move(params);
  out["notes"] = c.notes;
  json rows = json::array();
  for (const auto& r : c.rows) {
    json row;
    row["n"] = to_string(r.n);
    row["i"] = r.i;
    row["chain"] = r.chain;
    row["lambda"] = r.lambda.str();
    row["witness"] = r.witness;
    row["lhs"] = r.lhs.str();
    row["rhs"] = to_string(r.rhs);
    row["tilde"] = r.tilde ? json(r.tilde->str()) : json(nullptr);
    json checks = json::object();
    for (const auto& [name, status] : r.checks) checks[name] = status;
    row["checks"] = std::move(checks);
    row["ok"] = r.ok;
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  out["valid"] = c.valid;
  out["first_bad"] = c.first_bad ? json(to_string(*c.first_bad)) : json(nullptr);
  return out;
}

std::string certificate_to_csv(const WildCertificate& c) {
  std::ostringstream out;
  out << "n,i,chain,lambda,witness,lhs,rhs,tilde,ok\n";
  for (const auto& r : c.rows)
    out << r.n << ',' << r.i << ',' << r.chain << ",\"" << r.lambda.str() << "\"," << r.witness << ',' << r.lhs.str()
        << ',' << r.rhs << ",\"" << (r.tilde ? r.tilde->str() : "") << "\"," << (r.ok ? "true" : "false") << '\n';
  return out.str();
}

std::string approx(const QuadReal& q, int digits) {
  const mp_bitcnt_t bits = static_cast<mp_bitcnt_t>(digits * 4 + 64);
  mpf_class rat(0, bits), surd(0, bits), root(2, bits);
  rat = mpf_class(q.rat_part().to_rat(), bits);
  surd = mpf_class(q.surd_part().to_rat(), bits);
  root = sqrt(root);
  mpf_class total(rat + surd * root, bits);
  mp_exp_t exp = 0;
  std::string mant = total.get_str(exp, 10, static_cast<std::size_t>(digits));
  if (mant.empty()) return "0";
  bool neg = mant[0] == '-';
  if (neg) mant.erase(0, 1);
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
  } else if (static_cast<std::size_t>(exp) >= mant.size()) {
    out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
  }
  return neg ? "-" + out : out;
}

std::string approx(const LexVec& v, int digits) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + approx(v[i], digits);
  return out + ")";
}

}  // namespace semival
