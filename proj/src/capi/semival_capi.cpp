#include "semival/semival.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "error.hpp"
#include "genseq.hpp"
#include "sampling.hpp"
#include "semigroup_lab.hpp"
#include "serialize.hpp"

using namespace semival;

struct sv_valuation {
  ValuationDef def;
};

namespace {

thread_local std::string g_last_error;

sv_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::usage: return SV_USAGE;
    case ErrorKind::parse: return SV_PARSE;
    case ErrorKind::domain: return SV_DOMAIN;
    case ErrorKind::cap: return SV_CAP;
    case ErrorKind::internal: return SV_INTERNAL;
  }
  return SV_INTERNAL;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs body, which returns the status and fills text; maps exceptions.
template <typename Body>
sv_status guarded(char** out, Body&& body) {
  if (out) *out = nullptr;
  g_last_error.clear();
  try {
    std::string text;
    sv_status st = body(text);
    if (out && (st == SV_OK || st == SV_VERIFY_FAILED)) *out = dup(text);
    return st;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::parse_error& e) {
    g_last_error = std::string("malformed JSON request: ") + e.what();
    return SV_PARSE;
  } catch (const json::exception& e) {
    g_last_error = std::string("bad JSON request: ") + e.what();
    return SV_USAGE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SV_CAP;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return SV_INTERNAL;
  }
}

sv_status need(const void* p, const char* what) {
  if (!p) fail(ErrorKind::usage, std::string(what) + " is NULL");
  return SV_OK;
}

std::uint64_t states_of(const sv_limits* l) {
  return l && l->max_states ? l->max_states : default_max_states();
}

unsigned threads_of(const sv_limits* l) { return l && l->threads ? l->threads : 1; }

json parse_request(const char* request) {
  if (!request || !*request) return json::object();
  json j = json::parse(request);
  if (!j.is_object()) fail(ErrorKind::usage, "request must be a JSON object");
  return j;
}

std::string text_field(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  fail(ErrorKind::usage, std::string("field '") + key + "' must be a string or integer");
}

std::optional<QuadReal> as_quad(const std::string& text) { return parse_rat_quad(text).to_quad(); }

}  // namespace

extern "C" {

const char* sv_version(void) { return "0.1.0"; }

const char* sv_status_name(sv_status status) {
  switch (status) {
    case SV_OK: return "ok";
    case SV_VERIFY_FAILED: return "verification failed";
    case SV_USAGE: return "usage error";
    case SV_PARSE: return "parse error";
    case SV_CAP: return "resource cap exceeded";
    case SV_DOMAIN: return "domain error";
    case SV_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sv_last_error(void) { return g_last_error.c_str(); }

void sv_string_free(char* s) { std::free(s); }

sv_status sv_valuation_from_json(const char* descriptor, sv_valuation** out) {
  if (out) *out = nullptr;
  return guarded(nullptr, [&](std::string&) {
    need(descriptor, "descriptor");
    need(out, "output handle");
    *out = new sv_valuation{valuation_from_json(json::parse(descriptor))};
    return SV_OK;
  });
}

void sv_valuation_free(sv_valuation* v) { delete v; }

sv_status sv_valuation_describe(const sv_valuation* v, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    need(v, "valuation");
    text = valuation_to_json(v->def).dump();
    return SV_OK;
  });
}

sv_status sv_approx(const char* exact, int digits, char** out_text) {
  return guarded(out_text, [&](std::string& text) {
    need(exact, "value");
    if (digits < 1 || digits > 200) fail(ErrorKind::usage, "digits must lie in 1..200");
    std::string_view s(exact);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    text = !s.empty() && s.front() == '(' ? approx(LexVec::parse(s), digits) : approx(QuadReal::parse(s), digits);
    return SV_OK;
  });
}

sv_status sv_poly_normalize(const char* poly, char** out_text) {
  return guarded(out_text, [&](std::string& text) {
    need(poly, "polynomial");
    text = parse_poly(poly).str();
    return SV_OK;
  });
}

sv_status sv_valuate(const sv_valuation* v, const char* poly, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    need(v, "valuation");
    need(poly, "polynomial");
    const MPoly f = parse_poly(poly);
    text = valuation_result_to_json(v->def, f, valuate(v->def, f)).dump();
    return SV_OK;
  });
}

sv_status sv_expand(const sv_valuation* v, const char* poly, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    need(v, "valuation");
    need(poly, "polynomial");
    const MPoly f = parse_poly(poly);
    const Expansion e = expand(v->def, f);
    json out;
    out["valuation"] = valuation_to_json(v->def);
    out["poly"] = f.str();
    out["canonical"] = e.is_canonical();
    out["reconstructs"] = reconstruct(v->def, e) == f;
    out["terms"] = expansion_to_json(v->def, e);
    text = out.dump();
    return out["reconstructs"].get<bool>() ? SV_OK : SV_VERIFY_FAILED;
  });
}

sv_status sv_key_identities(const sv_valuation* v, unsigned i_max, unsigned symbolic_max, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    need(v, "valuation");
    json rows = json::array();
    bool all = true;
    for (int fam = 0; fam < (v->def.outer() ? 2 : 1); ++fam) {
      const bool outer = fam == 1;
      const SeqFamily& sf = v->def.family(outer);
      for (unsigned i = 1; i <= i_max && sf.has_second(i + 1); ++i) {
        KeyIdentity k = check_key_identity(v->def, outer, i, i <= symbolic_max);
        all = all && k.holds();
        rows.push_back(key_identity_to_json(k));
      }
    }
    json out;
    out["valuation"] = valuation_to_json(v->def);
    out["identities"] = std::move(rows);
    out["all_hold"] = all;
    text = out.dump();
    return all ? SV_OK : SV_VERIFY_FAILED;
  });
}

sv_status sv_tilde(const sv_valuation* v, const char* request, const sv_limits* limits, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    need(v, "valuation");
    const json req = parse_request(request);
    std::vector<std::pair<std::string, std::optional<QuadReal>>> lambdas;
    if (req.contains("lambdas")) {
      for (const auto& l : req.at("lambdas")) {
        std::string t = l.is_string() ? l.get<std::string>() : l.dump();
        lambdas.emplace_back(t, as_quad(t));
      }
    } else if (req.contains("grid")) {
      const json& grid = req.at("grid");
      const QuadReal step(Dyadic::parse(text_field(grid, "step", "1")));
      const QuadReal top(Dyadic::parse(text_field(grid, "max", "8")));
      if (!(step > QuadReal(0L))) fail(ErrorKind::usage, "grid step must be positive");
      for (QuadReal l(0L); l <= top; l += step) {
        if (lambdas.size() >= 100000) fail(ErrorKind::cap, "grid has more than 100000 points");
        lambdas.emplace_back(l.str(), l);
      }
    } else {
      fail(ErrorKind::usage, "tilde request needs \"lambdas\" or \"grid\"");
    }
    QuadReal top(0L);
    for (const auto& [_, q] : lambdas)
      if (q && *q > top) top = *q;
    const GenSemigroup g = GenSemigroup::from_valuation(v->def, top + QuadReal(1L));
    const TildeSolver solver(g, top, states_of(limits));
    json entries = json::array();
    for (const auto& [t, q] : lambdas) {
      if (!q) {
        json e;
        e["lambda"] = t;
        e["in_projected_semigroup"] = false;
        e["tilde"] = nullptr;
        e["witness"] = nullptr;
        entries.push_back(std::move(e));
        continue;
      }
      entries.push_back(tilde_to_json(g, *q, *q < QuadReal(0L) ? std::nullopt : solver.query(*q)));
    }
    json out;
    out["valuation"] = valuation_to_json(v->def);
    out["generators"] = generators_to_json(g);
    out["entries"] = std::move(entries);
    text = out.dump();
    return SV_OK;
  });
}

sv_status sv_box_count(const sv_valuation* v, const char* y1, const char* y2, const sv_limits* limits,
                       char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    need(v, "valuation");
    need(y1, "y1");
    need(y2, "y2");
    const BoxBoundReport rep = box_bound_check(v->def, parse_int(y1), parse_int(y2), states_of(limits));
    json out = box_report_to_json(rep);
    out["valuation"] = valuation_to_json(v->def);
    text = out.dump();
    return rep.pass ? SV_OK : SV_VERIFY_FAILED;
  });
}

sv_status sv_example3(const char* request, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    const json req = parse_request(request);
    const Int r = parse_int(text_field(req, "r", "1"));
    if (r < 1 || r > 64) fail(ErrorKind::usage, "r must lie in 1..64");
    const Int y1 = parse_int(text_field(req, "y1", "64"));
    const Int d = parse_int(text_field(req, "d", "1000000"));
    std::vector<Int> y2s;
    if (req.contains("y2")) {
      for (const auto& y : req.at("y2")) y2s.push_back(json_int(y, "y2"));
    } else {
      y2s = doubling_list(parse_int(text_field(req, "y2_max", "4096")));
    }
    const ContradictionTable t = contradiction_table(r.get_ui(), y1, y2s, d);
    text = contradiction_to_json(t).dump();
    return t.first_crossing ? SV_OK : SV_VERIFY_FAILED;
  });
}

sv_status sv_wild(const char* request, const sv_limits* limits, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    const json req = parse_request(request);
    const WildKind kind = parse_wild_kind(text_field(req, "kind", "decreasing"));
    std::optional<IntFunction> f, g;
    if (kind != WildKind::increasing) f = IntFunction::parse(text_field(req, "f", "neg_linear"));
    if (kind != WildKind::decreasing) g = IntFunction::parse(text_field(req, "g", "linear"));
    WildParams params;
    params.a = QuadReal::parse(text_field(req, "a", "1"));
    if (req.contains("a2") && !req.at("a2").is_null()) params.a2 = QuadReal::parse(text_field(req, "a2", ""));
    params.c = parse_int(text_field(req, "c", "1"));
    const Int N = parse_int(text_field(req, "N", "4096"));
    const ValuationDef v = req.contains("valuation")
                               ? valuation_from_json(req.at("valuation"))
                               : wild_valuation(kind, f, g, wild_index_bound(kind, params, N));
    const WildCertificate cert = wild_certificate(kind, v, params, f, g, N, threads_of(limits), states_of(limits));
    text = certificate_to_json(cert, v, f, g).dump();
    return cert.valid ? SV_OK : SV_VERIFY_FAILED;
  });
}

sv_status sv_selftest(const sv_valuation* v, const char* request, char** out_json) {
  return guarded(out_json, [&](std::string& text) {
    need(v, "valuation");
    const json req = parse_request(request);
    SelftestOptions opt;
    opt.seed = parse_int(text_field(req, "seed", "1")).get_ui();
    opt.roundtrip = parse_int(text_field(req, "roundtrip", "200")).get_ui();
    opt.homomorphism = parse_int(text_field(req, "homomorphism", "100")).get_ui();
    opt.symbolic_max = parse_int(text_field(req, "symbolic_max", "5")).get_ui();
    const auto checks = selftest(v->def, opt);
    json rows = json::array();
    bool all = true;
    for (const auto& c : checks) {
      all = all && c.ok();
      rows.push_back({{"name", c.name},
                      {"trials", c.trials},
                      {"passed", c.passed},
                      {"ok", c.ok()},
                      {"first_failure", c.first_failure.empty() ? json(nullptr) : json(c.first_failure)}});
    }
    json out;
    out["valuation"] = valuation_to_json(v->def);
    out["seed"] = opt.seed;
    out["checks"] = std::move(rows);
    out["all_ok"] = all;
    text = out.dump();
    return all ? SV_OK : SV_VERIFY_FAILED;
  });
}

}  // extern "C"
