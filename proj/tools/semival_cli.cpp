// semival command line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semival/semival.h"

using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerify = 1, kUsage = 2, kCap = 3, kInternal = 4 };

int exit_code(sv_status s) {
  switch (s) {
    case SV_OK: return kOk;
    case SV_VERIFY_FAILED: return kVerify;
    case SV_USAGE:
    case SV_PARSE:
    case SV_DOMAIN: return kUsage;
    case SV_CAP: return kCap;
    case SV_INTERNAL: return kInternal;
  }
  return kInternal;
}

struct Options {
  std::string format = "pretty";
  std::string out;
  std::uint64_t max_states = 0;
  unsigned threads = 1;
  bool approx = false;

  // valuation
  std::string form;
  std::string sigma;
  std::string tau;
  std::string valuation_file;
  std::string f;
  std::string g;
  unsigned i_max = 6;

  std::string poly;
  std::string poly_file;

  std::vector<std::string> lambdas;
  std::string grid_step;
  std::string lambda_max;

  std::string y1 = "4";
  std::string y2 = "4";

  unsigned r = 1;
  std::string d = "1000000";
  std::string y2_max = "4096";
  std::vector<std::string> y2_list;

  std::string kind = "decreasing";
  std::string a = "1";
  std::string a2;
  std::string c = "1";
  std::string N = "4096";
  std::string weights_file;

  std::uint64_t seed = 1;
  unsigned roundtrip = 200;
  unsigned homomorphism = 100;
  unsigned symbolic_max = 5;
};

struct Failure {
  sv_status status;
  std::string message;
};

// Owned C string from the library.
struct CStr {
  char* p = nullptr;
  ~CStr() { sv_string_free(p); }
};

void check(sv_status s, const char* p) {
  if (s != SV_OK && s != SV_VERIFY_FAILED) throw Failure{s, p ? p : sv_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{SV_USAGE, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json int_list(const std::string& csv, const char* what) {
  json out = json::array();
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Failure{SV_USAGE, std::string("empty entry in ") + what};
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string descriptor(const Options& o, const char* fallback_sigma) {
  if (!o.valuation_file.empty()) return read_file(o.valuation_file);
  json d = json::object();
  if (!o.form.empty()) d["form"] = o.form;
  if (!o.sigma.empty()) d["sigma"] = int_list(o.sigma, "--sigma");
  else if (!o.f.empty()) d["choose_sigma"] = {{"f", o.f}, {"i_max", o.i_max}};
  if (!o.tau.empty()) d["tau"] = int_list(o.tau, "--tau");
  else if (!o.g.empty()) d["choose_tau"] = {{"g", o.g}, {"i_max", o.i_max}};
  if (!d.contains("sigma") && !d.contains("tau") && !d.contains("choose_sigma") && !d.contains("choose_tau"))
    d["sigma"] = int_list(fallback_sigma, "default sigma");
  return d.dump();
}

struct Valuation {
  sv_valuation* v = nullptr;
  explicit Valuation(const std::string& desc) {
    sv_status s = sv_valuation_from_json(desc.c_str(), &v);
    check(s, nullptr);
  }
  ~Valuation() { sv_valuation_free(v); }
};

sv_limits limits(const Options& o) { return sv_limits{o.max_states, o.threads}; }

std::string approx_of(const Options& o, const std::string& exact) {
  if (!o.approx) return "";
  CStr s;
  if (sv_approx(exact.c_str(), 12, &s.p) != SV_OK) return "";
  return "  ~ " + std::string(s.p) + " (approximate)";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string str(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

// ---------------------------------------------------------------- output

class Output {
 public:
  explicit Output(const Options& o) : opts_(o) {}
  std::ostream& stream() { return buf_; }
  void flush() {
    if (opts_.out.empty()) {
      std::cout << buf_.str();
      return;
    }
    std::ofstream f(opts_.out);
    if (!f) throw Failure{SV_USAGE, "cannot write '" + opts_.out + "'"};
    f << buf_.str();
  }

 private:
  const Options& opts_;
  std::ostringstream buf_;
};

// ------------------------------------------------------------- commands

std::vector<std::string> polys(const Options& o) {
  std::vector<std::string> out;
  if (!o.poly.empty()) out.push_back(o.poly);
  if (!o.poly_file.empty()) {
    std::istringstream in(read_file(o.poly_file));
    std::string line;
    while (std::getline(in, line)) {
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      out.push_back(line);
    }
  }
  if (out.empty()) throw Failure{SV_USAGE, "give --poly or --poly-file"};
  return out;
}

int cmd_valuate(const Options& o, bool expand_only) {
  Valuation v(descriptor(o, "2,5"));
  Output out(o);
  json all = json::array();
  sv_status worst = SV_OK;
  for (const auto& p : polys(o)) {
    CStr r;
    sv_status s = expand_only ? sv_expand(v.v, p.c_str(), &r.p) : sv_valuate(v.v, p.c_str(), &r.p);
    check(s, nullptr);
    if (s != SV_OK) worst = s;
    all.push_back(json::parse(r.p));
  }
  const char* terms_key = expand_only ? "terms" : "expansion";
  if (o.format == "json") {
    out.stream() << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  } else if (o.format == "csv") {
    out.stream() << "poly,term,coeff,value" << (expand_only ? "" : ",witness") << "\n";
    for (const auto& r : all)
      for (std::size_t k = 0; k < r[terms_key].size(); ++k) {
        const auto& t = r[terms_key][k];
        out.stream() << csv_field(str(r["poly"])) << ',' << csv_field(str(t["term"])) << ',' << csv_field(str(t["coeff"]))
                     << ',' << csv_field(t["value"].is_null() ? "" : str(t["value"]));
        if (!expand_only) out.stream() << ',' << (k == r["witness_index"].get<std::size_t>() ? "true" : "false");
        out.stream() << "\n";
      }
  } else {
    for (const auto& r : all) {
      if (!expand_only) {
        out.stream() << str(r["value"]) << approx_of(o, str(r["value"])) << "\n";
        out.stream() << "witness: " << str(r["witness"]) << "\n";
      } else {
        out.stream() << str(r["poly"]) << "\n";
      }
      out.stream() << "expansion (" << r[terms_key].size() << " terms):\n";
      for (const auto& t : r[terms_key])
        out.stream() << "  " << str(t["term"]) << "    " << (t["value"].is_null() ? "?" : str(t["value"])) << "\n";
    }
  }
  out.flush();
  return exit_code(worst);
}

int cmd_tilde(const Options& o) {
  Valuation v(descriptor(o, "2,5"));
  json req;
  if (!o.lambdas.empty()) {
    req["lambdas"] = o.lambdas;
  } else if (!o.lambda_max.empty()) {
    req["grid"] = {{"step", o.grid_step.empty() ? "1" : o.grid_step}, {"max", o.lambda_max}};
  } else {
    throw Failure{SV_USAGE, "give --lambda or --lambda-max"};
  }
  const sv_limits lim = limits(o);
  CStr r;
  sv_status s = sv_tilde(v.v, req.dump().c_str(), &lim, &r.p);
  check(s, nullptr);
  const json res = json::parse(r.p);
  Output out(o);
  if (o.format == "json") {
    out.stream() << res.dump(2) << "\n";
  } else if (o.format == "csv") {
    out.stream() << "lambda,tilde,witness\n";
    for (const auto& e : res["entries"])
      out.stream() << csv_field(str(e["lambda"])) << ',' << csv_field(e["tilde"].is_null() ? "" : str(e["tilde"])) << ','
                   << (e["witness"].is_null() ? "" : str(e["witness"])) << "\n";
  } else {
    for (const auto& e : res["entries"]) {
      if (e["tilde"].is_null()) {
        out.stream() << str(e["lambda"]) << ": not in projected semigroup\n";
      } else {
        out.stream() << str(e["tilde"]) << ", witness " << str(e["witness"]) << approx_of(o, str(e["tilde"])) << "\n";
      }
    }
  }
  out.flush();
  return exit_code(s);
}

int cmd_count(const Options& o) {
  Valuation v(descriptor(o, "2,5"));
  const sv_limits lim = limits(o);
  CStr r;
  sv_status s = sv_box_count(v.v, o.y1.c_str(), o.y2.c_str(), &lim, &r.p);
  check(s, nullptr);
  const json res = json::parse(r.p);
  Output out(o);
  if (o.format == "json") {
    out.stream() << res.dump(2) << "\n";
  } else if (o.format == "csv") {
    out.stream() << "y1,y2,count,bound,pass\n"
                 << str(res["y1"]) << ',' << str(res["y2"]) << ',' << res["count"] << ',' << str(res["bound"]) << ','
                 << (res["pass"].get<bool>() ? "true" : "false") << "\n";
  } else {
    out.stream() << "count " << res["count"] << ", bound " << str(res["bound"]) << ", "
                 << (res["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
  }
  out.flush();
  return exit_code(s);
}

int cmd_example3(const Options& o) {
  json req;
  req["r"] = o.r;
  req["y1"] = o.y1;
  req["d"] = o.d;
  if (!o.y2_list.empty()) {
    req["y2"] = o.y2_list;
  } else {
    req["y2_max"] = o.y2_max;
  }
  CStr r;
  sv_status s = sv_example3(req.dump().c_str(), &r.p);
  check(s, nullptr);
  const json res = json::parse(r.p);
  Output out(o);
  if (o.format == "json") {
    out.stream() << res.dump(2) << "\n";
  } else if (o.format == "csv") {
    out.stream() << "y2,lower,count,claimed,exceeds\n";
    for (const auto& row : res["rows"])
      out.stream() << str(row["y2"]) << ',' << str(row["lower"]) << ',' << str(row["count"]) << ',' << str(row["claimed"])
                   << ',' << (row["exceeds"].get<bool>() ? "true" : "false") << "\n";
  } else {
    out.stream() << "r = " << res["r"] << ", y1 = " << str(res["y1"]) << ", d = " << str(res["d"]) << "\n";
    out.stream() << "y2  lower  count  claimed\n";
    for (const auto& row : res["rows"])
      out.stream() << str(row["y2"]) << "  " << str(row["lower"]) << "  " << str(row["count"]) << "  "
                   << str(row["claimed"]) << (row["exceeds"].get<bool>() ? "  <- lower bound exceeds claim" : "") << "\n";
    out.stream() << (res["first_crossing"].is_null() ? "no crossing in the table\n"
                                                     : "first crossing at y2 = " + str(res["first_crossing"]) + "\n");
  }
  out.flush();
  return exit_code(s);
}

int cmd_wild(const Options& o) {
  json req;
  req["kind"] = o.kind;
  if (!o.f.empty()) req["f"] = o.f;
  if (!o.g.empty()) req["g"] = o.g;
  req["a"] = o.a;
  if (!o.a2.empty()) req["a2"] = o.a2;
  req["c"] = o.c;
  req["N"] = o.N;
  if (!o.weights_file.empty()) req["valuation"] = json::parse(read_file(o.weights_file));
  const sv_limits lim = limits(o);
  CStr r;
  sv_status s = sv_wild(req.dump().c_str(), &lim, &r.p);
  check(s, nullptr);
  const json res = json::parse(r.p);
  Output out(o);
  if (o.format == "json") {
    out.stream() << res.dump(2) << "\n";
  } else if (o.format == "csv") {
    out.stream() << "n,i,chain,lambda,witness,lhs,rhs,tilde,ok\n";
    for (const auto& row : res["rows"])
      out.stream() << str(row["n"]) << ',' << row["i"] << ',' << str(row["chain"]) << ',' << csv_field(str(row["lambda"]))
                   << ',' << str(row["witness"]) << ',' << str(row["lhs"]) << ',' << str(row["rhs"]) << ','
                   << csv_field(row["tilde"].is_null() ? "" : str(row["tilde"])) << ','
                   << (row["ok"].get<bool>() ? "true" : "false") << "\n";
  } else {
    const auto& p = res["params"];
    out.stream() << "kind " << str(res["kind"]) << ", a = " << str(p["a"]) << ", c = " << str(p["c"]) << ", e = "
                 << str(p["e"]) << ", n0 = " << str(p["n0"]) << ", N = " << str(p["N"]) << "\n";
    std::size_t skipped = 0;
    for (const auto& row : res["rows"])
      for (const auto& [k, st] : row["checks"].items()) skipped += st == "skipped";
    out.stream() << res["rows"].size() << " rows, " << skipped << " tilde checks skipped at the state cap\n";
    if (res["valid"].get<bool>()) {
      out.stream() << "certificate valid\n";
    } else {
      out.stream() << "certificate INVALID, first bad n = " << str(res["first_bad"]) << "\n";
      for (const auto& row : res["rows"]) {
        if (row["ok"].get<bool>()) continue;
        out.stream() << "  n = " << str(row["n"]) << " (" << str(row["chain"]) << ", i = " << row["i"] << "):";
        for (const auto& [k, st] : row["checks"].items())
          if (st == "fail") out.stream() << " " << k;
        out.stream() << "\n";
        break;
      }
    }
  }
  out.flush();
  return exit_code(s);
}

int cmd_selftest(const Options& o) {
  Valuation v(descriptor(o, "2,5,7,9,11,13,15"));
  json req{{"seed", o.seed}, {"roundtrip", o.roundtrip}, {"homomorphism", o.homomorphism},
           {"symbolic_max", o.symbolic_max}};
  CStr r;
  sv_status s = sv_selftest(v.v, req.dump().c_str(), &r.p);
  check(s, nullptr);
  const json res = json::parse(r.p);
  Output out(o);
  if (o.format == "json") {
    out.stream() << res.dump(2) << "\n";
  } else if (o.format == "csv") {
    out.stream() << "name,trials,passed,ok\n";
    for (const auto& c : res["checks"])
      out.stream() << str(c["name"]) << ',' << c["trials"] << ',' << c["passed"] << ','
                   << (c["ok"].get<bool>() ? "true" : "false") << "\n";
  } else {
    for (const auto& c : res["checks"]) {
      out.stream() << (c["ok"].get<bool>() ? "ok   " : "FAIL ") << str(c["name"]) << " " << c["passed"] << "/"
                   << c["trials"];
      if (!c["first_failure"].is_null()) out.stream() << "  first failure: " << str(c["first_failure"]);
      out.stream() << "\n";
    }
  }
  out.flush();
  return exit_code(s);
}

void add_valuation_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--sigma", o.sigma, "sigma weights, comma separated (index 1 first)");
  cmd->add_option("--tau", o.tau, "tau weights, comma separated");
  cmd->add_option("--form", o.form, "P3, Q3 or Combined5")->check(CLI::IsMember({"P3", "Q3", "Combined5"}));
  cmd->add_option("--valuation", o.valuation_file, "valuation descriptor (JSON file)");
  cmd->add_option("--f", o.f, "decreasing function descriptor used to choose sigma");
  cmd->add_option("--g", o.g, "increasing function descriptor used to choose tau");
  cmd->add_option("--i-max", o.i_max, "number of weights to choose from --f/--g")->check(CLI::Range(1, 62));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact rank 2 valuations, value semigroups and tilde certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(sv_version()));
  Options o;
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("--out", o.out, "write output to FILE");
  app.add_option("--max-states", o.max_states, "search/knapsack state cap (default 1e6, env SEMIVAL_MAX_STATES)");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 256));
  app.add_flag("--approx", o.approx, "append a decimal rendering, marked approximate");

  auto* valuate = app.add_subcommand("valuate", "value of a polynomial, with expansion and witness");
  auto* expand = app.add_subcommand("expand", "canonical expansion of a polynomial");
  for (auto* cmd : {valuate, expand}) {
    add_valuation_options(cmd, o);
    cmd->add_option("--poly", o.poly, "polynomial text");
    cmd->add_option("--poly-file", o.poly_file, "file with one polynomial per line");
  }

  auto* tilde = app.add_subcommand("tilde", "tilde values in the generated sub-semigroup");
  add_valuation_options(tilde, o);
  tilde->add_option("--lambda", o.lambdas, "first coordinate (repeatable)");
  tilde->add_option("--lambda-max", o.lambda_max, "grid upper end");
  tilde->add_option("--grid-step", o.grid_step, "grid step (default 1)");

  auto* count = app.add_subcommand("count", "pseudo-box count against the growth bound");
  add_valuation_options(count, o);
  count->add_option("--y1", o.y1, "level 1 size")->required();
  count->add_option("--y2", o.y2, "level 2 size")->required();

  auto* ex3 = app.add_subcommand("example3", "staircase contradiction table");
  ex3->add_option("--r", o.r, "r = s - 2")->check(CLI::Range(1, 64));
  ex3->add_option("--y1", o.y1, "fixed y1")->default_val("64");
  ex3->add_option("--d", o.d, "claimed constant");
  ex3->add_option("--y2-max", o.y2_max, "largest y2 (rows at 1, 2, 4, ... and y2-max)");
  ex3->add_option("--y2", o.y2_list, "explicit y2 values (repeatable)");

  auto* wild = app.add_subcommand("wild", "wild tilde certificate");
  wild->add_option("--kind", o.kind, "decreasing, increasing or both")
      ->check(CLI::IsMember({"decreasing", "increasing", "both"}));
  wild->add_option("--f", o.f, "decreasing function descriptor (default neg_linear)");
  wild->add_option("--g", o.g, "increasing function descriptor (default linear)");
  wild->add_option("--a", o.a, "scale of omega(x)");
  wild->add_option("--a2", o.a2, "scale of omega(u) (five variable form; default a*sqrt2)");
  wild->add_option("--c", o.c, "scale of omega(z)");
  wild->add_option("--N", o.N, "largest n");
  wild->add_option("--weights", o.weights_file, "valuation descriptor to certify instead of chosen weights");

  auto* self = app.add_subcommand("selftest", "seeded property checks");
  add_valuation_options(self, o);
  self->add_option("--seed", o.seed, "random seed");
  self->add_option("--roundtrip", o.roundtrip, "round trip trials");
  self->add_option("--homomorphism", o.homomorphism, "homomorphism trials");
  self->add_option("--symbolic-max", o.symbolic_max, "largest index for symbolic key identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*valuate) return cmd_valuate(o, false);
    if (*expand) return cmd_valuate(o, true);
    if (*tilde) return cmd_tilde(o);
    if (*count) return cmd_count(o);
    if (*ex3) return cmd_example3(o);
    if (*wild) return cmd_wild(o);
    if (*self) return cmd_selftest(o);
  } catch (const Failure& f) {
    std::cerr << "semival: " << sv_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  } catch (const json::exception& e) {
    std::cerr << "semival: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
