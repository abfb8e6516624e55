#include "homex/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "homex/dsl.hpp"
#include "homex/errors.hpp"
#include "homex/gorenstein.hpp"

namespace homex::cli {

namespace {

using nlohmann::json;

std::string field_name(Field f) { return f.is_rational() ? "Q" : "F" + std::to_string(f.q); }

std::optional<Status> status_from(const std::string& s) {
  if (s == "certified") return Status::Certified;
  if (s == "refuted") return Status::Refuted;
  if (s == "inconclusive") return Status::Inconclusive;
  return std::nullopt;
}

void render(std::ostringstream& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    const std::string key = j.is_object() ? it.key() : "-";
    const bool scalar_list = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); });
    if (v.is_primitive() || scalar_list || v.empty()) {
      out << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    } else {
      out << pad << key << ":\n";
      render(out, v, indent + 1);
    }
  }
}

// ---------------------------------------------------------------------------
// Command plumbing

struct Options {
  std::string field;
  std::uint64_t seed = kDefaultSeed;
  bool text = false;
  bool timing = false;
  int cutoff_resolution = kDefaultResolutionCutoff;
  int cutoff_tensor = BoundedCutoffs{}.tensor_cap;
  std::optional<Field> effective;  // the field the command ran over
};

struct Outcome {
  json result;
  std::optional<Status> status;
};

class Session {
 public:
  Session(const std::string& path, Options& o)
      : ws_(dsl::parse_file(path), o.field.empty() ? std::nullopt : std::optional<Field>(parse_field(o.field))) {
    o.effective = ws_.field();
  }

  const dsl::Workspace& ws() const { return ws_; }

  std::string pick(const std::string& given, const std::vector<std::string>& names, const std::string& what) const {
    if (!given.empty()) return given;
    if (names.size() == 1) return names.front();
    throw HomexError(ErrorCode::UnresolvedName,
                     names.empty() ? "the source declares no " + what : "several " + what + "s; choose one by name",
                     {{"kind", what}});
  }
  FDModule module(const std::string& name) const { return ws_.module(pick(name, ws_.module_names(), "module")); }
  Extension extension(const std::string& name) const {
    return ws_.extension(pick(name, ws_.extension_names(), "extension"));
  }
  AlgPtr algebra(const std::string& name) const {
    const std::string n = pick(name, ws_.algebra_names(), "algebra");
    for (const char* wrap : {"op", "env"}) {
      const std::string w = wrap;
      if (n.size() > w.size() + 2 && n.rfind(w + "(", 0) == 0 && n.back() == ')')
        return ws_.algebra(dsl::AlgebraRef{n.substr(w.size() + 1, n.size() - w.size() - 2), w});
    }
    return ws_.algebra(n);
  }

 private:
  dsl::Workspace ws_;
};

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    const int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
    if (lo >= 0 && lo <= hi && hi <= 1000) return {lo, hi};
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("--range", "expected a..b with 0 <= a <= b");
}

json algebra_info(const AlgPtr& a) {
  json idempotents = json::array(), projectives = json::array(), cartan = json::array();
  for (int v = 0; v < a->vertex_count(); ++v) {
    idempotents.push_back(a->label(a->idempotent_index(v)));
    projectives.push_back(a->left_projective_basis(v).size());
    json row = json::array();
    for (int w = 0; w < a->vertex_count(); ++w) row.push_back(a->peirce(v, w).size());
    cartan.push_back(row);
  }
  json labels = json::array();
  for (int b = 0; b < a->dim(); ++b) labels.push_back(a->label(b));
  return {{"dim", a->dim()},
          {"field", field_name(a->field())},
          {"vertices", a->vertex_names()},
          {"idempotents", idempotents},
          {"basis", labels},
          {"radical_layers", a->radical_layers()},
          {"loewy_length", a->loewy_length()},
          {"projective_dims", projectives},
          {"peirce_dims", cartan}};
}

// The first argument of Tor is a right module; a left module over an algebra
// equal to its opposite is accepted as one.
FDModule as_right_module(const FDModule& x, const AlgPtr& a) {
  const AlgPtr op = opposite(a);
  if (same_algebra(x.algebra(), op)) return retarget(x, op);
  throw HomexError(ErrorCode::AlgebraMismatch, "the first Tor argument must be a module over the opposite algebra");
}

Outcome homology(const HomologyDims& h, int lo, int hi) {
  json dims = json::array();
  bool known = true;
  for (int i = lo; i <= hi; ++i) {
    const int d = h.dims.at(static_cast<std::size_t>(i));
    if (d < 0) known = false;
    dims.push_back(d < 0 ? json(nullptr) : json(d));
  }
  json r{{"range", {lo, hi}}, {"dims", dims}, {"detail", h.to_json()}};
  return {r, known ? Status::Certified : Status::Inconclusive};
}

Outcome verdict_outcome(const Verdict& v, json extra = json::object()) {
  extra["verdict"] = v.to_json();
  return {extra, v.status};
}

}  // namespace

// ---------------------------------------------------------------------------
// Report

json Report::to_json() const {
  json j{{"schema", kSchema}, {"command", command}, {"config", config}, {"result", result}};
  j["status"] = status ? json(homex::to_string(*status)) : json(nullptr);
  if (seconds) j["seconds"] = *seconds;
  return j;
}

Report Report::from_json(const json& j) {
  if (j.value("schema", "") != kSchema)
    throw HomexError(ErrorCode::ParseError, "report schema is not " + std::string(kSchema));
  Report r;
  r.command = j.at("command").get<std::vector<std::string>>();
  r.config = j.at("config");
  r.result = j.at("result");
  if (j.at("status").is_string()) r.status = status_from(j.at("status").get<std::string>());
  if (j.contains("seconds")) r.seconds = j.at("seconds").get<double>();
  return r;
}

std::string Report::to_text() const {
  std::ostringstream out;
  std::string cmd;
  for (const auto& c : command) cmd += (cmd.empty() ? "" : " ") + c;
  out << "homex " << cmd << "\n";
  out << "status: " << (status ? homex::to_string(*status) : "ok") << "\n";
  render(out, config, 0);
  render(out, result, 0);
  if (seconds) out << "seconds: " << *seconds << "\n";
  return out.str();
}

int report_exit_code(const Report& r) { return r.status ? exit_code(*r.status) : 0; }

// ---------------------------------------------------------------------------
// Command line

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact homological algebra over finite-dimensional quiver algebras"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--field", o.field, "Override the field: Q or F<p>");
  app.add_option("--seed", o.seed, "Seed for randomized checks");
  auto* json_flag = app.add_flag("--json", "JSON report (default)");
  app.add_flag("--text", o.text, "Plain text report")->excludes(json_flag);
  app.add_flag("--timing", o.timing, "Record wall time in the report");
  app.add_option("--cutoff-resolution", o.cutoff_resolution, "Maximal resolution length")->check(CLI::Range(1, 10000));
  app.add_option("--cutoff-tensor", o.cutoff_tensor, "Maximal tensor power")->check(CLI::Range(1, 1000));

  std::string file, module, m_name, n_name, ext_name, alg_name, range = "0..5", side = "left", which, pos_name;
  int bound = 4, window = 5, level = -1;
  std::function<Outcome()> action;

  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto with_file = [&](CLI::App* s) { s->add_option("file", file, "Source file (.hx)")->required()->check(CLI::ExistingFile); };
  auto with_module = [&](CLI::App* s) {
    s->add_option("name", pos_name, "Module name");
    s->add_option("--module", module, "Module name");
  };

  CLI::App* info = sub("info", "Dimensions, idempotents and radical layers of the algebras");
  with_file(info);
  info->add_option("algebra", alg_name, "Algebra name, op(name) or env(name); all when omitted");
  info->callback([&] {
    action = [&] {
      Session s(file, o);
      json algs = json::object();
      if (alg_name.empty())
        for (const auto& n : s.ws().algebra_names()) algs[n] = algebra_info(s.algebra(n));
      else
        algs[alg_name] = algebra_info(s.algebra(alg_name));
      return Outcome{{{"algebras", algs}}, std::nullopt};
    };
  });

  CLI::App* resolve = sub("resolve", "Minimal projective resolution");
  with_file(resolve);
  with_module(resolve);
  resolve->callback([&] {
    action = [&] {
      Session s(file, o);
      const Resolution r = minimal_resolution(s.module(module.empty() ? pos_name : module), o.cutoff_resolution);
      return verdict_outcome(projective_dimension(r), {{"resolution", r.to_json()}});
    };
  });

  CLI::App* pd = sub("pd", "Projective dimension");
  with_file(pd);
  with_module(pd);
  pd->callback([&] {
    action = [&] {
      Session s(file, o);
      const Verdict v = projective_dimension(s.module(module.empty() ? pos_name : module), o.cutoff_resolution);
      json r = json::object();
      if (v.is_certified()) r["pd"] = v.value();
      return verdict_outcome(v, r);
    };
  });

  for (const std::string name : {"tor", "ext"}) {
    CLI::App* h = sub(name, name == "tor" ? "Dimensions of Tor_i(M, N)" : "Dimensions of Ext^i(M, N)");
    with_file(h);
    h->add_option("--m", m_name, "First argument")->required();
    h->add_option("--n", n_name, "Second argument")->required();
    h->add_option("--range", range, "Degrees a..b");
    h->callback([&, name] {
      action = [&, name] {
        Session s(file, o);
        const auto [lo, hi] = parse_range(range);
        const FDModule n = s.module(n_name);
        if (name == "tor") return homology(tor(as_right_module(s.module(m_name), n.algebra()), n, hi, o.cutoff_resolution), lo, hi);
        return homology(ext(s.module(m_name), n, hi, o.cutoff_resolution), lo, hi);
      };
    });
  }

  auto cutoffs = [&] {
    BoundedCutoffs c;
    c.resolution = o.cutoff_resolution;
    c.tensor_cap = o.cutoff_tensor;
    return c;
  };
  auto tor_side = [&] { return side == "right" ? TorSide::Right : TorSide::Left; };
  auto bounded = [&](const Extension& e) { return check_bounded(e, cutoffs(), tor_side()); };

  CLI::App* cb = sub("check-bounded", "Whether an extension is bounded");
  with_file(cb);
  cb->add_option("extension", ext_name, "Extension name");
  cb->add_option("--side", side, "Tor side")->check(CLI::IsMember({"left", "right"}));
  cb->callback([&] {
    action = [&] {
      Session s(file, o);
      const BoundedReport r = bounded(s.extension(ext_name));
      json j = r.to_json();
      if (r.nilpotency.is_certified()) j["p"] = r.p();
      if (r.bimodule_pd.is_certified()) j["pd"] = r.bimodule_pd.value();
      return Outcome{j, r.overall.status};
    };
  });

  CLI::App* verify = sub("verify", "Check a consequence of boundedness");
  verify->add_option("check", which, "tor-consequences, sandwich-pd, bar-complex or ehi")
      ->required()
      ->check(CLI::IsMember({"tor-consequences", "sandwich-pd", "bar-complex", "ehi"}));
  with_file(verify);
  verify->add_option("extension", ext_name, "Extension name");
  verify->add_option("--window", window, "Degrees past the threshold for ehi")->check(CLI::Range(1, 100));
  verify->add_option("--side", side, "Tor side")->check(CLI::IsMember({"left", "right"}));
  verify->callback([&] {
    action = [&] {
      Session s(file, o);
      const Extension e = s.extension(ext_name);
      const BoundedReport r = bounded(e);
      Verdict v;
      if (which == "tor-consequences")
        v = verify_tor_consequences(e, r, o.cutoff_resolution);
      else if (which == "sandwich-pd")
        v = verify_sandwich_pd(e, r, o.cutoff_resolution);
      else if (which == "bar-complex")
        v = relative_bar_exactness(e, r);
      else
        v = ehi_dimension_test(e, r, {}, window);
      return verdict_outcome(v, {{"check", which}, {"bounded", r.overall.to_json()}});
    };
  });

  CLI::App* gp = sub("gproj", "Gorenstein projectivity through a bound");
  with_file(gp);
  with_module(gp);
  gp->add_option("--bound", bound, "Degree bound")->check(CLI::Range(1, 1000));
  gp->callback([&] {
    action = [&] {
      Session s(file, o);
      const GpWitness w = gproj_check(s.module(module.empty() ? pos_name : module), bound);
      return Outcome{w.to_json(), w.verdict.status};
    };
  });

  CLI::App* gor = sub("gorenstein", "Self-injective dimensions on both sides");
  with_file(gor);
  gor->add_option("algebra", alg_name, "Algebra name");
  gor->add_option("--bound", bound, "Degree bound")->check(CLI::Range(0, 1000));
  gor->callback([&] {
    action = [&] {
      Session s(file, o);
      const Verdict v = gorenstein_check(s.algebra(alg_name), bound);
      json r = json::object();
      if (v.is_certified()) r["gorenstein_dimension"] = v.value();
      return verdict_outcome(v, r);
    };
  });

  CLI::App* smt = sub("verify-smt", "Check a certificate for a singular equivalence of Morita type with level");
  smt->add_option("certificate", file, "Certificate JSON")->required()->check(CLI::ExistingFile);
  smt->add_option("--level", level, "Override the level in the certificate");
  smt->callback([&] {
    action = [&] {
      std::ifstream in(file);
      json c;
      try {
        c = json::parse(in);
      } catch (const json::exception& e) {
        throw HomexError(ErrorCode::ParseError, std::string("certificate: ") + e.what());
      }
      for (const char* key : {"source", "A", "B", "M", "N", "level"})
        if (!c.contains(key)) throw HomexError(ErrorCode::ParseError, std::string("certificate lacks \"") + key + "\"");
      dsl::Workspace ws(dsl::parse(c.at("source").get<std::string>()),
                        o.field.empty() ? std::nullopt : std::optional<Field>(parse_field(o.field)));
      o.effective = ws.field();
      const int l = level >= 0 ? level : c.at("level").get<int>();
      const Verdict v = smt_level_verify(ws.algebra(c.at("A").get<std::string>()), ws.algebra(c.at("B").get<std::string>()),
                                         ws.module(c.at("M").get<std::string>()), ws.module(c.at("N").get<std::string>()),
                                         l, o.seed);
      return verdict_outcome(v, {{"level", l}});
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "homex: " << e.what() << "\n";
    return 1;
  }

  Report report;
  report.command = args;
  try {
    const auto start = std::chrono::steady_clock::now();
    const Outcome res = action();
    const auto stop = std::chrono::steady_clock::now();
    report.result = res.result;
    report.status = res.status;
    if (o.timing) report.seconds = std::chrono::duration<double>(stop - start).count();
    report.config = {{"field", o.effective ? json(field_name(*o.effective)) : json(nullptr)},
                     {"seed", o.seed},
                     {"cutoffs", {{"resolution", o.cutoff_resolution}, {"tensor", o.cutoff_tensor}}}};
  } catch (const CLI::ValidationError& e) {
    err << "homex: " << e.what() << "\n";
    return 1;
  } catch (const HomexError& e) {
    err << "homex: " << e.what() << "\n";
    if (!e.detail().is_null()) err << e.detail().dump() << "\n";
    return 1;
  } catch (const ArithmeticError& e) {
    err << "homex: " << e.what() << "\n";
    return 1;
  }
  out << (o.text ? report.to_text() : report.to_json().dump(2) + "\n");
  return report_exit_code(report);
}

}  // namespace homex::cli
