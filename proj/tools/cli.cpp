#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trilin/classify.hpp"
#include "trilin/errors.hpp"
#include "trilin/invariants.hpp"
#include "trilin/jet.hpp"
#include "trilin/linearize.hpp"
#include "trilin/parse.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin::cli {

namespace {

using nlohmann::json;

struct Config {
  std::uint64_t seed = 20240611;
  int samples = 12;
  std::string format = "text";
  std::string params;
  std::string file;
  std::string ode;

  std::vector<std::string> param_list() const {
    std::vector<std::string> out;
    std::stringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  ZeroTestOptions zero() const {
    ZeroTestOptions z;
    z.seed = seed;
    z.samples = samples;
    return z;
  }

  bool json_output() const { return format == "json"; }

  std::string show(const Expr& e) const { return format == "latex" ? to_latex(e) : to_infix(e); }
};

json expr_json(const Expr& e) { return {{"infix", to_infix(e)}, {"latex", to_latex(e)}}; }

std::string read_input(const Config& cfg) {
  if (!cfg.file.empty()) {
    std::ifstream in(cfg.file);
    if (!in) throw Error("cannot read '" + cfg.file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
  }
  if (cfg.ode.empty()) throw Error("no equation given");
  return cfg.ode;
}

JetContext context(const Config& cfg) {
  return JetContext(parse_ode(read_input(cfg), cfg.param_list()), cfg.param_list());
}

json report_json(const InvariantReport& r) {
  json j;
  j["scaling"] = to_string(r.scaling);
  j["invariants"] = json::object();
  for (const auto& [name, e] : r.fields()) {
    json item = expr_json(e);
    auto it = r.zero_flags.find(name);
    if (it != r.zero_flags.end()) item["zero"] = to_string(it->second);
    j["invariants"][name] = item;
  }
  return j;
}

void print_report(const Config& cfg, const InvariantReport& r, std::ostream& out) {
  out << "scaling: " << to_string(r.scaling) << "\n";
  for (const auto& [name, e] : r.fields()) {
    out << "  " << name << " = " << cfg.show(e);
    auto it = r.zero_flags.find(name);
    if (it != r.zero_flags.end()) out << "  [" << to_string(it->second) << "]";
    out << "\n";
  }
}

int verdict_code(Verdict v) {
  if (v == Verdict::NotLinearizable) return kNotLinearizable;
  if (v == Verdict::Indeterminate) return kIndeterminate;
  return kOk;
}

json class_json(const SymmetryClass& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["summary"] = describe(c);
  if (c.verdict == Verdict::Five) j["s"] = expr_json(c.s);
  if (c.verdict == Verdict::Four) j["K"] = expr_json(c.K);
  j["failing"] = c.failing;
  j["undecided"] = c.undecided;
  j["report"] = report_json(c.report);
  return j;
}

int cmd_classify(const Config& cfg, std::ostream& out) {
  JetContext ctx = context(cfg);
  SymmetryClass c = classify(ctx, cfg.zero());
  if (cfg.json_output()) {
    out << class_json(c).dump(2) << "\n";
  } else {
    std::string summary = describe(c);
    if (cfg.format == "latex") {
      if (c.verdict == Verdict::Five) summary = "five point symmetries; s = " + to_latex(c.s);
      if (c.verdict == Verdict::Four) summary = "four point symmetries; K = " + to_latex(c.K);
    }
    out << summary << "\n";
    print_report(cfg, c.report, out);
  }
  return verdict_code(c.verdict);
}

int cmd_invariants(const Config& cfg, const std::string& scaling, std::ostream& out) {
  JetContext ctx = context(cfg);
  JScaling s = JScaling::LaguerreForsyth;
  if (scaling == "yumaguzhin") {
    s = JScaling::Yumaguzhin;
  } else if (scaling != "laguerre" && scaling != "laguerre-forsyth" && scaling != "lf") {
    throw Error("unknown scaling '" + scaling + "'");
  }
  InvariantReport r = compute_report(ctx, s, cfg.zero());
  if (cfg.json_output()) {
    out << report_json(r).dump(2) << "\n";
  } else {
    print_report(cfg, r, out);
  }
  return kOk;
}

std::string sign_text(int sign) { return sign < 0 ? "-" : "+"; }

void print_linearization(const Config& cfg, const LinearizationResult& r, std::ostream& out) {
  if (cfg.json_output()) {
    json j;
    j["summary"] = describe(r);
    j["verdict"] = to_string(r.verdict);
    j["target"] = to_string(r.target);
    j["phi"] = expr_json(r.transformation.phi);
    j["psi"] = expr_json(r.transformation.psi);
    j["fbar"] = expr_json(r.fbar);
    j["explicit"] = r.explicit_target;
    j["status"] = to_string(r.verification.status);
    j["auxiliaries"] = json::object();
    for (const auto& [k, v] : r.auxiliaries) j["auxiliaries"][k] = expr_json(v);
    j["alternates"] = json::object();
    for (const auto& [k, vs] : r.alternates) {
      for (const auto& v : vs) j["alternates"][k].push_back(expr_json(v));
    }
    if (r.target == Target::Five) j["s"] = expr_json(r.s);
    if (r.a) j["a"] = expr_json(*r.a);
    if (r.target == Target::Yumaguzhin) {
      j["sign"] = sign_text(r.sign);
      if (r.g) j["gbar"] = {{"value", expr_json(r.g->value)}, {"imaginary", r.g->imaginary}};
      if (r.g_other) {
        j["gbar_other_sign"] = {{"value", expr_json(r.g_other->value)}, {"imaginary", r.g_other->imaginary}};
      }
    }
    if (r.target == Target::LaguerreForsyth || r.target == Target::Yumaguzhin) j["K"] = expr_json(r.K);
    out << j.dump(2) << "\n";
    return;
  }
  out << describe(r) << "\n";
  out << "target: " << to_string(r.target) << "\n";
  out << "transformation: xbar = " << cfg.show(r.transformation.phi)
      << ", ubar = " << cfg.show(r.transformation.psi) << "\n";
  out << (r.explicit_target ? "canonical form: ubar''' = " : "canonical form pulled back: ")
      << cfg.show(r.fbar) << "\n";
  if (r.target == Target::Five) out << "s = " << cfg.show(r.s) << "\n";
  if (r.a) out << "a(xbar) = " << cfg.show(*r.a) << "\n";
  if (r.target == Target::Yumaguzhin) {
    out << "sign: " << sign_text(r.sign) << "\n";
    if (r.g) out << "gbar = " << (r.g->imaginary ? "i*(" + cfg.show(r.g->value) + ")" : cfg.show(r.g->value)) << "\n";
    if (r.g_other) {
      out << "gbar for sign " << sign_text(-r.sign) << " = "
          << (r.g_other->imaginary ? "i*(" + cfg.show(r.g_other->value) + ")" : cfg.show(r.g_other->value))
          << "\n";
    }
  }
  if (!r.auxiliaries.empty()) {
    out << "auxiliaries:\n";
    for (const auto& [k, v] : r.auxiliaries) out << "  " << k << " = " << cfg.show(v) << "\n";
  }
  for (const auto& [k, vs] : r.alternates) {
    for (const auto& v : vs) out << "alternate " << k << " = " << cfg.show(v) << "\n";
  }
  out << "status: " << to_string(r.verification.status) << "\n";
}

int status_code(VerifyStatus s) {
  if (s == VerifyStatus::Verified) return kOk;
  if (s == VerifyStatus::Refuted) return kNotLinearizable;
  return kIndeterminate;
}

struct LinearizeFlags {
  std::string target = "auto";
  std::string sign = "auto";
  int max_exp = 6;
  int budget = 20000;
  int degree = 4;
  int terms = 3;
  std::string residual;
};

LinearizeOptions linearize_options(const Config& cfg, const LinearizeFlags& f) {
  LinearizeOptions o;
  auto t = parse_target(f.target);
  if (!t) throw Error("unknown target '" + f.target + "'");
  o.target = *t;
  if (f.sign == "+" || f.sign == "plus") {
    o.sign = 1;
  } else if (f.sign == "-" || f.sign == "minus") {
    o.sign = -1;
  } else if (f.sign != "auto") {
    throw Error("unknown sign '" + f.sign + "'");
  }
  o.zero = cfg.zero();
  o.ansatz.zero = cfg.zero();
  o.ansatz.seed = cfg.seed;
  o.ansatz.max_exp = f.max_exp;
  o.ansatz.budget = f.budget;
  o.ansatz.degree = f.degree;
  o.ansatz.sum_terms = f.terms;
  return o;
}

int cmd_linearize(const Config& cfg, const LinearizeFlags& flags, std::ostream& out, std::ostream& err) {
  JetContext ctx = context(cfg);
  LinearizeOptions o = linearize_options(cfg, flags);
  try {
    LinearizationResult r = linearize(ctx, o);
    print_linearization(cfg, r, out);
    return status_code(r.verification.status);
  } catch (const AnsatzFailed& e) {
    std::string system = e.residual.to_json();
    if (!flags.residual.empty()) {
      std::ofstream f(flags.residual);
      f << system << "\n";
    }
    err << "ansatz failed for " << e.unknown << "; residual determining system follows\n";
    out << system << "\n";
    return kAnsatzFailed;
  }
}

int cmd_complete(const Config& cfg, const std::string& system_file, const std::vector<std::string>& sets,
                 std::ostream& out, std::ostream& err) {
  JetContext ctx = context(cfg);
  std::ifstream in(system_file);
  if (!in) throw Error("cannot read '" + system_file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  DeterminingSystem sys = DeterminingSystem::from_json(ss.str());
  Bindings values;
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw Error("expected name=expression, got '" + s + "'");
    values[s.substr(0, eq)] = parse(s.substr(eq + 1), cfg.param_list());
  }
  LinearizeOptions o;
  o.zero = cfg.zero();
  o.ansatz.zero = o.zero;
  o.ansatz.seed = cfg.seed;
  try {
    LinearizationResult r = complete(ctx, sys, values, o);
    print_linearization(cfg, r, out);
    return status_code(r.verification.status);
  } catch (const AnsatzFailed& e) {
    err << "ansatz failed for " << e.unknown << "; residual determining system follows\n";
    out << e.residual.to_json() << "\n";
    return kAnsatzFailed;
  }
}

std::string witness_text(const Point& w) {
  std::string out;
  for (const auto& [k, v] : w) {
    if (!out.empty()) out += ", ";
    out += k + " = " + v.get_str();
  }
  return out;
}

int cmd_verify(const Config& cfg, const std::string& phi, const std::string& psi, const std::string& fbar,
               std::ostream& out) {
  JetContext ctx = context(cfg);
  auto params = cfg.param_list();
  PointTransformation t(parse(phi, params), parse(psi, params));
  Expr fb = parse(fbar, barred_options(params));
  VerifyResult r = verify_transformation(ctx, t, fb, cfg.zero());
  if (cfg.json_output()) {
    json j;
    j["status"] = to_string(r.status);
    j["residual"] = expr_json(r.residual);
    if (r.witness) {
      j["witness"] = json::object();
      for (const auto& [k, v] : *r.witness) j["witness"][k] = v.get_str();
    }
    out << j.dump(2) << "\n";
  } else {
    out << to_string(r.status);
    if (r.witness) out << "; witness: " << witness_text(*r.witness);
    out << "\n";
  }
  return status_code(r.status);
}

int cmd_pushforward(const Config& cfg, const std::string& phi, const std::string& psi, std::ostream& out) {
  JetContext ctx = context(cfg);
  auto params = cfg.param_list();
  PointTransformation t(parse(phi, params), parse(psi, params));
  Expr fb = pushforward(ctx, t, cfg.zero());
  if (cfg.json_output()) {
    out << json{{"fbar", expr_json(fb)}}.dump(2) << "\n";
  } else {
    out << "ubar''' = " << cfg.show(fb) << "\n";
  }
  return kOk;
}

int cmd_linear(const Config& cfg, const std::vector<std::string>& coeffs, std::ostream& out) {
  auto params = cfg.param_list();
  std::vector<Expr> c;
  for (const auto& s : coeffs) c.push_back(parse(s, params));
  LinearClassification lc = classify_linear(c[0], c[1], c[2], c[3], params, cfg.zero());
  if (lc.verdict) {
    if (cfg.json_output()) {
      out << class_json(*lc.verdict).dump(2) << "\n";
    } else {
      out << describe(*lc.verdict) << "\n";
    }
    return verdict_code(lc.verdict->verdict);
  }
  const ConditionReport& r = *lc.conditions;
  if (cfg.json_output()) {
    json j;
    j["W"] = expr_json(r.W);
    j["W_numerator"] = expr_json(r.W_numerator);
    j["DxK"] = expr_json(r.DxK);
    j["DxK_identically_zero"] = r.dxk_identically_zero;
    j["thresholds"] = json::object();
    for (const auto& [p, v] : r.thresholds) j["thresholds"][p] = expr_json(v);
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "seven point symmetries where " << cfg.show(r.W_numerator) << " = 0\n";
  for (const auto& [p, v] : r.thresholds) out << "  " << p << " = " << cfg.show(v) << "\n";
  if (r.dxk_identically_zero) {
    out << "five point symmetries elsewhere (D_x K = 0 identically)\n";
  } else {
    out << "elsewhere five point symmetries iff D_x K = 0, four otherwise\n";
    out << "  D_x K = " << cfg.show(r.DxK) << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point linearization of third-order ODEs u''' = f(x, u, u', u'')", "trilin"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--seed", cfg.seed, "Seed for zero tests and witness search")->envname("TRILIN_SEED");
  app.add_option("--samples", cfg.samples, "Sample points of the numeric zero test")->envname("TRILIN_SAMPLES");
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "latex"}))
      ->envname("TRILIN_FORMAT");
  app.add_option("--params", cfg.params, "Comma-separated parameter names")->envname("TRILIN_PARAMS");
  app.add_option("--file", cfg.file, "Read the equation from a file")->envname("TRILIN_FILE");
  app.fallthrough();

  auto ode_arg = [&](CLI::App* sub) { sub->add_option("ode", cfg.ode, "u''' = f or the bare right-hand side"); };

  auto* classify_cmd = app.add_subcommand("classify", "Symmetry class and deciding invariants");
  ode_arg(classify_cmd);

  std::string scaling = "laguerre";
  auto* invariants_cmd = app.add_subcommand("invariants", "Relative invariants and K");
  ode_arg(invariants_cmd);
  invariants_cmd->add_option("--scaling", scaling, "laguerre or yumaguzhin")->envname("TRILIN_SCALING");

  LinearizeFlags lflags;
  auto* linearize_cmd = app.add_subcommand("linearize", "Construct and verify a linearizing transformation");
  ode_arg(linearize_cmd);
  linearize_cmd->add_option("--target", lflags.target, "auto, seven, five, laguerre or yumaguzhin")
      ->envname("TRILIN_TARGET");
  linearize_cmd->add_option("--sign", lflags.sign, "Yumaguzhin sign: +, - or auto")->envname("TRILIN_SIGN");
  linearize_cmd->add_option("--ansatz-max-exp", lflags.max_exp, "Largest monomial exponent")
      ->envname("TRILIN_ANSATZ_MAX_EXP");
  linearize_cmd->add_option("--ansatz-budget", lflags.budget, "Candidates screened per unknown")
      ->envname("TRILIN_ANSATZ_BUDGET");
  linearize_cmd->add_option("--ansatz-degree", lflags.degree, "Degree of the polynomial family")
      ->envname("TRILIN_ANSATZ_DEGREE");
  linearize_cmd->add_option("--ansatz-terms", lflags.terms, "Terms of the sum family")
      ->envname("TRILIN_ANSATZ_TERMS");
  linearize_cmd->add_option("--residual", lflags.residual, "Write the residual system here on failure");

  std::string system_file;
  std::vector<std::string> sets;
  auto* complete_cmd = app.add_subcommand("complete", "Finish a residual determining system");
  ode_arg(complete_cmd);
  complete_cmd->add_option("--system", system_file, "Residual system JSON")->required();
  complete_cmd->add_option("--set", sets, "name=expression for an open unknown");

  std::string phi;
  std::string psi;
  std::string fbar;
  auto* verify_cmd = app.add_subcommand("verify", "Check that (phi, psi) maps u''' = f to ubar''' = fbar");
  ode_arg(verify_cmd);
  verify_cmd->add_option("--phi", phi, "xbar as a function of x, u")->required();
  verify_cmd->add_option("--psi", psi, "ubar as a function of x, u")->required();
  verify_cmd->add_option("--fbar", fbar, "Target right-hand side in xbar, ubar, ubar', ubar''")->required();

  auto* push_cmd = app.add_subcommand("pushforward", "Transform u''' = f by (phi, psi)");
  ode_arg(push_cmd);
  push_cmd->add_option("--phi", phi, "xbar as a function of x, u")->required();
  push_cmd->add_option("--psi", psi, "ubar as a function of x, u")->required();

  std::vector<std::string> coeffs(4, "0");
  auto* linear_cmd = app.add_subcommand("linear", "Classify u''' = c1 u'' + c2 u' + c3 u + c4");
  for (int i = 0; i < 4; ++i) {
    std::string name = "--c" + std::to_string(i + 1);
    linear_cmd->add_option(name, coeffs[static_cast<std::size_t>(i)], "Coefficient in x and params");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*classify_cmd) return cmd_classify(cfg, out);
    if (*invariants_cmd) return cmd_invariants(cfg, scaling, out);
    if (*linearize_cmd) return cmd_linearize(cfg, lflags, out, err);
    if (*complete_cmd) return cmd_complete(cfg, system_file, sets, out, err);
    if (*verify_cmd) return cmd_verify(cfg, phi, psi, fbar, out);
    if (*push_cmd) return cmd_pushforward(cfg, phi, psi, out);
    if (*linear_cmd) return cmd_linear(cfg, coeffs, out);
  } catch (const SyntaxError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const NotLinearizable& e) {
    out << e.what() << "\n";
    return kNotLinearizable;
  } catch (const WrongBranch& e) {
    err << e.what() << "\n";
    return kNotLinearizable;
  } catch (const IndeterminateClass& e) {
    out << e.what() << "\n";
    return kIndeterminate;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kOtherError;
  }
  return kOtherError;
}

}  // namespace trilin::cli
