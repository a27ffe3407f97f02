#include "trilin/print.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "trilin/errors.hpp"

namespace trilin {

namespace {

struct Parts {
  bool negative = false;
  Rational coef = 1;  // absolute value
  std::vector<Expr> num;
  std::vector<Expr> den;
};

Parts split(const Expr& e) {
  Parts parts;
  auto add_factor = [&](const Expr& f) {
    if (f.is(Kind::Power) && sgn(f.exponent()) < 0) {
      parts.den.push_back(make_power(f.base(), -f.exponent()));
    } else {
      parts.num.push_back(f);
    }
  };
  if (e.is(Kind::Product)) {
    for (const auto& f : e.operands()) {
      if (f.is_rational()) {
        parts.coef = f.value();
      } else {
        add_factor(f);
      }
    }
  } else if (e.is_rational()) {
    parts.coef = e.value();
  } else {
    add_factor(e);
  }
  if (sgn(parts.coef) < 0) {
    parts.negative = true;
    parts.coef = -parts.coef;
  }
  return parts;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

Rational display_degree(const Expr& t) {
  Rational d = 0;
  auto factor_degree = [](const Expr& f) {
    if (f.is_symbol()) return Rational(1);
    if (f.is(Kind::Power) && f.base().is_symbol()) return f.exponent();
    return Rational(0);
  };
  if (t.is(Kind::Product)) {
    for (const auto& f : t.operands()) d += factor_degree(f);
  } else {
    d = factor_degree(t);
  }
  return d;
}

// Higher-degree terms first, constants last.
std::vector<Expr> display_order(const Expr& sum) {
  std::vector<Expr> terms = sum.operands();
  std::stable_sort(terms.begin(), terms.end(), [](const Expr& a, const Expr& b) {
    if (a.is_rational() != b.is_rational()) return b.is_rational();
    return display_degree(a) > display_degree(b);
  });
  return terms;
}

class Infix {
 public:
  std::string run(const Expr& e) {
    switch (e.kind()) {
      case Kind::Rational:
        return to_string(e.value());
      case Kind::Symbol:
        return e.name();
      case Kind::Function:
        return e.name() + "(" + run(e.argument()) + ")";
      case Kind::Sum: {
        std::string out;
        bool first = true;
        for (const auto& t : display_order(e)) {
          Parts parts = split(t);
          std::string body = product(parts);
          if (first) {
            out = parts.negative ? "-" + body : body;
          } else {
            out += parts.negative ? " - " : " + ";
            out += body;
          }
          first = false;
        }
        return out;
      }
      case Kind::Product:
      case Kind::Power: {
        Parts parts = split(e);
        std::string body = product(parts);
        return parts.negative ? "-" + body : body;
      }
    }
    return {};
  }

 private:
  std::string power(const Expr& base, const Rational& r) {
    std::string b = run(base);
    bool wrap = base.is(Kind::Sum) || base.is(Kind::Product) || base.is(Kind::Power) ||
                (base.is_rational() && (sgn(base.value()) < 0 || !is_integer(base.value())));
    if (wrap) b = "(" + b + ")";
    if (r == 1) return b;
    if (is_integer(r) && sgn(r) > 0) return b + "^" + to_string(r);
    return b + "^(" + to_string(r) + ")";
  }

  std::string factor(const Expr& f) {
    if (f.is(Kind::Sum)) return "(" + run(f) + ")";
    if (f.is(Kind::Power)) return power(f.base(), f.exponent());
    return run(f);
  }

  std::string product(const Parts& parts) {
    std::vector<std::string> num;
    std::vector<std::string> den;
    if (parts.coef.get_num() != 1 || parts.num.empty()) num.push_back(parts.coef.get_num().get_str());
    for (const auto& f : parts.num) num.push_back(factor(f));
    if (parts.coef.get_den() != 1) den.push_back(parts.coef.get_den().get_str());
    for (const auto& f : parts.den) den.push_back(factor(f));
    std::string out = join(num, "*");
    if (den.size() == 1) out += "/" + den.front();
    if (den.size() > 1) out += "/(" + join(den, "*") + ")";
    return out;
  }
};

std::string latex_symbol(const std::string& name) {
  if (name == "p") return "u'";
  if (name == "q") return "u''";
  if (name == "xbar") return "\\bar{x}";
  if (name == "ubar") return "\\bar{u}";
  if (name == "pbar") return "\\bar{u}'";
  if (name == "qbar") return "\\bar{u}''";
  auto us = name.find('_');
  if (us != std::string::npos) return name.substr(0, us) + "_{" + name.substr(us + 1) + "}";
  if (name.size() > 1) return "\\mathrm{" + name + "}";
  return name;
}

class Latex {
 public:
  std::string run(const Expr& e) {
    switch (e.kind()) {
      case Kind::Rational: {
        const Rational& v = e.value();
        if (is_integer(v)) return v.get_num().get_str();
        std::string s = "\\frac{" + Integer(abs(v.get_num())).get_str() + "}{" + v.get_den().get_str() + "}";
        return sgn(v) < 0 ? "-" + s : s;
      }
      case Kind::Symbol:
        return latex_symbol(e.name());
      case Kind::Function:
        return "\\" + e.name() + "\\left(" + run(e.argument()) + "\\right)";
      case Kind::Sum: {
        std::string out;
        bool first = true;
        for (const auto& t : display_order(e)) {
          Parts parts = split(t);
          std::string body = product(parts);
          if (first) {
            out = parts.negative ? "-" + body : body;
          } else {
            out += parts.negative ? " - " : " + ";
            out += body;
          }
          first = false;
        }
        return out;
      }
      case Kind::Product:
      case Kind::Power: {
        Parts parts = split(e);
        std::string body = product(parts);
        return parts.negative ? "-" + body : body;
      }
    }
    return {};
  }

 private:
  std::string power(const Expr& base, const Rational& r) {
    std::string b = run(base);
    if (r == Rational(1, 2)) return "\\sqrt{" + b + "}";
    if (r == Rational(1, 3)) return "\\sqrt[3]{" + b + "}";
    bool wrap = base.is(Kind::Sum) || base.is(Kind::Product) || base.is(Kind::Power) ||
                (base.is_rational() && (sgn(base.value()) < 0 || !is_integer(base.value())));
    if (base.is_symbol() && (base.name() == "p" || base.name() == "q" || base.name() == "pbar" ||
                             base.name() == "qbar")) {
      wrap = true;
    }
    if (wrap) b = "\\left(" + b + "\\right)";
    if (r == 1) return b;
    std::string ex = is_integer(r) ? r.get_num().get_str()
                                   : "\\frac{" + r.get_num().get_str() + "}{" + r.get_den().get_str() + "}";
    return "{" + b + "}^{" + ex + "}";
  }

  std::string factor(const Expr& f) {
    if (f.is(Kind::Sum)) return "\\left(" + run(f) + "\\right)";
    if (f.is(Kind::Power)) return power(f.base(), f.exponent());
    return run(f);
  }

  static std::string juxtapose(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) {
        bool digit = !items[i].empty() && std::isdigit(static_cast<unsigned char>(items[i][0]));
        out += digit ? " \\cdot " : " ";
      }
      out += items[i];
    }
    return out;
  }

  std::string product(const Parts& parts) {
    std::vector<std::string> num;
    std::vector<std::string> den;
    if (parts.coef.get_num() != 1 || parts.num.empty()) num.push_back(parts.coef.get_num().get_str());
    for (const auto& f : parts.num) num.push_back(factor(f));
    if (parts.coef.get_den() != 1) den.push_back(parts.coef.get_den().get_str());
    for (const auto& f : parts.den) den.push_back(factor(f));
    if (den.empty()) return juxtapose(num);
    if (parts.num.size() == 1 && parts.num[0].is(Kind::Sum) && num.size() == 1) num[0] = run(parts.num[0]);
    if (parts.den.size() == 1 && parts.den[0].is(Kind::Sum) && den.size() == 1) den[0] = run(parts.den[0]);
    return "\\frac{" + juxtapose(num) + "}{" + juxtapose(den) + "}";
  }
};

nlohmann::json json_of(const Expr& e) {
  nlohmann::json j;
  switch (e.kind()) {
    case Kind::Rational:
      j["kind"] = "rational";
      j["value"] = to_string(e.value());
      return j;
    case Kind::Symbol:
      j["kind"] = "symbol";
      j["name"] = e.name();
      return j;
    case Kind::Sum:
      j["kind"] = "sum";
      break;
    case Kind::Product:
      j["kind"] = "product";
      break;
    case Kind::Power:
      j["kind"] = "power";
      j["value"] = to_string(e.exponent());
      break;
    case Kind::Function:
      j["kind"] = "function";
      j["name"] = e.name();
      break;
  }
  j["children"] = nlohmann::json::array();
  for (const auto& op : e.operands()) j["children"].push_back(json_of(op));
  return j;
}

Expr expr_of(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error("malformed expression JSON");
  std::string kind = j.at("kind").get<std::string>();
  auto children = [&]() {
    std::vector<Expr> out;
    if (j.contains("children")) {
      for (const auto& c : j.at("children")) out.push_back(expr_of(c));
    }
    return out;
  };
  if (kind == "rational") return Expr(parse_rational(j.at("value").get<std::string>()));
  if (kind == "symbol") return Expr::symbol(j.at("name").get<std::string>());
  if (kind == "sum") return make_sum(children());
  if (kind == "product") return make_product(children());
  if (kind == "power") {
    auto c = children();
    if (c.size() != 1) throw Error("power JSON needs one child");
    return make_power(c[0], parse_rational(j.at("value").get<std::string>()));
  }
  if (kind == "function") {
    auto c = children();
    if (c.size() != 1) throw Error("function JSON needs one child");
    return make_function(j.at("name").get<std::string>(), c[0]);
  }
  throw Error("unknown expression kind '" + kind + "'");
}

}  // namespace

std::string to_infix(const Expr& e) { return Infix().run(e); }
std::string to_latex(const Expr& e) { return Latex().run(e); }
std::string to_json(const Expr& e) { return json_of(e).dump(); }

Expr from_json(const std::string& text) {
  try {
    return expr_of(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& err) {
    throw Error(std::string("malformed expression JSON: ") + err.what());
  }
}

std::string print(const Expr& e, Format format) {
  switch (format) {
    case Format::Infix:
      return to_infix(e);
    case Format::Latex:
      return to_latex(e);
    case Format::Json:
      return to_json(e);
  }
  return {};
}

}  // namespace trilin
