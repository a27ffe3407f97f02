#include <algorithm>

#include "trilin/errors.hpp"
#include "trilin/expr.hpp"

namespace trilin {

namespace {

bool is_positive_integer(const Rational& r) { return is_integer(r) && sgn(r) > 0; }

bool expandable_factor(const Expr& f) {
  return f.is(Kind::Sum) || (f.is(Kind::Power) && f.base().is(Kind::Sum) &&
                             is_positive_integer(f.exponent()));
}

bool is_expanded(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
    case Kind::Symbol:
      return true;
    case Kind::Function:
      return is_expanded(e.argument());
    case Kind::Power:
      return !expandable_factor(e) && is_expanded(e.base());
    case Kind::Product:
      return std::all_of(e.operands().begin(), e.operands().end(), [](const Expr& f) {
        return !expandable_factor(f) && is_expanded(f);
      });
    case Kind::Sum:
      return std::all_of(e.operands().begin(), e.operands().end(),
                         [](const Expr& t) { return !t.is(Kind::Sum) && is_expanded(t); });
  }
  return true;
}

std::vector<Expr> terms_of(const Expr& e) {
  if (e.is(Kind::Sum)) return e.operands();
  return {e};
}

std::vector<Expr> distribute(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  std::vector<Expr> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(x * y);
  }
  return out;
}

Expr expand_once(const Expr& e);

Expr expand_power(const Expr& base, const Rational& r) {
  Expr nb = expand_once(base);
  if (nb.is(Kind::Sum) && is_positive_integer(r)) {
    long n = r.get_num().get_si();
    std::vector<Expr> acc = nb.operands();
    std::vector<Expr> result{Expr(1)};
    // Binary powering keeps intermediate sums collected.
    for (long k = n; k > 0; k >>= 1) {
      if (k & 1) result = terms_of(make_sum(distribute(result, acc)));
      if (k > 1) acc = terms_of(make_sum(distribute(acc, acc)));
    }
    return make_sum(std::move(result));
  }
  Expr p = make_power(nb, r);
  if (p.is(Kind::Product) || p.is(Kind::Sum)) return expand_once(p);
  return p;
}

Expr expand_once(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
    case Kind::Symbol:
      return e;
    case Kind::Function:
      return make_function(e.name(), expand_once(e.argument()));
    case Kind::Power:
      return expand_power(e.base(), e.exponent());
    case Kind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(e.operands().size());
      for (const auto& t : e.operands()) terms.push_back(expand_once(t));
      return make_sum(std::move(terms));
    }
    case Kind::Product: {
      std::vector<Expr> plain;
      std::vector<Expr> sums;
      for (const auto& f : e.operands()) {
        Expr nf = expand_once(f);
        if (nf.is(Kind::Sum)) {
          sums.push_back(std::move(nf));
        } else {
          plain.push_back(std::move(nf));
        }
      }
      std::vector<Expr> acc{make_product(std::move(plain))};
      std::sort(sums.begin(), sums.end(), [](const Expr& a, const Expr& b) {
        return a.operands().size() < b.operands().size();
      });
      for (const auto& s : sums) acc = terms_of(make_sum(distribute(acc, s.operands())));
      return make_sum(std::move(acc));
    }
  }
  return e;
}

}  // namespace

Expr normalize(const Expr& e) {
  Expr r = expand_once(e);
  for (int round = 0; round < 32 && !is_expanded(r); ++round) r = expand_once(r);
  return r;
}

void Placeholders::declare(const std::string& unknown, std::vector<std::string> args) {
  if (unknown.empty() || unknown.find('_') != std::string::npos) {
    throw Error("invalid unknown name '" + unknown + "'");
  }
  for (const auto& a : args) {
    if (a.size() != 1) throw Error("unknown arguments must be single-letter symbols");
  }
  args_[unknown] = std::move(args);
}

bool Placeholders::declared(const std::string& unknown) const { return args_.count(unknown) > 0; }

const std::vector<std::string>& Placeholders::args(const std::string& unknown) const {
  auto it = args_.find(unknown);
  if (it == args_.end()) throw Error("undeclared unknown '" + unknown + "'");
  return it->second;
}

std::vector<std::string> Placeholders::unknowns() const {
  std::vector<std::string> out;
  out.reserve(args_.size());
  for (const auto& [name, _] : args_) out.push_back(name);
  return out;
}

std::optional<Placeholders::Decoded> Placeholders::decode(const std::string& symbol) const {
  auto pos = symbol.find('_');
  std::string head = pos == std::string::npos ? symbol : symbol.substr(0, pos);
  auto it = args_.find(head);
  if (it == args_.end()) return std::nullopt;
  const auto& args = it->second;
  Decoded d{head, std::vector<int>(args.size(), 0)};
  if (pos == std::string::npos) return d;
  std::size_t last = 0;
  std::string suffix = symbol.substr(pos + 1);
  if (suffix.empty()) return std::nullopt;
  for (char c : suffix) {
    auto at = std::find(args.begin(), args.end(), std::string(1, c));
    if (at == args.end()) return std::nullopt;
    auto idx = static_cast<std::size_t>(at - args.begin());
    if (idx < last) return std::nullopt;
    last = idx;
    ++d.orders[idx];
  }
  return d;
}

std::string Placeholders::encode(const std::string& unknown, const std::vector<int>& orders) const {
  const auto& a = args(unknown);
  std::string suffix;
  for (std::size_t i = 0; i < a.size() && i < orders.size(); ++i) {
    suffix.append(static_cast<std::size_t>(orders[i]), a[i][0]);
  }
  return suffix.empty() ? unknown : unknown + "_" + suffix;
}

std::optional<std::string> Placeholders::derivative(const std::string& symbol,
                                                    const std::string& var) const {
  auto d = decode(symbol);
  if (!d) return std::nullopt;
  const auto& a = args(d->unknown);
  auto at = std::find(a.begin(), a.end(), var);
  if (at == a.end()) return std::nullopt;
  ++d->orders[static_cast<std::size_t>(at - a.begin())];
  return encode(d->unknown, d->orders);
}

Expr diff_raw(const Expr& e, std::string_view var, const Placeholders* unknowns) {
  switch (e.kind()) {
    case Kind::Rational:
      return Expr(0);
    case Kind::Symbol: {
      if (e.name() == var) return Expr(1);
      if (unknowns) {
        if (auto d = unknowns->derivative(e.name(), std::string(var))) return Expr::symbol(*d);
      }
      return Expr(0);
    }
    case Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& t : e.operands()) {
        Expr dt = diff_raw(t, var, unknowns);
        if (!dt.is_literal_zero()) terms.push_back(std::move(dt));
      }
      return make_sum(std::move(terms));
    }
    case Kind::Product: {
      const auto& ops = e.operands();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Expr di = diff_raw(ops[i], var, unknowns);
        if (di.is_literal_zero()) continue;
        std::vector<Expr> factors;
        factors.reserve(ops.size());
        for (std::size_t j = 0; j < ops.size(); ++j) factors.push_back(j == i ? di : ops[j]);
        terms.push_back(make_product(std::move(factors)));
      }
      return make_sum(std::move(terms));
    }
    case Kind::Power: {
      Expr db = diff_raw(e.base(), var, unknowns);
      if (db.is_literal_zero()) return Expr(0);
      const Rational& r = e.exponent();
      return make_product({Expr(r), make_power(e.base(), r - 1), db});
    }
    case Kind::Function: {
      const Expr& a = e.argument();
      Expr da = diff_raw(a, var, unknowns);
      if (da.is_literal_zero()) return Expr(0);
      if (e.name() == "exp") return e * da;
      if (e.name() == "ln") return da / a;
      if (e.name() == "sin") return cos(a) * da;
      if (e.name() == "cos") return -(sin(a) * da);
      throw UnsupportedNode("cannot differentiate '" + e.name() + "'");
    }
  }
  return Expr(0);
}

Expr diff(const Expr& e, std::string_view var, const Placeholders* unknowns) {
  return normalize(diff_raw(e, var, unknowns));
}

Expr substitute_raw(const Expr& e, const Bindings& bindings) {
  switch (e.kind()) {
    case Kind::Rational:
      return e;
    case Kind::Symbol: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    case Kind::Function:
      return make_function(e.name(), substitute_raw(e.argument(), bindings));
    case Kind::Power:
      return make_power(substitute_raw(e.base(), bindings), e.exponent());
    case Kind::Sum:
    case Kind::Product: {
      std::vector<Expr> ops;
      ops.reserve(e.operands().size());
      for (const auto& op : e.operands()) ops.push_back(substitute_raw(op, bindings));
      return e.is(Kind::Sum) ? make_sum(std::move(ops)) : make_product(std::move(ops));
    }
  }
  return e;
}

Expr substitute(const Expr& e, const Bindings& bindings) {
  return normalize(substitute_raw(e, bindings));
}

namespace {

Expr positive_power(const Expr& base, const Rational& r) {
  if (base.is(Kind::Power) && !base.base().is_rational()) {
    return positive_power(base.base(), base.exponent() * r);
  }
  if (base.is(Kind::Product)) {
    std::vector<Expr> parts;
    for (const auto& f : base.operands()) {
      if (f.is_rational() && sgn(f.value()) < 0 && r.get_den() % 2 == 0) {
        parts.push_back(make_power(f, r));
      } else {
        parts.push_back(positive_power(f, r));
      }
    }
    return make_product(std::move(parts));
  }
  return make_power(base, r);
}

}  // namespace

Expr assume_positive(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
    case Kind::Symbol:
      return e;
    case Kind::Function:
      return make_function(e.name(), assume_positive(e.argument()));
    case Kind::Power:
      return positive_power(assume_positive(e.base()), e.exponent());
    case Kind::Sum:
    case Kind::Product: {
      std::vector<Expr> ops;
      for (const auto& op : e.operands()) ops.push_back(assume_positive(op));
      return e.is(Kind::Sum) ? make_sum(std::move(ops)) : make_product(std::move(ops));
    }
  }
  return e;
}

}  // namespace trilin
