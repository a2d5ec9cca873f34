#include "normaudit/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "normaudit/catalog.hpp"
#include "normaudit/math.hpp"
#include "normaudit/singularity.hpp"

namespace normaudit::dsl {

namespace {

// arity -1 = variadic with at least one argument
const std::map<std::string, int, std::less<>>& builtin_table() {
  static const std::map<std::string, int, std::less<>> table = {
      {"exp", 1},        {"log", 1},        {"sqrt", 1},        {"abs", 1},
      {"arccos", 1},     {"logsumexp", -1}, {"normal_pdf", 1},  {"normal_cdf", 1},
      {"logistic_pdf", 1}, {"logistic_cdf", 1},
  };
  return table;
}

// --- tokenizer ---------------------------------------------------------------

enum class TokKind { number, ident, op, open, close, comma, end };

struct Token {
  TokKind kind = TokKind::end;
  std::size_t offset = 0;
  double number = 0.0;
  std::string text;
  char op = 0;

  static Token make(TokKind kind, std::size_t offset) {
    Token t;
    t.kind = kind;
    t.offset = offset;
    return t;
  }
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    // the end token points at the last byte so every error offset stays in-text
    if (pos_ >= src_.size())
      return Token::make(TokKind::end, src_.empty() ? 0 : src_.size() - 1);

    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number(start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      Token t = Token::make(TokKind::ident, start);
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    ++pos_;
    switch (c) {
      case '+': case '-': case '*': case '/': case '^': {
        Token t = Token::make(TokKind::op, start);
        t.op = c;
        return t;
      }
      case '(':
        return Token::make(TokKind::open, start);
      case ')':
        return Token::make(TokKind::close, start);
      case ',':
        return Token::make(TokKind::comma, start);
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }
  }

private:
  Token lex_number(std::size_t start) {
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // bare 'e' belongs to the next token
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [p, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || p != last)
      throw SyntaxError("malformed number literal", start);
    Token t = Token::make(TokKind::number, start);
    t.number = value;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// --- parser ------------------------------------------------------------------

class Parser {
public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  ExprPtr parse() {
    ExprPtr e = expr();
    if (tok_.kind != TokKind::end)
      throw SyntaxError("trailing input after expression", tok_.offset);
    return e;
  }

private:
  void advance() { tok_ = lexer_.next(); }

  bool accept_op(char op) {
    if (tok_.kind == TokKind::op && tok_.op == op) {
      advance();
      return true;
    }
    return false;
  }

  // Subtrees that can throw are parsed into named locals before any node
  // aggregate is built: a throwing initializer inside an argument aggregate
  // leaks the already-copied members on this toolchain (gcc PR 66139).
  ExprPtr expr() {
    ExprPtr lhs = term();
    while (tok_.kind == TokKind::op && (tok_.op == '+' || tok_.op == '-')) {
      const char op = tok_.op;
      advance();
      ExprPtr rhs = term();
      lhs = std::make_shared<Expr>(Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}});
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (tok_.kind == TokKind::op && (tok_.op == '*' || tok_.op == '/')) {
      const char op = tok_.op;
      advance();
      ExprPtr rhs = factor();
      lhs = std::make_shared<Expr>(Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}});
    }
    return lhs;
  }

  ExprPtr factor() {
    if (accept_op('-')) {
      ExprPtr operand = power();
      return std::make_shared<Expr>(Expr{Expr::Neg{std::move(operand)}});
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept_op('^')) {
      ExprPtr exponent = factor();
      return std::make_shared<Expr>(Expr{Expr::Binary{'^', std::move(base), std::move(exponent)}});
    }
    return base;
  }

  ExprPtr atom() {
    switch (tok_.kind) {
      case TokKind::number: {
        const double v = tok_.number;
        advance();
        return std::make_shared<Expr>(Expr{Expr::Number{v}});
      }
      case TokKind::ident: {
        std::string name = tok_.text;
        const std::size_t at = tok_.offset;
        advance();
        if (tok_.kind != TokKind::open)
          return std::make_shared<Expr>(Expr{Expr::Ident{std::move(name)}});
        advance();  // '('
        std::vector<ExprPtr> args;
        args.push_back(expr());
        while (tok_.kind == TokKind::comma) {
          advance();
          args.push_back(expr());
        }
        if (tok_.kind != TokKind::close)
          throw SyntaxError("expected ')' in call to '" + name + "'", tok_.offset);
        advance();
        auto it = builtin_table().find(name);
        if (it == builtin_table().end())
          throw UnknownFunctionError("unknown function '" + name + "'", at);
        if (it->second >= 0 && static_cast<int>(args.size()) != it->second)
          throw ArityError("'" + name + "' expects " + std::to_string(it->second) +
                               " argument(s), got " + std::to_string(args.size()),
                           at);
        return std::make_shared<Expr>(Expr{Expr::Call{std::move(name), std::move(args)}});
      }
      case TokKind::open: {
        advance();
        ExprPtr inner = expr();
        if (tok_.kind != TokKind::close)
          throw SyntaxError("expected ')'", tok_.offset);
        advance();
        return inner;
      }
      default:
        throw SyntaxError("expected a number, identifier or '('", tok_.offset);
    }
  }

  Lexer lexer_;
  Token tok_;
};

double apply_builtin(const std::string& name, const std::vector<double>& args) {
  const auto check = [&](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string(what) + " in '" + name + "'");
  };
  if (name == "exp") return std::exp(args[0]);
  if (name == "log") {
    check(args[0] > 0.0, "log of a nonpositive value");
    return std::log(args[0]);
  }
  if (name == "sqrt") {
    check(args[0] >= 0.0, "sqrt of a negative value");
    return std::sqrt(args[0]);
  }
  if (name == "abs") return std::abs(args[0]);
  if (name == "arccos") {
    check(args[0] >= -1.0 && args[0] <= 1.0, "arccos outside [-1, 1]");
    return std::acos(args[0]);
  }
  if (name == "logsumexp") return logsumexp(args);
  if (name == "normal_pdf") return normal_pdf(args[0]);
  if (name == "normal_cdf") return normal_cdf(args[0]);
  if (name == "logistic_pdf") return logistic_pdf(args[0]);
  if (name == "logistic_cdf") return logistic_cdf(args[0]);
  throw UnknownFunctionError("unknown function '" + name + "'", 0);
}

}  // namespace

bool is_builtin(std::string_view name) { return builtin_table().count(name) > 0; }

ExprPtr parse_expr(std::string_view text) {
  if (text.empty()) throw SyntaxError("empty expression", 0);
  return Parser(text).parse();
}

double eval_expr(const Expr& ast, const std::map<std::string, double>& bindings) {
  struct Visitor {
    const std::map<std::string, double>& bindings;

    double operator()(const Expr::Number& n) const { return n.value; }
    double operator()(const Expr::Ident& id) const {
      auto it = bindings.find(id.name);
      if (it == bindings.end())
        throw UnboundIdentifierError("unbound identifier '" + id.name + "'");
      return it->second;
    }
    double operator()(const Expr::Neg& n) const { return -eval_expr(*n.operand, bindings); }
    double operator()(const Expr::Binary& b) const {
      const double lhs = eval_expr(*b.lhs, bindings);
      const double rhs = eval_expr(*b.rhs, bindings);
      switch (b.op) {
        case '+': return lhs + rhs;
        case '-': return lhs - rhs;
        case '*': return lhs * rhs;
        case '/':
          if (rhs == 0.0) throw DomainError("division by zero");
          return lhs / rhs;
        case '^': {
          const double v = std::pow(lhs, rhs);
          if (!std::isfinite(v)) throw DomainError("power left its domain");
          return v;
        }
      }
      throw Error("unreachable operator");
    }
    double operator()(const Expr::Call& c) const {
      std::vector<double> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) args.push_back(eval_expr(*a, bindings));
      return apply_builtin(c.name, args);
    }
  };
  const double v = std::visit(Visitor{bindings}, ast.node);
  if (!std::isfinite(v)) throw DomainError("expression evaluated to a non-finite value");
  return v;
}

std::string print_expr(const Expr& ast) {
  struct Visitor {
    std::string operator()(const Expr::Number& n) const {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return buf;
    }
    std::string operator()(const Expr::Ident& id) const { return id.name; }
    std::string operator()(const Expr::Neg& n) const {
      return "(-" + print_expr(*n.operand) + ")";
    }
    std::string operator()(const Expr::Binary& b) const {
      return "(" + print_expr(*b.lhs) + " " + b.op + " " + print_expr(*b.rhs) + ")";
    }
    std::string operator()(const Expr::Call& c) const {
      std::string out = c.name + "(";
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i > 0) out += ", ";
        out += print_expr(*c.args[i]);
      }
      return out + ")";
    }
  };
  return std::visit(Visitor{}, ast.node);
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  struct Visitor {
    const Expr& other;
    bool operator()(const Expr::Number& n) const {
      return n.value == std::get<Expr::Number>(other.node).value;
    }
    bool operator()(const Expr::Ident& id) const {
      return id.name == std::get<Expr::Ident>(other.node).name;
    }
    bool operator()(const Expr::Neg& n) const {
      return expr_equal(*n.operand, *std::get<Expr::Neg>(other.node).operand);
    }
    bool operator()(const Expr::Binary& x) const {
      const auto& y = std::get<Expr::Binary>(other.node);
      return x.op == y.op && expr_equal(*x.lhs, *y.lhs) && expr_equal(*x.rhs, *y.rhs);
    }
    bool operator()(const Expr::Call& x) const {
      const auto& y = std::get<Expr::Call>(other.node);
      if (x.name != y.name || x.args.size() != y.args.size()) return false;
      for (std::size_t i = 0; i < x.args.size(); ++i)
        if (!expr_equal(*x.args[i], *y.args[i])) return false;
      return true;
    }
  };
  return std::visit(Visitor{b}, a.node);
}

std::vector<std::string> collect_identifiers(const Expr& ast) {
  std::set<std::string> seen;
  const std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (const auto* id = std::get_if<Expr::Ident>(&e.node)) {
      seen.insert(id->name);
    } else if (const auto* neg = std::get_if<Expr::Neg>(&e.node)) {
      walk(*neg->operand);
    } else if (const auto* bin = std::get_if<Expr::Binary>(&e.node)) {
      walk(*bin->lhs);
      walk(*bin->rhs);
    } else if (const auto* call = std::get_if<Expr::Call>(&e.node)) {
      for (const auto& a : call->args) walk(*a);
    }
  };
  walk(ast);
  return {seen.begin(), seen.end()};
}

// --- model spec loader ---------------------------------------------------------

namespace {

struct SpecLine {
  std::string key;
  std::string value;
  int line_no;
};

struct RawSections {
  std::map<std::string, std::vector<SpecLine>> by_name;
  std::vector<std::string> order;
};

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

RawSections split_sections(std::string_view text, const std::string& origin) {
  RawSections out;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line(text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();  // CRLF input
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw SchemaError(origin + ":" + std::to_string(line_no) + ": malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (!out.by_name.count(current)) out.order.push_back(current);
      out.by_name[current];
      continue;
    }
    if (current.empty())
      throw SchemaError(origin + ":" + std::to_string(line_no) + ": entry before any section");
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError(origin + ":" + std::to_string(line_no) + ": expected 'name = value'");
    out.by_name[current].push_back(
        SpecLine{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no});
  }
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    throw SchemaError(where + ": malformed number '" + s + "'");
  return v;
}

// "logistic(0, 1)" / "quantile_grid(0.25:0.0, 0.75:1.0)"
DistHandle parse_dist(const std::string& s, const std::string& where) {
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw SchemaError(where + ": expected family(args)");
  const std::string fam = trim(s.substr(0, open));
  const std::string args = s.substr(open + 1, s.size() - open - 2);
  std::vector<std::string> parts;
  std::stringstream ss(args);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(trim(part));

  if (fam == "quantile_grid") {
    std::vector<QuantileNode> nodes;
    for (const auto& part : parts) {
      const auto colon = part.find(':');
      if (colon == std::string::npos)
        throw SchemaError(where + ": quantile_grid entries are p:value");
      nodes.push_back({parse_number(trim(part.substr(0, colon)), where),
                       parse_number(trim(part.substr(colon + 1)), where)});
    }
    return DistHandle::quantile_grid(std::move(nodes));
  }
  if (parts.size() != 2)
    throw SchemaError(where + ": " + fam + " takes (location, scale)");
  const double loc = parse_number(parts[0], where);
  const double scale = parse_number(parts[1], where);
  if (fam == "normal") return DistHandle::normal(loc, scale);
  if (fam == "logistic") return DistHandle::logistic(loc, scale);
  if (fam == "uniform") return DistHandle::uniform(loc, scale);
  if (fam == "cauchy") return DistHandle::cauchy(loc, scale);
  throw SchemaError(where + ": unknown distribution family '" + fam + "'");
}

struct AffineSlots {
  int loc = -1;    // 0-based parameter index, -1 = none
  int scale = -1;
};

// "(1, 2)" with '-' or 0 meaning no slot.
AffineSlots parse_slots(const std::string& s, int param_dim, const std::string& where) {
  std::string inner = trim(s);
  if (inner.size() < 2 || inner.front() != '(' || inner.back() != ')')
    throw SchemaError(where + ": expected (location-slot, scale-slot)");
  inner = inner.substr(1, inner.size() - 2);
  const auto comma = inner.find(',');
  if (comma == std::string::npos)
    throw SchemaError(where + ": expected (location-slot, scale-slot)");
  const auto slot = [&](std::string t) {
    t = trim(t);
    if (t == "-" || t == "0") return -1;
    const double v = parse_number(t, where);
    const int idx = static_cast<int>(v);
    if (idx < 1 || idx > param_dim)
      throw SchemaError(where + ": slot index " + t + " out of range");
    return idx - 1;
  };
  return AffineSlots{slot(inner.substr(0, comma)), slot(inner.substr(comma + 1))};
}

TransformFamily builtin_family(const std::string& name, const std::string& where) {
  if (name == "binary_affine") return binary_affine_family();
  if (name == "logit_affine") return logit_affine_family();
  if (name == "network_affine") return network_affine_family();
  if (name == "network_parametric") return network_parametric_family();
  if (name == "temperature_shift") return temperature_shift_family();
  if (name == "scaling") return scaling_family();
  throw SchemaError(where + ": unknown transform family '" + name + "'");
}

TransformFamily custom_family(const std::vector<SpecLine>& lines, const ParamPoint& point,
                              const std::string& origin) {
  std::vector<ParamKind> kinds;
  std::map<std::string, AffineSlots> coord_slots;
  std::map<std::string, AffineSlots> dist_slots;

  for (const auto& line : lines) {
    const std::string where = origin + ":" + std::to_string(line.line_no);
    if (line.key == "family") continue;
    if (line.key == "kinds") {
      std::stringstream ss(line.value);
      for (std::string part; std::getline(ss, part, ',');) {
        part = trim(part);
        if (part == "location") kinds.push_back(ParamKind::location);
        else if (part == "scale") kinds.push_back(ParamKind::scale);
        else throw SchemaError(where + ": kind must be 'location' or 'scale'");
      }
      continue;
    }
    if (kinds.empty())
      throw SchemaError(where + ": 'kinds = ...' must precede slot assignments");
    const AffineSlots slots = parse_slots(line.value, static_cast<int>(kinds.size()), where);
    if (slots.loc >= 0 && kinds[slots.loc] != ParamKind::location)
      throw SchemaError(where + ": slot " + std::to_string(slots.loc + 1) + " is not a location");
    if (slots.scale >= 0 && kinds[slots.scale] != ParamKind::scale)
      throw SchemaError(where + ": slot " + std::to_string(slots.scale + 1) + " is not a scale");
    if (point.has_coord(line.key)) coord_slots[line.key] = slots;
    else if (point.has_dist(line.key)) dist_slots[line.key] = slots;
    else throw ResolutionError(where + ": '" + line.key + "' names no parameter or distribution");
  }
  if (kinds.empty()) throw SchemaError(origin + ": custom transform needs 'kinds = ...'");

  // Every location slot must share at most one scale partner across all
  // assignments, otherwise the composition law is not well-defined.
  std::map<int, int> partner;  // location slot -> scale slot (-1 = bare)
  const auto note_partner = [&](const AffineSlots& s, const std::string& name) {
    if (s.loc < 0) return;
    const int want = s.scale;
    auto [it, inserted] = partner.emplace(s.loc, want);
    if (!inserted && it->second != want)
      throw SchemaError(origin + ": location slot " + std::to_string(s.loc + 1) +
                        " pairs with conflicting scale slots (at '" + name + "')");
  };
  for (const auto& [name, s] : coord_slots) note_partner(s, name);
  for (const auto& [name, s] : dist_slots) note_partner(s, name);

  TransformFamily f;
  f.family_id = "custom_affine";
  f.kinds = kinds;
  f.identity.resize(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i)
    f.identity[i] = kinds[i] == ParamKind::scale ? 1.0 : 0.0;

  f.action = [coord_slots, dist_slots](std::span<const double> g, const ParamPoint& p) {
    ParamPoint out;
    for (const auto& [name, v] : p.coords()) {
      auto it = coord_slots.find(name);
      if (it == coord_slots.end()) {
        out.set_coord(name, v);
        continue;
      }
      const double add = it->second.loc >= 0 ? g[it->second.loc] : 0.0;
      const double mul = it->second.scale >= 0 ? g[it->second.scale] : 1.0;
      out.set_coord(name, add + mul * v);
    }
    for (const auto& [name, d] : p.dists()) {
      auto it = dist_slots.find(name);
      if (it == dist_slots.end()) {
        out.set_dist(name, d);
        continue;
      }
      const double add = it->second.loc >= 0 ? g[it->second.loc] : 0.0;
      const double mul = it->second.scale >= 0 ? g[it->second.scale] : 1.0;
      out.set_dist(name, d.affine(add, mul));
    }
    return out;
  };
  f.compose_law = [kinds, partner](std::span<const double> g1, std::span<const double> g2) {
    std::vector<double> out(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (kinds[i] == ParamKind::scale) {
        out[i] = g1[i] * g2[i];
      } else {
        auto it = partner.find(static_cast<int>(i));
        const int s = it == partner.end() ? -1 : it->second;
        out[i] = s >= 0 ? g1[i] + g1[s] * g2[i] : g1[i] + g2[i];
      }
    }
    return out;
  };
  f.inverse_law = [kinds, partner](std::span<const double> g) {
    std::vector<double> out(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (kinds[i] == ParamKind::scale) {
        out[i] = 1.0 / g[i];
      } else {
        auto it = partner.find(static_cast<int>(i));
        const int s = it == partner.end() ? -1 : it->second;
        out[i] = s >= 0 ? -g[i] / g[s] : -g[i];
      }
    }
    return out;
  };
  f.probe_point = point;
  return f;
}

}  // namespace

std::vector<Counterfactual> ModelSpec::make_counterfactuals() const {
  std::vector<Counterfactual> out;
  out.reserve(counterfactuals.size());
  for (const auto& decl : counterfactuals) {
    Counterfactual q;
    q.name = decl.name;
    q.context_schema = decl.context_names;
    q.eval = [ast = decl.ast, names = decl.context_names](const ParamPoint& p, const Context& c) {
      std::map<std::string, double> bindings(p.coords().begin(), p.coords().end());
      for (const auto& [dname, d] : p.dists()) {
        bindings[dname + "_loc"] = d.location();
        bindings[dname + "_scale"] = d.scale();
      }
      for (const auto& n : names) bindings[n] = c.scalar(n);
      return eval_expr(*ast, bindings);
    };
    out.push_back(std::move(q));
  }
  return out;
}

ModelSpec parse_model_spec(std::string_view text, const std::string& origin) {
  const RawSections sections = split_sections(text, origin);
  for (const char* required : {"model", "params", "transform"}) {
    if (!sections.by_name.count(required))
      throw SchemaError(origin + ": missing [" + std::string(required) + "] section");
  }

  ModelSpec spec;
  for (const auto& line : sections.by_name.at("model")) {
    if (line.key == "name") spec.name = line.value;
  }
  if (spec.name.empty()) throw SchemaError(origin + ": [model] needs 'name = ...'");

  for (const auto& line : sections.by_name.at("params")) {
    const std::string where = origin + ":" + std::to_string(line.line_no);
    spec.point.set_coord(line.key, parse_number(line.value, where));
  }
  if (auto it = sections.by_name.find("dists"); it != sections.by_name.end()) {
    for (const auto& line : it->second) {
      const std::string where = origin + ":" + std::to_string(line.line_no);
      spec.point.set_dist(line.key, parse_dist(line.value, where));
    }
  }

  const auto& transform_lines = sections.by_name.at("transform");
  std::string family_name;
  for (const auto& line : transform_lines)
    if (line.key == "family") family_name = line.value;
  if (family_name.empty())
    throw SchemaError(origin + ": [transform] needs 'family = ...'");
  spec.family = family_name == "custom"
                    ? custom_family(transform_lines, spec.point, origin)
                    : builtin_family(family_name, origin + " [transform]");
  if (family_name != "custom") spec.family.probe_point = spec.point;

  std::set<std::string> context_names;
  if (auto it = sections.by_name.find("context"); it != sections.by_name.end()) {
    for (const auto& line : it->second) {
      const std::string where = origin + ":" + std::to_string(line.line_no);
      if (spec.point.has_coord(line.key) || spec.point.has_dist(line.key))
        throw ResolutionError(where + ": context name '" + line.key + "' shadows a parameter");
      spec.default_context.set(line.key, parse_number(line.value, where));
      context_names.insert(line.key);
    }
  }

  if (auto it = sections.by_name.find("counterfactuals"); it != sections.by_name.end()) {
    for (const auto& line : it->second) {
      const std::string where = origin + ":" + std::to_string(line.line_no);
      std::string src = line.value;
      if (src.size() >= 2 && src.front() == '"' && src.back() == '"')
        src = src.substr(1, src.size() - 2);
      CounterfactualDecl decl;
      decl.name = line.key;
      decl.source = src;
      decl.ast = parse_expr(src);  // eager: malformed expressions rejected at load

      for (const auto& ident : collect_identifiers(*decl.ast)) {
        if (spec.point.has_coord(ident)) continue;
        bool dist_param = false;
        for (const auto& [dname, d] : spec.point.dists()) {
          (void)d;
          if (ident == dname + "_loc" || ident == dname + "_scale") dist_param = true;
        }
        if (dist_param) continue;
        if (context_names.count(ident)) {
          decl.context_names.push_back(ident);
          continue;
        }
        throw ResolutionError(where + ": undefined identifier '" + ident + "' in counterfactual '" +
                              decl.name + "'");
      }
      spec.counterfactuals.push_back(std::move(decl));
    }
  }
  return spec;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model spec '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading model spec '" + path.string() + "'");
  return parse_model_spec(buf.str(), path.filename().string());
}

}  // namespace normaudit::dsl
