#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "normaudit/audit.hpp"
#include "normaudit/group.hpp"
#include "normaudit/param_point.hpp"

namespace normaudit::dsl {

// Expression AST. Binary operators are +, -, *, /, ^ (left-associative except
// ^, which associates right); unary minus binds looser than ^.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Number {
    double value;
  };
  struct Ident {
    std::string name;
  };
  struct Neg {
    ExprPtr operand;
  };
  struct Binary {
    char op;  // '+', '-', '*', '/', '^'
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Call {
    std::string name;
    std::vector<ExprPtr> args;
  };
  std::variant<Number, Ident, Neg, Binary, Call> node;
};

// Builtins: exp, log, sqrt, abs, arccos, logsumexp (variadic), normal_pdf,
// normal_cdf, logistic_pdf, logistic_cdf.
bool is_builtin(std::string_view name);

ExprPtr parse_expr(std::string_view text);

double eval_expr(const Expr& ast, const std::map<std::string, double>& bindings);

// Fully parenthesized rendering; reparsing yields a structurally identical tree.
std::string print_expr(const Expr& ast);

bool expr_equal(const Expr& a, const Expr& b);

// Free identifiers of the expression (call names excluded).
std::vector<std::string> collect_identifiers(const Expr& ast);

struct CounterfactualDecl {
  std::string name;
  std::string source;
  ExprPtr ast;
  std::vector<std::string> context_names;  // identifiers resolved to [context]
};

// A parsed model-spec file: parameters, distributions, the transformation
// family they are quotiented by, default context values, and counterfactual
// expressions. Expressions may reference parameters, context names, and the
// per-distribution bindings <dist>_loc / <dist>_scale.
struct ModelSpec {
  std::string name;
  ParamPoint point;
  TransformFamily family;
  Context default_context;
  std::vector<CounterfactualDecl> counterfactuals;

  // Bridges the declarations into audit-engine counterfactuals.
  std::vector<Counterfactual> make_counterfactuals() const;
};

// Sectioned plain-text format with [model], [params], [dists], [transform],
// [context], [counterfactuals] headers; the README documents the syntax.
ModelSpec load_model_spec(const std::filesystem::path& path);

// Same parser on in-memory text (the file loader's core).
ModelSpec parse_model_spec(std::string_view text, const std::string& origin);

}  // namespace normaudit::dsl
