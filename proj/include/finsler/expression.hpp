#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace finsler {

/// Small arithmetic expression language used for coefficient entries in model
/// files: numbers, named variables, + - * / ^, unary minus, parentheses, the
/// constants pi and e, and the functions sin cos tan exp log sqrt abs sinh cosh
/// tanh atan asin acos.
///
/// Parsing produces a flat stack program, so evaluation does not allocate.
class Expression {
 public:
  using Binding = std::pair<std::string, int>;

  /// Parses `text`; every identifier must be a function, a constant or one of
  /// `bindings` (name -> slot in the argument span). Throws Error(SchemaError).
  static Expression parse(std::string_view text, const std::vector<Binding>& bindings);

  double operator()(std::span<const double> args) const;

  const std::string& text() const { return text_; }
  bool is_constant() const;

 private:
  enum class Op : unsigned char {
    Const, Var, Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sinh, Cosh, Tanh, Atan, Asin, Acos,
  };
  struct Instr {
    Op op;
    int slot = 0;
    double value = 0.0;
  };

  friend class ExpressionParser;

  std::string text_;
  std::vector<Instr> program_;
  int max_depth_ = 0;
};

/// Bindings x0..x{n-1} (plus x, y, z aliases for the first three axes).
std::vector<Expression::Binding> coordinate_bindings(int n, int offset = 0, char prefix = 'x');

}  // namespace finsler
