#include "finsler/expression.hpp"

#include "finsler/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace finsler {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::NoConnection: return "NoConnection";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::PositivityViolated: return "PositivityViolated";
    case ErrorCode::NotUnitSpeed: return "NotUnitSpeed";
    case ErrorCode::EmptyComplement: return "EmptyComplement";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

// Recursive descent over
//   sum     := product (('+'|'-') product)*
//   product := unary (('*'|'/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := atom ('^' unary)?
//   atom    := number | name | name '(' sum ')' | '(' sum ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const std::vector<Expression::Binding>& bindings,
                   Expression& out)
      : text_(text), bindings_(bindings), out_(out) {}

  void run() {
    sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    int depth = 0;
    for (const auto& ins : out_.program_) {
      switch (ins.op) {
        case Expression::Op::Const:
        case Expression::Op::Var: ++depth; break;
        case Expression::Op::Add:
        case Expression::Op::Sub:
        case Expression::Op::Mul:
        case Expression::Op::Div:
        case Expression::Op::Pow: --depth; break;
        default: break;
      }
      out_.max_depth_ = std::max(out_.max_depth_, depth);
    }
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SchemaError,
                "expression '" + std::string(text_) + "' at " + std::to_string(pos_) + ": " + msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(Op op, int slot = 0, double value = 0.0) { out_.program_.push_back({op, slot, value}); }

  void sum() {
    product();
    for (;;) {
      if (accept('+')) {
        product();
        emit(Op::Add);
      } else if (accept('-')) {
        product();
        emit(Op::Sub);
      } else {
        return;
      }
    }
  }

  void product() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        emit(Op::Mul);
      } else if (accept('/')) {
        unary();
        emit(Op::Div);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::Neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    atom();
    if (accept('^')) {
      unary();
      emit(Op::Pow);
    }
  }

  void atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      sum();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      name();
      return;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("bad number");
    }
    pos_ += used;
    emit(Op::Const, 0, value);
  }

  void name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string id(text_.substr(start, pos_ - start));

    static constexpr std::array<std::pair<std::string_view, Op>, 13> functions{{
        {"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan}, {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs}, {"sinh", Op::Sinh},
        {"cosh", Op::Cosh}, {"tanh", Op::Tanh}, {"atan", Op::Atan}, {"asin", Op::Asin},
        {"acos", Op::Acos},
    }};
    for (const auto& [fname, op] : functions) {
      if (id == fname) {
        if (!accept('(')) fail("expected '(' after " + id);
        sum();
        if (!accept(')')) fail("expected ')'");
        emit(op);
        return;
      }
    }
    if (id == "pi") {
      emit(Op::Const, 0, std::numbers::pi);
      return;
    }
    if (id == "e") {
      emit(Op::Const, 0, std::numbers::e);
      return;
    }
    for (const auto& [bname, slot] : bindings_) {
      if (id == bname) {
        emit(Op::Var, slot);
        return;
      }
    }
    pos_ = start;
    fail("unknown identifier '" + id + "'");
  }

  std::string_view text_;
  const std::vector<Expression::Binding>& bindings_;
  Expression& out_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text, const std::vector<Binding>& bindings) {
  Expression e;
  e.text_ = std::string(text);
  ExpressionParser(text, bindings, e).run();
  return e;
}

bool Expression::is_constant() const {
  return std::none_of(program_.begin(), program_.end(),
                      [](const Instr& i) { return i.op == Op::Var; });
}

double Expression::operator()(std::span<const double> args) const {
  // Expressions in model files are short; a fixed stack covers them.
  constexpr int kMaxStack = 64;
  if (max_depth_ > kMaxStack)
    throw Error(ErrorCode::SchemaError, "expression too deeply nested: " + text_);
  std::array<double, kMaxStack> stack{};
  int top = -1;
  for (const Instr& ins : program_) {
    switch (ins.op) {
      case Op::Const: stack[++top] = ins.value; break;
      case Op::Var: stack[++top] = args[static_cast<std::size_t>(ins.slot)]; break;
      case Op::Add: stack[top - 1] += stack[top]; --top; break;
      case Op::Sub: stack[top - 1] -= stack[top]; --top; break;
      case Op::Mul: stack[top - 1] *= stack[top]; --top; break;
      case Op::Div: stack[top - 1] /= stack[top]; --top; break;
      case Op::Pow: {
        const double ex = stack[top];
        double& base = stack[top - 1];
        base = (ex == 2.0) ? base * base : std::pow(base, ex);
        --top;
        break;
      }
      case Op::Neg: stack[top] = -stack[top]; break;
      case Op::Sin: stack[top] = std::sin(stack[top]); break;
      case Op::Cos: stack[top] = std::cos(stack[top]); break;
      case Op::Tan: stack[top] = std::tan(stack[top]); break;
      case Op::Exp: stack[top] = std::exp(stack[top]); break;
      case Op::Log: stack[top] = std::log(stack[top]); break;
      case Op::Sqrt: stack[top] = std::sqrt(stack[top]); break;
      case Op::Abs: stack[top] = std::abs(stack[top]); break;
      case Op::Sinh: stack[top] = std::sinh(stack[top]); break;
      case Op::Cosh: stack[top] = std::cosh(stack[top]); break;
      case Op::Tanh: stack[top] = std::tanh(stack[top]); break;
      case Op::Atan: stack[top] = std::atan(stack[top]); break;
      case Op::Asin: stack[top] = std::asin(stack[top]); break;
      case Op::Acos: stack[top] = std::acos(stack[top]); break;
    }
  }
  return stack[0];
}

std::vector<Expression::Binding> coordinate_bindings(int n, int offset, char prefix) {
  std::vector<Expression::Binding> out;
  for (int i = 0; i < n; ++i) out.emplace_back(std::string(1, prefix) + std::to_string(i), offset + i);
  if (prefix == 'x') {
    static constexpr std::array<const char*, 3> aliases{"x", "y", "z"};
    for (int i = 0; i < std::min(n, 3); ++i) out.emplace_back(aliases[static_cast<std::size_t>(i)], offset + i);
  }
  return out;
}

}  // namespace finsler
