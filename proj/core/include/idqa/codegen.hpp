#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idqa/ising.hpp"

namespace idqa::codegen {

enum class Param { A, B, T, Alpha, Eps };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Node of a real-valued expression tree. Complex amplitudes enter as their
/// real and imaginary parts.
struct Expr {
  enum class Kind { Constant, Parameter, AmpRe, AmpIm, Hoisted, Local, Add, Sub, Mul, Div, Neg, Exp, Max };

  Kind kind = Kind::Constant;
  double value = 0.0;         // Constant
  Param param = Param::A;     // Parameter
  std::uint32_t index = 0;    // AmpRe, AmpIm, Hoisted, Local
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Binding {
  std::string name;
  ExprPtr value;
};

/// dc_i/dt for one basis state, split into real and imaginary parts. Local
/// bindings hold the hoisted (Hc)_i, |c_i|^2, (L|c|^2)_i and the dissipative
/// gain, in evaluation order.
struct Equation {
  std::uint32_t state = 0;
  std::vector<Binding> locals;
  ExprPtr re;
  ExprPtr im;

  /// Distinct amplitude indices referenced anywhere in the equation, sorted.
  std::vector<std::uint32_t> amplitude_variables() const;
};

struct RhsProgram {
  int n = 0;
  bool bare_energies = false;
  /// Transition rates, one per distinct energy difference; depend only on B and T.
  std::vector<Binding> hoisted;
  std::vector<Equation> equations;
};

inline constexpr int kMaxCodegenSpins = 12;

/// Throws ValidationError above kMaxCodegenSpins.
RhsProgram generate_rhs_program(const IsingModel& model, bool bare_energies = false);

struct ProgramInputs {
  double A = 0.0;
  double B = 0.0;
  double temperature = 0.3;
  double alpha = 0.0;
  double reg_floor = 1e-24;
};

/// Tree-walking evaluation of the program.
Amplitudes evaluate(const RhsProgram& program, const ProgramInputs& inputs,
                    std::span<const Complex> c);

enum class Target {
  /// C99 translation unit defining idqa_rhs(); also valid C++.
  CLike,
  /// Line-oriented `let` / `d[i] = (re, im)` listing.
  ExpressionList,
};

/// Accepts "c" and "exprlist". Throws ValidationError otherwise.
Target parse_target(std::string_view name);

std::string emit(const RhsProgram& program, Target target);

}  // namespace idqa::codegen
