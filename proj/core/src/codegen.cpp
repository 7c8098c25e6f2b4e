#include "idqa/codegen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "idqa/errors.hpp"

namespace idqa::codegen {
namespace {

using Kind = Expr::Kind;

ExprPtr node(Kind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Constant;
  e->value = v;
  return e;
}

ExprPtr param(Param p) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Parameter;
  e->param = p;
  return e;
}

ExprPtr indexed(Kind kind, std::uint32_t index) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->index = index;
  return e;
}

bool is_constant(const ExprPtr& e, double v) { return e->kind == Kind::Constant && e->value == v; }

ExprPtr add(ExprPtr a, ExprPtr b) {
  if (is_constant(a, 0.0)) return b;
  if (is_constant(b, 0.0)) return a;
  return node(Kind::Add, std::move(a), std::move(b));
}
ExprPtr sub(ExprPtr a, ExprPtr b) { return node(Kind::Sub, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (is_constant(a, 1.0)) return b;
  if (is_constant(b, 1.0)) return a;
  return node(Kind::Mul, std::move(a), std::move(b));
}
ExprPtr div(ExprPtr a, ExprPtr b) { return node(Kind::Div, std::move(a), std::move(b)); }
ExprPtr neg(ExprPtr a) { return node(Kind::Neg, std::move(a)); }
ExprPtr exp_of(ExprPtr a) { return node(Kind::Exp, std::move(a)); }
ExprPtr max_of(ExprPtr a, ExprPtr b) { return node(Kind::Max, std::move(a), std::move(b)); }

void collect_amplitudes(const ExprPtr& e, std::set<std::uint32_t>& out) {
  if (!e) return;
  if (e->kind == Kind::AmpRe || e->kind == Kind::AmpIm) out.insert(e->index);
  collect_amplitudes(e->lhs, out);
  collect_amplitudes(e->rhs, out);
}

}  // namespace

std::vector<std::uint32_t> Equation::amplitude_variables() const {
  std::set<std::uint32_t> vars;
  for (const auto& b : locals) collect_amplitudes(b.value, vars);
  collect_amplitudes(re, vars);
  collect_amplitudes(im, vars);
  return {vars.begin(), vars.end()};
}

RhsProgram generate_rhs_program(const IsingModel& model, bool bare_energies) {
  const int n = model.spin_count();
  if (n > kMaxCodegenSpins) {
    throw ValidationError("code generation limited to " + std::to_string(kMaxCodegenSpins) +
                          " spins, model has " + std::to_string(n));
  }
  const auto energies = diagonal_energies(model);
  const auto& gamma = model.transverse();
  const auto dim = static_cast<std::uint32_t>(model.dimension());

  RhsProgram prog;
  prog.n = n;
  prog.bare_energies = bare_energies;

  // w_k = [1 + exp(B dE_k / T)]^-1 for each distinct dE_k = E_i - E_j.
  std::map<double, std::uint32_t> rate_slot;
  auto rate = [&](double delta) {
    auto [it, inserted] = rate_slot.try_emplace(delta, static_cast<std::uint32_t>(prog.hoisted.size()));
    if (inserted) {
      ExprPtr scaled = bare_energies ? constant(delta) : mul(param(Param::B), constant(delta));
      ExprPtr w = div(constant(1.0), add(constant(1.0), exp_of(div(scaled, param(Param::T)))));
      prog.hoisted.push_back({fmt::format("w{}", it->second), std::move(w)});
    }
    return indexed(Kind::Hoisted, it->second);
  };

  prog.equations.reserve(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    Equation eq;
    eq.state = i;
    auto cr = [](std::uint32_t j) { return indexed(Kind::AmpRe, j); };
    auto ci = [](std::uint32_t j) { return indexed(Kind::AmpIm, j); };
    auto prob = [&](std::uint32_t j) { return add(mul(cr(j), cr(j)), mul(ci(j), ci(j))); };

    // (Hc)_i = B E_i c_i - A sum_b Gamma_b c_{i^b}
    ExprPtr diag = mul(param(Param::B), constant(energies[i]));
    ExprPtr hc_re = mul(diag, cr(i));
    ExprPtr hc_im = mul(diag, ci(i));
    for (int b = 0; b < n; ++b) {
      const std::uint32_t j = i ^ (1U << b);
      ExprPtr coeff = mul(constant(-gamma[static_cast<std::size_t>(b)]), param(Param::A));
      hc_re = add(hc_re, mul(coeff, cr(j)));
      hc_im = add(hc_im, mul(coeff, ci(j)));
    }
    eq.locals.push_back({fmt::format("hc_re_{}", i), hc_re});
    eq.locals.push_back({fmt::format("hc_im_{}", i), hc_im});
    eq.locals.push_back({fmt::format("p_{}", i), prob(i)});
    const auto l_hc_re = indexed(Kind::Local, 0);
    const auto l_hc_im = indexed(Kind::Local, 1);
    const auto l_p = indexed(Kind::Local, 2);

    // (L|c|^2)_i = sum_b L_{i,j} p_j - L_{j,i} p_i
    ExprPtr flow = constant(0.0);
    for (int b = 0; b < n; ++b) {
      const std::uint32_t j = i ^ (1U << b);
      flow = add(flow, sub(mul(rate(energies[i] - energies[j]), prob(j)),
                           mul(rate(energies[j] - energies[i]), l_p)));
    }
    eq.locals.push_back({fmt::format("flow_{}", i), flow});
    const auto l_flow = indexed(Kind::Local, 3);

    // gain = alpha [flow - 2 Im(conj(c_i) (Hc)_i)] / (2 max(p_i, eps))
    ExprPtr im_part = sub(mul(cr(i), l_hc_im), mul(ci(i), l_hc_re));
    ExprPtr gain = div(mul(param(Param::Alpha), sub(l_flow, mul(constant(2.0), im_part))),
                       mul(constant(2.0), max_of(l_p, param(Param::Eps))));
    eq.locals.push_back({fmt::format("gain_{}", i), gain});
    const auto l_gain = indexed(Kind::Local, 4);

    // -i (Hc)_i + gain c_i
    eq.re = add(l_hc_im, mul(l_gain, cr(i)));
    eq.im = add(neg(l_hc_re), mul(l_gain, ci(i)));
    prog.equations.push_back(std::move(eq));
  }
  return prog;
}

namespace {

struct EvalContext {
  const ProgramInputs& inputs;
  std::span<const Complex> c;
  const std::vector<double>& hoisted;
  const std::vector<double>& locals;
};

double eval(const Expr& e, const EvalContext& ctx) {
  switch (e.kind) {
    case Kind::Constant: return e.value;
    case Kind::Parameter:
      switch (e.param) {
        case Param::A: return ctx.inputs.A;
        case Param::B: return ctx.inputs.B;
        case Param::T: return ctx.inputs.temperature;
        case Param::Alpha: return ctx.inputs.alpha;
        case Param::Eps: return ctx.inputs.reg_floor;
      }
      break;
    case Kind::AmpRe: return ctx.c[e.index].real();
    case Kind::AmpIm: return ctx.c[e.index].imag();
    case Kind::Hoisted: return ctx.hoisted[e.index];
    case Kind::Local: return ctx.locals[e.index];
    case Kind::Add: return eval(*e.lhs, ctx) + eval(*e.rhs, ctx);
    case Kind::Sub: return eval(*e.lhs, ctx) - eval(*e.rhs, ctx);
    case Kind::Mul: return eval(*e.lhs, ctx) * eval(*e.rhs, ctx);
    case Kind::Div: return eval(*e.lhs, ctx) / eval(*e.rhs, ctx);
    case Kind::Neg: return -eval(*e.lhs, ctx);
    case Kind::Exp: return std::exp(eval(*e.lhs, ctx));
    case Kind::Max: return std::fmax(eval(*e.lhs, ctx), eval(*e.rhs, ctx));
  }
  throw ValidationError("malformed expression node");
}

}  // namespace

Amplitudes evaluate(const RhsProgram& program, const ProgramInputs& inputs,
                    std::span<const Complex> c) {
  if (c.size() != program.equations.size()) {
    throw ValidationError("state dimension does not match the program");
  }
  std::vector<double> hoisted;
  std::vector<double> locals;
  const EvalContext ctx{inputs, c, hoisted, locals};
  for (const auto& h : program.hoisted) hoisted.push_back(eval(*h.value, ctx));
  Amplitudes out(c.size());
  for (const auto& eq : program.equations) {
    locals.clear();
    for (const auto& b : eq.locals) locals.push_back(eval(*b.value, ctx));
    out[eq.state] = Complex(eval(*eq.re, ctx), eval(*eq.im, ctx));
  }
  return out;
}

Target parse_target(std::string_view name) {
  if (name == "c") return Target::CLike;
  if (name == "exprlist") return Target::ExpressionList;
  throw ValidationError("unsupported codegen target '" + std::string(name) +
                        "' (expected c or exprlist)");
}

namespace {

std::string literal(double v) {
  std::string s = fmt::format("{:.17g}", v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return v < 0.0 ? "(" + s + ")" : s;
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    default: return 4;
  }
}

class Printer {
 public:
  Printer(Target target, const RhsProgram& prog, const Equation* eq)
      : target_(target), prog_(prog), eq_(eq) {}

  std::string print(const Expr& e) const {
    switch (e.kind) {
      case Kind::Constant: return literal(e.value);
      case Kind::Parameter:
        switch (e.param) {
          case Param::A: return "A";
          case Param::B: return "B";
          case Param::T: return "T";
          case Param::Alpha: return "alpha";
          case Param::Eps: return "eps";
        }
        break;
      case Kind::AmpRe: return fmt::format("cr[{}]", e.index);
      case Kind::AmpIm: return fmt::format("ci[{}]", e.index);
      case Kind::Hoisted: return prog_.hoisted[e.index].name;
      case Kind::Local: return eq_->locals[e.index].name;
      case Kind::Add: return binary(e, " + ");
      case Kind::Sub: return binary(e, " - ");
      case Kind::Mul: return binary(e, " * ");
      case Kind::Div: return binary(e, " / ");
      case Kind::Neg: return "-" + wrap(*e.lhs, precedence(*e.lhs) < 4);
      case Kind::Exp: return "exp(" + print(*e.lhs) + ")";
      case Kind::Max:
        return (target_ == Target::CLike ? "fmax(" : "max(") + print(*e.lhs) + ", " + print(*e.rhs) + ")";
    }
    throw ValidationError("malformed expression node");
  }

 private:
  std::string wrap(const Expr& e, bool parens) const {
    return parens ? "(" + print(e) + ")" : print(e);
  }

  std::string binary(const Expr& e, const char* op) const {
    const int p = precedence(e);
    const bool right_assoc_guard = e.kind == Kind::Sub || e.kind == Kind::Div;
    return wrap(*e.lhs, precedence(*e.lhs) < p) + op +
           wrap(*e.rhs, precedence(*e.rhs) < p || (right_assoc_guard && precedence(*e.rhs) == p));
  }

  Target target_;
  const RhsProgram& prog_;
  const Equation* eq_;
};

std::string emit_c(const RhsProgram& prog) {
  std::ostringstream os;
  os << "/* Interpolated-dynamics right-hand side, " << prog.n << " spins, "
     << prog.equations.size() << " equations. Generated by idqa; do not edit. */\n"
     << "#include <math.h>\n\n"
     << "typedef struct { double re; double im; } idqa_cplx;\n\n"
     << "static idqa_cplx idqa_make(double re, double im) {\n"
     << "  idqa_cplx z;\n  z.re = re;\n  z.im = im;\n  return z;\n}\n\n"
     << "void idqa_rhs(const double* cr, const double* ci, double A, double B, double T,\n"
     << "              double alpha, double eps, idqa_cplx* out) {\n";
  const Printer top(Target::CLike, prog, nullptr);
  for (const auto& h : prog.hoisted) {
    os << "  const double " << h.name << " = " << top.print(*h.value) << ";\n";
  }
  os << "  (void)A; (void)B; (void)T; (void)alpha; (void)eps;\n";
  for (const auto& eq : prog.equations) {
    const Printer pr(Target::CLike, prog, &eq);
    os << "  {\n";
    for (const auto& b : eq.locals) {
      os << "    const double " << b.name << " = " << pr.print(*b.value) << ";\n";
    }
    os << "    out[" << eq.state << "] = idqa_make(" << pr.print(*eq.re) << ", "
       << pr.print(*eq.im) << ");\n";
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_exprlist(const RhsProgram& prog) {
  std::ostringstream os;
  os << "# idqa exprlist v1: spins " << prog.n << ", equations " << prog.equations.size() << "\n"
     << "# inputs: A B T alpha eps cr[j] ci[j]\n";
  const Printer top(Target::ExpressionList, prog, nullptr);
  for (const auto& h : prog.hoisted) os << "let " << h.name << " = " << top.print(*h.value) << "\n";
  for (const auto& eq : prog.equations) {
    const Printer pr(Target::ExpressionList, prog, &eq);
    for (const auto& b : eq.locals) os << "let " << b.name << " = " << pr.print(*b.value) << "\n";
    os << "d[" << eq.state << "] = (" << pr.print(*eq.re) << ", " << pr.print(*eq.im) << ")\n";
  }
  return os.str();
}

}  // namespace

std::string emit(const RhsProgram& program, Target target) {
  switch (target) {
    case Target::CLike: return emit_c(program);
    case Target::ExpressionList: return emit_exprlist(program);
  }
  throw ValidationError("unsupported codegen target");
}

}  // namespace idqa::codegen
