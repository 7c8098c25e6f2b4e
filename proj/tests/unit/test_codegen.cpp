#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "idqa/codegen.hpp"
#include "idqa/verify/oracles.hpp"

using namespace idqa;

namespace {

IsingModel random_model(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> g(0.3, 1.5);
  std::vector<Coupling> couplings;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) couplings.push_back({i, j, u(rng)});
  }
  std::vector<double> h(static_cast<std::size_t>(n));
  std::vector<double> gamma(static_cast<std::size_t>(n));
  for (auto& v : h) v = u(rng);
  for (auto& v : gamma) v = g(rng);
  return IsingModel(n, couplings, h, gamma);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

double scaled_error(std::span<const Complex> got, std::span<const Complex> want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(1.0, std::abs(want[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("program structure") {
  const auto two = codegen::generate_rhs_program(IsingModel(1, {}, {1.0}));
  REQUIRE(two.equations.size() == 2);
  for (const auto& eq : two.equations) CHECK(eq.amplitude_variables().size() == 2);

  const auto sig = codegen::generate_rhs_program(build_quantum_signature());
  REQUIRE(sig.equations.size() == 256);
  for (const auto& eq : sig.equations) CHECK(eq.amplitude_variables().size() == 9);

  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(codegen::generate_rhs_program(random_model(13, rng)), ValidationError);
}

TEST_CASE("program evaluation matches id_rhs") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n : {1, 2, 3, 8}) {
    const auto model = n == 8 ? build_quantum_signature() : random_model(n, rng);
    for (bool bare : {false, true}) {
      const auto program = codegen::generate_rhs_program(model, bare);
      for (int trial = 0; trial < 20; ++trial) {
        DynamicsParams p;
        p.alpha = unit(rng);
        p.bare_energies = bare;
        const double A = unit(rng);
        const double B = unit(rng);
        const auto c = testing::random_state(model.dimension(), rng);
        const auto want = id_rhs(model, A, B, p, c);
        const auto got = codegen::evaluate(program, {A, B, p.temperature, p.alpha, p.reg_floor}, c.amplitudes());
        CHECK(scaled_error(got, want) <= 1e-12);
      }
    }
  }
}

TEST_CASE("emitted text") {
  const auto two = codegen::generate_rhs_program(IsingModel(1, {}, {1.0}));
  const auto c_text = codegen::emit(two, codegen::Target::CLike);
  CHECK(count(c_text, "out[") == 2);
  CHECK(c_text == codegen::emit(two, codegen::Target::CLike));
  const auto list = codegen::emit(two, codegen::Target::ExpressionList);
  CHECK(count(list, "d[") == 2);
  CHECK(list.rfind("# idqa exprlist v1", 0) == 0);
  // Both a Schrodinger part (field and transverse terms) and an alpha-scaled bath part.
  CHECK(list.find("alpha") != std::string::npos);
  CHECK(list.find("exp(") != std::string::npos);

  CHECK(codegen::parse_target("c") == codegen::Target::CLike);
  CHECK(codegen::parse_target("exprlist") == codegen::Target::ExpressionList);
  CHECK_THROWS_AS(codegen::parse_target("fortran"), ValidationError);
}

TEST_CASE("expression-list text interprets to id_rhs") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n : {1, 3}) {
    const auto model = random_model(n, rng);
    const auto text = codegen::emit(codegen::generate_rhs_program(model), codegen::Target::ExpressionList);
    for (int trial = 0; trial < 20; ++trial) {
      DynamicsParams p;
      p.alpha = unit(rng);
      const double A = unit(rng);
      const double B = unit(rng);
      const auto c = testing::random_state(model.dimension(), rng);
      const auto got = verify::run_exprlist(
          text, {{"A", A}, {"B", B}, {"T", p.temperature}, {"alpha", p.alpha}, {"eps", p.reg_floor}}, c.amplitudes());
      CHECK(scaled_error(got, id_rhs(model, A, B, p, c)) <= 1e-12);
    }
  }
}

TEST_CASE("emitted C compiles and matches id_rhs") {
  std::mt19937_64 rng(47);
  const auto model = random_model(3, rng);
  const auto dir = std::filesystem::temp_directory_path() / "idqa_codegen_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "rhs.c") << codegen::emit(codegen::generate_rhs_program(model), codegen::Target::CLike);
  }
  // A tiny driver: reads parameters and amplitudes on stdin, prints the derivative.
  std::ofstream(dir / "driver.c") << R"(#include <stdio.h>
#include "rhs.c"
int main(void) {
  double A, B, T, alpha, eps, cr[8], ci[8];
  idqa_cplx out[8];
  while (scanf("%lf %lf %lf %lf %lf", &A, &B, &T, &alpha, &eps) == 5) {
    for (int i = 0; i < 8; ++i) scanf("%lf %lf", &cr[i], &ci[i]);
    idqa_rhs(cr, ci, A, B, T, alpha, eps, out);
    for (int i = 0; i < 8; ++i) printf("%.17g %.17g\n", out[i].re, out[i].im);
  }
  return 0;
}
)";
  const auto exe = dir / "driver";
  const std::string compile = std::string(IDQA_CXX_COMPILER) + " -x c -std=c99 -O0 -o " + exe.string() + " " +
                              (dir / "driver.c").string() + " -lm";
  REQUIRE(std::system(compile.c_str()) == 0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::ostringstream input;
  input.precision(17);
  std::vector<std::pair<DynamicsParams, std::pair<double, double>>> cases;
  std::vector<StateVector> states;
  for (int trial = 0; trial < 100; ++trial) {
    DynamicsParams p;
    p.alpha = unit(rng);
    const double A = unit(rng);
    const double B = unit(rng);
    states.push_back(testing::random_state(8, rng));
    cases.push_back({p, {A, B}});
    input << A << ' ' << B << ' ' << p.temperature << ' ' << p.alpha << ' ' << p.reg_floor << '\n';
    for (const auto& z : states.back().amplitudes()) input << z.real() << ' ' << z.imag() << '\n';
  }
  std::ofstream(dir / "input.txt") << input.str();
  const std::string run = exe.string() + " < " + (dir / "input.txt").string() + " > " + (dir / "output.txt").string();
  REQUIRE(std::system(run.c_str()) == 0);

  std::ifstream output(dir / "output.txt");
  double worst = 0.0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto want = id_rhs(model, cases[k].second.first, cases[k].second.second, cases[k].first, states[k]);
    Amplitudes got(8);
    for (auto& z : got) {
      double re = 0.0;
      double im = 0.0;
      output >> re >> im;
      z = {re, im};
    }
    worst = std::max(worst, scaled_error(got, want));
  }
  CHECK(worst <= 1e-12);
  std::filesystem::remove_all(dir);
}
