#include "idqa/verify/oracles.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace idqa::verify {

using cplx = std::complex<double>;

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Operator acting as `single` on spin b and identity elsewhere.
Eigen::MatrixXd embed(const Eigen::Matrix2d& single, int b, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int pos = n - 1; pos >= 0; --pos) {
    out = kron(out, pos == b ? Eigen::MatrixXd(single) : Eigen::MatrixXd::Identity(2, 2));
  }
  return out;
}

}  // namespace

PauliHamiltonian pauli_hamiltonian(const IsingModel& model) {
  const int n = model.spin_count();
  Eigen::Matrix2d sz;
  sz << -1.0, 0.0, 0.0, 1.0;  // basis order (bit 0 = down, bit 1 = up)
  Eigen::Matrix2d sx;
  sx << 0.0, 1.0, 1.0, 0.0;
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  PauliHamiltonian h{Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim)};
  std::vector<Eigen::MatrixXd> z(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) z[static_cast<std::size_t>(b)] = embed(sz, b, n);
  for (const auto& c : model.couplings()) {
    h.classical -= c.strength * z[static_cast<std::size_t>(c.i)] * z[static_cast<std::size_t>(c.j)];
  }
  for (int b = 0; b < n; ++b) {
    h.classical -= model.fields()[static_cast<std::size_t>(b)] * z[static_cast<std::size_t>(b)];
    h.transverse -= model.transverse()[static_cast<std::size_t>(b)] * embed(sx, b, n);
  }
  return h;
}

Eigen::MatrixXd dense_rate_matrix(const Eigen::VectorXd& diagonal, double temperature) {
  const Eigen::Index dim = diagonal.size();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (std::popcount(static_cast<unsigned>(i ^ j)) == 1) {
        l(i, j) = 1.0 / (1.0 + std::exp((diagonal(i) - diagonal(j)) / temperature));
      }
    }
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    double out = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (k != i) out += l(k, i);
    }
    l(i, i) = -out;
  }
  return l;
}

Eigen::VectorXd boltzmann(const Eigen::VectorXd& energies, double temperature) {
  const double emin = energies.minCoeff();
  Eigen::VectorXd w = ((emin - energies.array()) / temperature).exp().matrix();
  return w / w.sum();
}

std::pair<cplx, cplx> two_level_rhs(double h, double gamma, double alpha, cplx u, cplx d) {
  const cplx i(0.0, 1.0);
  const cplx du = i * h * u + i * gamma * d +
                  (alpha / 2.0) * (std::norm(d) / std::conj(u) -
                                   i * gamma * (d - std::conj(d) * u / std::conj(u)));
  const cplx dd = i * gamma * u - i * h * d +
                  (alpha / 2.0) * (-d - i * gamma * (u - std::conj(u) * d / std::conj(d)));
  return {du, dd};
}

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) < tol * std::max(1.0, a.norm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) ev[static_cast<std::size_t>(k)] = a(k, k);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<cplx> schrodinger_rk4(const IsingModel& model, const ControlSchedule& schedule,
                                  std::span<const cplx> initial, double dt) {
  const auto h = pauli_hamiltonian(model);
  const Eigen::VectorXd diag = h.classical.diagonal();
  const Eigen::SparseMatrix<double> hq = h.transverse.sparseView();
  const auto dim = static_cast<Eigen::Index>(initial.size());
  Eigen::VectorXcd c(dim);
  for (Eigen::Index k = 0; k < dim; ++k) c(k) = initial[static_cast<std::size_t>(k)];

  auto deriv = [&](double t, const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    const auto ctl = schedule.at(t);
    Eigen::VectorXcd hx = ctl.B * (diag.cast<cplx>().array() * x.array()).matrix();
    hx += ctl.A * (hq.cast<cplx>() * x);
    return cplx(0.0, -1.0) * hx;
  };

  const double total = schedule.total_time();
  const auto steps = static_cast<long>(std::ceil(total / dt - 1e-9));
  const double h_step = total / static_cast<double>(steps);
  double t = 0.0;
  for (long k = 0; k < steps; ++k) {
    const Eigen::VectorXcd k1 = deriv(t, c);
    const Eigen::VectorXcd k2 = deriv(t + 0.5 * h_step, c + 0.5 * h_step * k1);
    const Eigen::VectorXcd k3 = deriv(t + 0.5 * h_step, c + 0.5 * h_step * k2);
    const Eigen::VectorXcd k4 = deriv(t + h_step, c + h_step * k3);
    c += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = static_cast<double>(k + 1) * h_step;
  }
  return {c.data(), c.data() + dim};
}

// ---------------------------------------------------------------------------
// exprlist interpreter

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view src, const std::map<std::string, double>& vars,
             std::span<const cplx> c)
      : src_(src), vars_(vars), c_(c) {}

  double expression() {
    double v = term();
    for (;;) {
      skip();
      if (eat('+')) {
        v += term();
      } else if (peek() == '-') {
        ++pos_;
        v -= term();
      } else {
        return v;
      }
    }
  }

  void expect(char ch) {
    skip();
    if (!eat(ch)) fail(std::string("expected '") + ch + "'");
  }

  bool at_end() {
    skip();
    return pos_ >= src_.size();
  }

 private:
  double term() {
    double v = unary();
    for (;;) {
      skip();
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    skip();
    if (eat('-')) return -unary();
    return primary();
  }

  double primary() {
    skip();
    if (eat('(')) {
      const double v = expression();
      expect(')');
      return v;
    }
    const char ch = peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    const std::string id = identifier();
    if (id.empty()) fail("unexpected character");
    skip();
    if (id == "cr" || id == "ci") {
      expect('[');
      const auto j = static_cast<std::size_t>(number());
      expect(']');
      if (j >= c_.size()) fail("amplitude index out of range");
      return id == "cr" ? c_[j].real() : c_[j].imag();
    }
    if (id == "exp") {
      expect('(');
      const double v = expression();
      expect(')');
      return std::exp(v);
    }
    if (id == "max") {
      expect('(');
      const double a = expression();
      expect(',');
      const double b = expression();
      expect(')');
      return std::fmax(a, b);
    }
    if (id == "inf") return HUGE_VAL;
    auto it = vars_.find(id);
    if (it == vars_.end()) fail("unknown identifier '" + id + "'");
    return it->second;
  }

  double number() {
    skip();
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::string identifier() {
    skip();
    std::string id;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      id += src_[pos_++];
    }
    return id;
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  bool eat(char ch) {
    if (peek() != ch) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("exprlist: " + what + " at column " + std::to_string(pos_) + " in: " +
                             std::string(src_));
  }

  std::string_view src_;
  const std::map<std::string, double>& vars_;
  std::span<const cplx> c_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<cplx> run_exprlist(const std::string& text, const std::map<std::string, double>& params,
                               std::span<const cplx> c) {
  std::map<std::string, double> vars = params;
  std::vector<cplx> out(c.size(), cplx(std::nan(""), std::nan("")));
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("let ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("exprlist: malformed let: " + line);
      std::string name = line.substr(4, eq - 4);
      name.erase(name.find_last_not_of(' ') + 1);
      ExprParser p(std::string_view(line).substr(eq + 1), vars, c);
      vars[name] = p.expression();
      if (!p.at_end()) throw std::runtime_error("exprlist: trailing input: " + line);
    } else if (line.rfind("d[", 0) == 0) {
      const auto close = line.find(']');
      const auto eq = line.find('=', close);
      if (close == std::string::npos || eq == std::string::npos) {
        throw std::runtime_error("exprlist: malformed equation: " + line);
      }
      const auto idx = std::stoul(line.substr(2, close - 2));
      ExprParser p(std::string_view(line).substr(eq + 1), vars, c);
      p.expect('(');
      const double re = p.expression();
      p.expect(',');
      const double im = p.expression();
      p.expect(')');
      if (!p.at_end()) throw std::runtime_error("exprlist: trailing input: " + line);
      if (idx >= out.size()) throw std::runtime_error("exprlist: equation index out of range");
      out[idx] = cplx(re, im);
    } else {
      throw std::runtime_error("exprlist: unrecognized line: " + line);
    }
  }
  return out;
}

}  // namespace idqa::verify
