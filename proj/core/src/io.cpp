#include "idqa/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "idqa/errors.hpp"

namespace idqa::io {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

IsingModel parse_model(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("model file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "spins" && key != "couplings" && key != "fields" && key != "transverse") {
      throw ValidationError("unknown model key '" + key + "'");
    }
  }
  try {
    const int n = doc.at("spins").get<int>();
    std::vector<Coupling> couplings;
    for (const auto& c : doc.value("couplings", nlohmann::json::array())) {
      if (!c.is_array() || c.size() != 3) throw ValidationError("couplings must be [i, j, J] triples");
      couplings.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<double>()});
    }
    auto fields = doc.value("fields", std::vector<double>{});
    auto transverse = doc.value("transverse", std::vector<double>{});
    return IsingModel(n, std::move(couplings), std::move(fields), std::move(transverse));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

IsingModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

std::string format_model(const IsingModel& model) {
  nlohmann::json doc;
  doc["spins"] = model.spin_count();
  doc["couplings"] = nlohmann::json::array();
  for (const auto& c : model.couplings()) doc["couplings"].push_back({c.i, c.j, c.strength});
  doc["fields"] = model.fields();
  doc["transverse"] = model.transverse();
  return doc.dump(2) + "\n";
}

IsingModel resolve_model(const std::string& source) {
  if (source == "signature") return build_quantum_signature();
  return load_model(source);
}

ScheduleCurves parse_curves(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<CurveSample> samples;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    for (auto& ch : line) {
      if (ch == ',' || ch == ';') ch = ' ';
    }
    std::istringstream fields(line);
    CurveSample s;
    if (!(fields >> s.s >> s.A >> s.B)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ValidationError("curve file line " + std::to_string(lineno) + ": expected three numbers");
    }
    first = false;
    samples.push_back(s);
  }
  return ScheduleCurves(std::move(samples));
}

ScheduleCurves load_curves(const std::filesystem::path& path) { return parse_curves(read_file(path)); }

ScheduleCurves resolve_curves(const std::string& source) {
  if (source == "linear") return ScheduleCurves::linear();
  return load_curves(source);
}

std::string format_number(double v) { return fmt::format("{}", v); }

void write_preamble(std::ostream& os, const ExportOptions& opts) {
  if (!opts.timestamp) return;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  os << "# generated " << buf << '\n';
}

void write_trajectory(std::ostream& os, const Trajectory& traj, const TrajectoryColumns& cols,
                      const ExportOptions& opts) {
  write_preamble(os, opts);
  os << "t,s,A,B,norm";
  if (cols.partition) os << ",P_s,P_c,ratio";
  if (cols.amplitudes) {
    for (std::size_t i = 0; i < traj.model.dimension(); ++i) os << ",re_" << i << ",im_" << i;
  }
  os << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& c = traj.controls[k];
    os << format_number(traj.times[k]) << ',' << format_number(c.s) << ',' << format_number(c.A)
       << ',' << format_number(c.B) << ',' << format_number(traj.norms[k]);
    if (cols.partition) {
      const auto r = ps_pc(traj.states[k], *cols.partition);
      os << ',' << format_number(r.ps) << ',' << format_number(r.pc) << ',' << format_number(r.ratio);
    }
    if (cols.amplitudes) {
      for (const auto& z : traj.states[k].amplitudes()) {
        os << ',' << format_number(z.real()) << ',' << format_number(z.imag());
      }
    }
    os << '\n';
  }
}

void write_ratio_series(std::ostream& os, const Trajectory& traj,
                        const GroundStatePartition& partition, const ExportOptions& opts) {
  write_preamble(os, opts);
  os << "t,P_s,P_c,ratio\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto r = ps_pc(traj.states[k], partition);
    os << format_number(traj.times[k]) << ',' << format_number(r.ps) << ',' << format_number(r.pc)
       << ',' << format_number(r.ratio) << '\n';
  }
}

void write_sweep_header(std::ostream& os, const ExportOptions& opts) {
  write_preamble(os, opts);
  os << "tau_anneal,tau_pause,s_pause,P_s,P_c,ratio,final_norm,status\n";
}

void write_sweep_rows(std::ostream& os, const std::vector<SweepRow>& rows) {
  for (const auto& r : rows) {
    os << format_number(r.tau_anneal) << ',' << format_number(r.tau_pause) << ','
       << format_number(r.s_pause) << ',' << format_number(r.ps) << ',' << format_number(r.pc)
       << ',' << format_number(r.ratio) << ',' << format_number(r.final_norm) << ',' << r.status
       << '\n';
  }
}

void write_group_series(std::ostream& os, const GroupSeries& series, const ExportOptions& opts) {
  write_preamble(os, opts);
  os << "t,CL,E1,E2,E3,ISO\n";
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    os << format_number(series.times[k]);
    for (std::size_t g = 0; g < 5; ++g) os << ',' << format_number(series.values[k][g]);
    os << '\n';
  }
}

void write_gap_curve(std::ostream& os, const std::vector<GapRow>& rows, std::size_t k,
                     const ExportOptions& opts) {
  write_preamble(os, opts);
  os << 's';
  for (std::size_t a = 1; a <= k; ++a) os << ",gap_" << a;
  os << '\n';
  for (const auto& r : rows) {
    os << format_number(r.s);
    for (double g : r.gaps) os << ',' << format_number(g);
    os << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + path.string());
}

}  // namespace idqa::io
