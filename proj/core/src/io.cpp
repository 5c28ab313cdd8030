#include "meao/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <system_error>
#include <tuple>

#include <json.hpp>

#include "meao/error.hpp"

namespace meao::io {

using nlohmann::json;

namespace {

constexpr double kNormTolerance = 1e-8;
constexpr double kHermiticityTolerance = 1e-10;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string full(double v) { return fmt("%.17g", v); }

std::size_t line_at_byte(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Line of the nth occurrence of `needle`, 0 if there are fewer.
std::size_t line_of_nth(const std::string& text, const std::string& needle, std::size_t nth) {
  std::size_t pos = 0;
  for (std::size_t k = 0;; ++k) {
    pos = text.find(needle, pos);
    if (pos == std::string::npos) return 0;
    if (k == nth) return line_at_byte(text, pos);
    pos += needle.size();
  }
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin, line_at_byte(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
}

// Runs `body`, turning JSON type errors into ParseError at `line`.
template <class F>
auto json_guard(const std::string& origin, std::size_t line, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(origin, line, std::string("unexpected JSON structure: ") + e.what());
  }
}

bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_index(std::string_view s, std::size_t& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::string value_text(Complex z) {
  if (z.imag() == 0.0) return full(z.real());
  return full(z.real()) + " " + full(z.imag());
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- wavefunctions ---------------------------------------------------------

std::string wavefunction_to_json(const WaveFunction& wf) {
  json j;
  j["n_orbitals"] = wf.n_orbitals();
  j["ordering"] = "orbital-major-up-down";
  j["amplitudes"] = json::array();
  for (const auto& [c, a] : wf.amplitudes())
    j["amplitudes"].push_back({{"config", config_to_string(c, wf.n_orbitals())}, {"re", a.real()}, {"im", a.imag()}});
  return j.dump(2) + "\n";
}

WaveFunction wavefunction_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  return json_guard(origin, 0, [&] {
    if (!j.is_object() || !j.contains("n_orbitals") || !j.contains("amplitudes"))
      throw ParseError(origin, 1, "expected an object with n_orbitals and amplitudes");
    const auto n = j.at("n_orbitals").get<std::size_t>();
    if (n == 0 || n > kMaxOrbitals) throw ParseError(origin, line_of_nth(text, "\"n_orbitals\"", 0), "n_orbitals out of range");
    if (j.contains("ordering") && j.at("ordering") != "orbital-major-up-down")
      throw ParseError(origin, line_of_nth(text, "\"ordering\"", 0), "unsupported mode ordering");
    WaveFunction wf(n);
    std::set<Config> seen;
    std::size_t k = 0;
    for (const auto& entry : j.at("amplitudes")) {
      const std::size_t line = line_of_nth(text, "\"config\"", k++);
      json_guard(origin, line, [&] {
        const auto s = entry.at("config").get<std::string>();
        if (s.size() != 2 * n) throw ParseError(origin, line, "config '" + s + "' must have 2*n_orbitals characters");
        Config c;
        try {
          c = config_from_string(s);
        } catch (const std::exception& e) {
          throw ParseError(origin, line, e.what());
        }
        if (!seen.insert(c).second) throw ParseError(origin, line, "duplicate config '" + s + "'");
        const double re = entry.at("re").get<double>();
        const double im = entry.contains("im") ? entry.at("im").get<double>() : 0.0;
        if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(origin, line, "non-finite amplitude");
        wf.set(c, {re, im});
      });
    }
    const double norm = wf.norm();
    if (std::abs(norm - 1.0) > kNormTolerance)
      throw ParseError(origin, 0, "state norm " + full(norm) + " differs from 1 by more than 1e-8");
    return wf;
  });
}

void write_wavefunction(const fs::path& path, const WaveFunction& wf) { write_file_atomic(path, wavefunction_to_json(wf)); }

WaveFunction read_wavefunction(const fs::path& path) { return wavefunction_from_json(read_file(path), path.string()); }

// --- RDM text --------------------------------------------------------------

std::string rdm1_to_text(const OneRDM& gamma) {
  std::ostringstream out;
  const std::size_t n = gamma.n_orbitals();
  for (Spin s : {Spin::Up, Spin::Down}) {
    out << "RDM1 n=" << n << " spin=" << (s == Spin::Up ? 'u' : 'd') << "\n";
    const auto& m = gamma.spin(s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const Complex z = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        if (std::abs(z) > 1e-14) out << i << ' ' << k << ' ' << value_text(z) << "\n";
      }
  }
  return out.str();
}

std::string rdm2_to_text(const TwoRDM& gamma) {
  std::ostringstream out;
  const std::size_t n = gamma.n_orbitals();
  out << "RDM2 n=" << n << " sector=ud\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const Complex z = gamma(i, j, k, l);
          if (std::abs(z) > 1e-14) out << i << ' ' << j << ' ' << k << ' ' << l << ' ' << value_text(z) << "\n";
        }
  return out.str();
}

namespace {

struct RdmBlock {
  int rank = 0;          // 1 or 2
  char spin = 0;         // 'u' / 'd' for rank 1
  std::size_t n = 0;
  std::size_t header_line = 0;
  std::map<std::vector<std::size_t>, std::pair<Complex, std::size_t>> entries;  // value, line
};

std::string index_text(const std::vector<std::size_t>& idx) {
  std::string s = "(";
  for (std::size_t q = 0; q < idx.size(); ++q) s += (q ? " " : "") + std::to_string(idx[q]);
  return s + ")";
}

void check_hermitian(const RdmBlock& b, const std::string& origin) {
  const std::size_t half = b.entries.begin()->first.size() / 2;
  for (const auto& [idx, entry] : b.entries) {
    std::vector<std::size_t> partner(idx.begin() + static_cast<std::ptrdiff_t>(half), idx.end());
    partner.insert(partner.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(half));
    auto it = b.entries.find(partner);
    const Complex other = it == b.entries.end() ? Complex{} : it->second.first;
    if (std::abs(entry.first - std::conj(other)) > kHermiticityTolerance)
      throw ParseError(origin, entry.second,
                       "non-Hermitian pair " + index_text(idx) + " / " + index_text(partner));
  }
}

}  // namespace

std::variant<OneRDM, TwoRDM> rdm_from_text(const std::string& text, const std::string& origin) {
  static const std::regex rdm2_header(R"(RDM2\s+n=(\d+)\s+sector=ud\s*)");
  static const std::regex rdm1_header(R"(RDM1\s+n=(\d+)\s+spin=([ud])\s*)");
  std::vector<RdmBlock> blocks;
  std::istringstream in(text);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    line = strip_cr(line);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::smatch m;
    if (std::regex_match(line, m, rdm2_header) || std::regex_match(line, m, rdm1_header)) {
      RdmBlock b;
      b.rank = line[3] == '2' ? 2 : 1;
      b.n = std::stoul(m[1]);
      if (b.n == 0 || b.n > kMaxOrbitals) throw ParseError(origin, lineno, "n out of range");
      if (b.rank == 1) b.spin = m[2].str()[0];
      b.header_line = lineno;
      if (!blocks.empty()) {
        if (blocks.front().rank != b.rank || blocks.front().n != b.n)
          throw ParseError(origin, lineno, "header does not match the first block");
        if (b.rank == 2) throw ParseError(origin, lineno, "only one RDM2 block is allowed");
        for (const auto& prev : blocks)
          if (prev.spin == b.spin) throw ParseError(origin, lineno, "repeated spin block");
      }
      blocks.push_back(std::move(b));
      continue;
    }
    if (blocks.empty()) throw ParseError(origin, lineno, "expected an RDM1 or RDM2 header");
    RdmBlock& b = blocks.back();
    const auto tok = tokens(line);
    const std::size_t n_idx = b.rank == 2 ? 4 : 2;
    if (tok.size() != n_idx + 1 && tok.size() != n_idx + 2)
      throw ParseError(origin, lineno, "expected " + std::to_string(n_idx) + " indices and a value");
    std::vector<std::size_t> idx(n_idx);
    for (std::size_t q = 0; q < n_idx; ++q) {
      if (!parse_index(tok[q], idx[q])) throw ParseError(origin, lineno, "bad index '" + tok[q] + "'");
      if (idx[q] >= b.n) throw ParseError(origin, lineno, "index " + tok[q] + " out of range");
    }
    double re = 0.0, im = 0.0;
    if (!parse_double(tok[n_idx], re) || (tok.size() == n_idx + 2 && !parse_double(tok[n_idx + 1], im)))
      throw ParseError(origin, lineno, "bad or non-finite value");
    if (!b.entries.emplace(idx, std::pair{Complex{re, im}, lineno}).second)
      throw ParseError(origin, lineno, "duplicate entry " + index_text(idx));
  }
  if (blocks.empty()) throw ParseError(origin, 0, "missing RDM header");
  for (const auto& b : blocks)
    if (!b.entries.empty()) check_hermitian(b, origin);

  const std::size_t n = blocks.front().n;
  if (blocks.front().rank == 2) {
    TwoRDM g(n);
    for (const auto& [idx, e] : blocks.front().entries) g(idx[0], idx[1], idx[2], idx[3]) = e.first;
    if (g.trace().real() < -kHermiticityTolerance) throw ParseError(origin, 0, "RDM2 trace is negative");
    return g;
  }
  OneRDM g{Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
           Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (const auto& b : blocks) {
    auto& m = b.spin == 'u' ? g.up : g.down;
    for (const auto& [idx, e] : b.entries) m(static_cast<Eigen::Index>(idx[0]), static_cast<Eigen::Index>(idx[1])) = e.first;
    const double tr = m.trace().real();
    if (tr < -kHermiticityTolerance || tr > static_cast<double>(n) + kHermiticityTolerance)
      throw ParseError(origin, b.header_line, "RDM1 trace outside [0, n]");
  }
  if (blocks.size() == 1) (blocks.front().spin == 'u' ? g.down : g.up) = blocks.front().spin == 'u' ? g.up : g.down;
  return g;
}

std::variant<OneRDM, TwoRDM> read_rdm(const fs::path& path) { return rdm_from_text(read_file(path), path.string()); }

// --- partitions ------------------------------------------------------------

std::string partition_to_json(const AtomicPartition& partition) {
  json j;
  j["n_orbitals"] = partition.n_orbitals();
  j["atoms"] = json::array();
  for (const auto& a : partition.atoms()) j["atoms"].push_back({{"label", a.label}, {"orbitals", a.orbitals}});
  return j.dump(2) + "\n";
}

AtomicPartition partition_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  return json_guard(origin, 0, [&] {
    const auto n = j.at("n_orbitals").get<std::size_t>();
    std::vector<AtomicPartition::Atom> atoms;
    std::size_t k = 0;
    for (const auto& a : j.at("atoms")) {
      const std::size_t line = line_of_nth(text, "\"label\"", k++);
      atoms.push_back(json_guard(origin, line, [&] {
        return AtomicPartition::Atom{a.at("label").get<std::string>(), a.at("orbitals").get<std::vector<std::size_t>>()};
      }));
    }
    try {
      return AtomicPartition(n, std::move(atoms));
    } catch (const std::exception& e) {
      throw ParseError(origin, 0, e.what());
    }
  });
}

AtomicPartition read_partition(const fs::path& path) { return partition_from_json(read_file(path), path.string()); }

// --- MEAO result -----------------------------------------------------------

std::string meao_result_to_json(const MeaoResult& r) {
  json j;
  const auto& u = r.schedule.matrix();
  j["n_orbitals"] = r.schedule.n_orbitals();
  json rows = json::array();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < u.cols(); ++c) row.push_back(u(i, c));
    rows.push_back(std::move(row));
  }
  j["U"] = std::move(rows);
  j["rotations"] = json::array();
  for (const auto& s : r.schedule.steps()) j["rotations"].push_back({{"k", s.k}, {"l", s.l}, {"theta", s.theta}});
  j["f_final"] = r.f_final;
  j["f_history"] = r.history;
  j["converged"] = r.converged;
  j["sweeps"] = r.sweeps;
  j["accepted_steps"] = r.accepted_steps;
  j["best_restart"] = r.best_restart;
  j["restarts"] = json::array();
  for (const auto& s : r.restarts)
    j["restarts"].push_back(
        {{"f_final", s.f_final}, {"sweeps", s.sweeps}, {"accepted_steps", s.accepted_steps}, {"converged", s.converged}});
  return j.dump(2) + "\n";
}

// --- overlaps and delocalization tables ------------------------------------

AtomicOverlaps overlaps_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  AtomicOverlaps ov = json_guard(origin, 0, [&] {
    AtomicOverlaps o;
    const auto occ = j.at("occupations").get<std::vector<double>>();
    o.occupations = Eigen::Map<const Eigen::VectorXd>(occ.data(), static_cast<Eigen::Index>(occ.size()));
    std::size_t k = 0;
    for (const auto& a : j.at("atoms")) {
      const std::size_t line = line_of_nth(text, "\"label\"", k++);
      json_guard(origin, line, [&] {
        const auto rows = a.at("S").get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd s(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != static_cast<std::size_t>(s.cols())) throw ParseError(origin, line, "ragged overlap matrix");
          for (std::size_t c = 0; c < rows[r].size(); ++c)
            s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
        o.atoms.emplace_back(a.at("label").get<std::string>(), std::move(s));
      });
    }
    return o;
  });
  try {
    ov.validate();
  } catch (const InputError& e) {
    throw ParseError(origin, 0, e.what());
  }
  return ov;
}

AtomicOverlaps read_overlaps(const fs::path& path) { return overlaps_from_json(read_file(path), path.string()); }

std::string delta_table_to_csv(const DeltaTable& table) {
  std::string out = "a,b,delta\n";
  const auto m = static_cast<Eigen::Index>(table.labels.size());
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      out += table.labels[static_cast<std::size_t>(i)] + "," + table.labels[static_cast<std::size_t>(j)] + "," +
             full(table.values(i, j)) + "\n";
  return out;
}

DeltaTable delta_table_from_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::tuple<std::string, std::string, double, std::size_t>> rows;
  DeltaTable t;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "a,b,delta") throw ParseError(origin, 1, "expected header 'a,b,delta'");
      continue;
    }
    const auto f = split(line, ',');
    double d = 0.0;
    if (f.size() != 3 || f[0].empty() || f[1].empty() || !parse_double(f[2], d))
      throw ParseError(origin, lineno, "expected 'label,label,value'");
    if (f[0] == f[1]) throw ParseError(origin, lineno, "self pair");
    for (const auto& l : {f[0], f[1]})
      if (std::find(t.labels.begin(), t.labels.end(), l) == t.labels.end()) t.labels.push_back(l);
    rows.emplace_back(f[0], f[1], d, lineno);
  }
  if (lineno == 0) throw ParseError(origin, 0, "empty delocalization table");
  const auto m = static_cast<Eigen::Index>(t.labels.size());
  t.values = Eigen::MatrixXd::Zero(m, m);
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (const auto& [a, b, d, ln] : rows) {
    const auto i = static_cast<Eigen::Index>(t.index_of(a)), j = static_cast<Eigen::Index>(t.index_of(b));
    if (!seen.insert(std::minmax(i, j)).second) throw ParseError(origin, ln, "duplicate pair " + a + "," + b);
    t.values(i, j) = t.values(j, i) = d;
  }
  return t;
}

DeltaTable read_delta_table(const fs::path& path) { return delta_table_from_csv(read_file(path), path.string()); }

// --- graph and tables ------------------------------------------------------

std::string graph_to_dot(const CorrelationGraph& graph) {
  std::ostringstream out;
  out << "graph correlation {\n";
  out << "  // eta = " << format_sig6(graph.eta) << ", I_max = " << format_sig6(graph.i_max) << "\n";
  for (std::size_t o = 0; o < graph.n_orbitals; ++o)
    out << "  " << o << " [label=\"" << graph.atom_labels[o] << ":" << o << "\"];\n";
  for (const auto& e : graph.edges) {
    const std::string w = fmt("%.4f", e.mutual_information / graph.i_max);
    out << "  " << e.i << " -- " << e.j << " [weight=" << w << ", label=\"" << w << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string format_sig6(double value) { return fmt("%.6g", value); }

std::string bond_table_to_csv(const std::vector<BondRecord>& records) {
  std::string out = "kind,atoms,orbitals,I_norm,E_norm,GME_norm\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_sig6(*v) : std::string(); };
  for (const auto& r : records) {
    std::string atoms, orbitals;
    for (std::size_t q = 0; q < r.atoms.size(); ++q) atoms += (q ? ";" : "") + r.atoms[q];
    for (std::size_t q = 0; q < r.orbitals.size(); ++q) orbitals += (q ? ";" : "") + std::to_string(r.orbitals[q]);
    out += to_string(r.kind) + "," + atoms + "," + orbitals + "," + opt(r.i_norm) + "," + opt(r.e_norm) + "," +
           opt(r.gme_norm) + "\n";
  }
  return out;
}

std::string scan_to_csv(const std::string& parameter_name, const std::vector<ScanRow>& rows) {
  std::set<std::string> columns;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.values) columns.insert(k);
  std::string out = parameter_name;
  for (const auto& c : columns) out += "," + c;
  out += "\n";
  for (const auto& r : rows) {
    out += format_sig6(r.parameter);
    for (const auto& c : columns) {
      out += ",";
      if (auto it = r.values.find(c); it != r.values.end()) out += format_sig6(it->second);
    }
    out += "\n";
  }
  return out;
}

std::string energies_to_csv(const std::vector<EnergyEntry>& entries) {
  std::string out = "index,energy,state_file,n_up,n_dn\n";
  for (const auto& e : entries)
    out += std::to_string(e.index) + "," + full(e.energy) + "," + e.state_file + "," + std::to_string(e.n_up) + "," +
           std::to_string(e.n_down) + "\n";
  return out;
}

std::vector<EnergyEntry> energies_from_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<EnergyEntry> out;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "index,energy,state_file,n_up,n_dn")
        throw ParseError(origin, 1, "expected header 'index,energy,state_file,n_up,n_dn'");
      continue;
    }
    const auto f = split(line, ',');
    EnergyEntry e{};
    double nu = 0, nd = 0;
    if (f.size() != 5 || !parse_index(f[0], e.index) || !parse_double(f[1], e.energy) || f[2].empty() ||
        !parse_double(f[3], nu) || !parse_double(f[4], nd))
      throw ParseError(origin, lineno, "expected 'index,energy,state_file,n_up,n_dn'");
    e.state_file = f[2];
    e.n_up = static_cast<int>(nu);
    e.n_down = static_cast<int>(nd);
    out.push_back(std::move(e));
  }
  if (out.empty()) throw ParseError(origin, 0, "no energies listed");
  return out;
}

std::vector<EnergyEntry> read_energies(const fs::path& path) { return energies_from_csv(read_file(path), path.string()); }

}  // namespace meao::io
