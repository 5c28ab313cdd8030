// meao: command-line front end for the MEAO bonding-analysis pipeline.

#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meao/bondgraph.hpp"
#include "meao/entanglement.hpp"
#include "meao/error.hpp"
#include "meao/indices.hpp"
#include "meao/io.hpp"
#include "meao/models.hpp"
#include "meao/orbital_optimizer.hpp"

namespace fs = std::filesystem;
using namespace meao;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kValidation = 3, kSolver = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  fs::path out_dir = ".";
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

void emit(const Common& c, const std::string& name, const std::string& content) {
  io::write_file_atomic(c.out_dir / name, content);
}

AtomicPartition partition_or_default(const std::string& path, std::size_t n) {
  if (path.empty()) return AtomicPartition::single_orbital_atoms(n);
  auto p = io::read_partition(path);
  if (p.n_orbitals() != n)
    throw InputError(path + ": partition covers " + std::to_string(p.n_orbitals()) + " orbitals, state has " +
                     std::to_string(n));
  return p;
}

// ---------------------------------------------------------------------------
// model

struct ModelArgs {
  std::string kind;
  std::size_t sites = 2;
  std::string topology = "chain";
  double t = 1.0;
  double t_weak = 0.2;
  double u = 0.0;
  std::optional<int> n_up, n_down;
  double r = 1.0;
  IonicDimerParams ionic;
  double p = 0.5;
  std::size_t nstates = 1;
  bool all_sz = false;
};

int cmd_model(const ModelArgs& a, const Common& c) {
  std::vector<io::EnergyEntry> entries;
  std::vector<WaveFunction> states;

  if (a.kind == "ideal-bond" || a.kind == "ionic") {
    states.push_back(a.kind == "ideal-bond" ? ideal_bond_state() : ionic_state(a.p));
  } else {
    LatticeSpec spec;
    try {
      const int half = static_cast<int>(a.sites / 2);
      const int nu = a.n_up.value_or(a.kind == "ionic-dimer" ? 1 : half);
      const int nd = a.n_down.value_or(a.kind == "ionic-dimer" ? 1 : half);
      if (a.kind == "ionic-dimer") {
        spec = ionic_dimer_spec(a.r, nu, nd, a.ionic);
      } else if (a.topology == "chain") {
        spec = chain_spec(a.sites, a.t, a.u, nu, nd);
      } else if (a.topology == "ring") {
        spec = ring_spec(a.sites, a.t, a.u, nu, nd);
      } else {
        spec = dimerized_ring_spec(a.sites, a.t, a.t_weak, a.u, nu, nd);
      }
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
    EigenSolution sol;
    if (a.all_sz) {
      sol = lowest_eigenstates_all_sz(spec, spec.n_up + spec.n_down, a.nstates);
    } else {
      const auto h = build_hamiltonian(spec);
      if (a.nstates > h.basis.dimension())
        throw UsageError("--nstates exceeds the sector dimension " + std::to_string(h.basis.dimension()));
      sol = lowest_eigenstates(h, a.nstates);
    }
    for (std::size_t k = 0; k < sol.pairs.size(); ++k) {
      const auto sector = sol.pairs[k].state.sector().value_or(std::pair{-1, -1});
      entries.push_back({k, sol.pairs[k].energy, "state_" + std::to_string(k) + ".json", sector.first, sector.second});
      states.push_back(sol.pairs[k].state);
    }
  }

  // Everything is computed before the first file is written.
  for (std::size_t k = 0; k < states.size(); ++k)
    emit(c, "state_" + std::to_string(k) + ".json", io::wavefunction_to_json(states[k]));
  emit(c, "partition.json", io::partition_to_json(AtomicPartition::single_orbital_atoms(states.front().n_orbitals())));
  if (!entries.empty()) {
    emit(c, "energies.csv", io::energies_to_csv(entries));
    for (const auto& e : entries) std::cout << "E" << e.index << " = " << io::format_sig6(e.energy) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// meao

struct MeaoArgs {
  std::string state, rdm2, rdm1, partition;
  bool mean_field = false;
  std::string rotations = "intra";
  int restarts = 8;
  int sweeps = 200;
  double tol = 1e-10;
};

int cmd_meao(const MeaoArgs& a, const Common& c) {
  const int sources = !a.state.empty() + !a.rdm2.empty() + !a.rdm1.empty();
  if (sources != 1) throw UsageError("give exactly one of --state, --rdm2, --rdm1");
  if (!a.rdm1.empty() && !a.mean_field) throw UsageError("--rdm1 requires --mean-field");

  std::optional<WaveFunction> wf;
  std::optional<TwoRDM> gamma;
  if (!a.state.empty()) {
    wf = io::read_wavefunction(a.state);
    gamma = two_rdm_mixed(*wf);
  } else {
    const std::string& path = a.rdm2.empty() ? a.rdm1 : a.rdm2;
    auto rdm = io::read_rdm(path);
    if (!a.rdm2.empty()) {
      if (!std::holds_alternative<TwoRDM>(rdm)) throw InputError(path + ": expected an RDM2 file");
      gamma = std::get<TwoRDM>(std::move(rdm));
    } else {
      if (!std::holds_alternative<OneRDM>(rdm)) throw InputError(path + ": expected an RDM1 file");
      gamma = mean_field_2rdm(std::get<OneRDM>(rdm));
    }
  }
  const auto partition = partition_or_default(a.partition, gamma->n_orbitals());

  OptimizerOptions opts;
  opts.seed = c.seed;
  opts.restarts = a.restarts;
  opts.max_sweeps = a.sweeps;
  opts.tolerance = a.tol;
  opts.rotation_space = a.rotations == "all" ? RotationSpace::AllPairs : RotationSpace::IntraAtom;
  const auto result = optimize_meao(*gamma, partition, opts);

  emit(c, "meao_result.json", io::meao_result_to_json(result));
  if (wf) emit(c, "rotated_state.json", io::wavefunction_to_json(rotate_wavefunction(*wf, result.schedule)));
  std::cout << "F_MEAO = " << io::format_sig6(result.f_final) << "\n";
  for (const auto& s : result.schedule.steps())
    std::cout << "rotation " << s.k << " " << s.l << " theta = " << io::format_sig6(s.theta) << "\n";
  if (!result.converged) {
    std::cerr << "meao: optimizer did not converge within " << a.sweeps << " sweeps\n";
    return kSolver;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string state, energies, partition;
  double eta = 0.1;
  std::optional<double> beta;
  std::optional<std::size_t> nstates;
  bool intra = false;
};

MixedState load_analysis_state(const std::string& state, const std::string& energies, std::optional<double> beta,
                               std::optional<std::size_t> nstates) {
  if (!state.empty() == !energies.empty()) throw UsageError("give exactly one of --state, --energies");
  if (!state.empty()) {
    if (beta) throw UsageError("--beta needs --energies");
    return io::read_wavefunction(state);
  }
  if (!beta) throw UsageError("--energies needs --beta");
  auto entries = io::read_energies(energies);
  if (nstates && *nstates < entries.size()) entries.resize(*nstates);
  const fs::path base = fs::path(energies).parent_path();
  std::vector<Eigenpair> pairs;
  for (const auto& e : entries) pairs.push_back({e.energy, io::read_wavefunction(base / e.state_file)});
  return thermal_state(pairs, *beta);
}

int cmd_analyze(const AnalyzeArgs& a, const Common& c) {
  const MixedState state = load_analysis_state(a.state, a.energies, a.beta, a.nstates);
  const auto partition = partition_or_default(a.partition, state.n_orbitals());
  const auto graph = build_correlation_graph(state, partition, {a.eta, a.intra});
  const auto records = bond_table(state, graph);
  const auto singles = nonbonding_orbitals(clusters(graph));

  std::string orders = "atom_a,atom_b,bonds\n";
  for (const auto& [atoms, count] : bond_multiplicities(records))
    orders += atoms.first + "," + atoms.second + "," + std::to_string(count) + "\n";

  emit(c, "graph.dot", io::graph_to_dot(graph));
  emit(c, "bonds.csv", io::bond_table_to_csv(records));
  emit(c, "bond_orders.csv", orders);

  std::cout << io::bond_table_to_csv(records);
  std::cout << "nonbonding:";
  for (auto o : singles) std::cout << " " << partition.label_of(o) << ":" << o;
  std::cout << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// indices

struct IndicesArgs {
  std::vector<double> lengths;
  double r_opt = 1.388;
  double alpha = 257.7;
  std::string delta, overlaps, state, partition;
  std::vector<std::string> ring;
  double reference = 1.389;
  bool squared = false;
  double n_bonding = 2.0, n_antibonding = 0.0;
};

int print_index(const Common& c, const std::string& name, double value) {
  const std::string csv = "index,value\n" + name + "," + io::format_sig6(value) + "\n";
  emit(c, name + ".csv", csv);
  std::cout << csv;
  return kOk;
}

int cmd_indices(const std::string& which, const IndicesArgs& a, const Common& c) {
  if (which == "homa") return print_index(c, "homa", homa(a.lengths, a.r_opt, a.alpha));
  if (which == "ebo") return print_index(c, "ebo", effective_bond_order(a.n_bonding, a.n_antibonding));
  if (which == "flu") {
    FluOptions opts;
    opts.reference = a.reference;
    opts.squared = a.squared;
    return print_index(c, "flu", flu(io::read_delta_table(a.delta), RingSpec{a.ring}, opts));
  }
  if (which == "iring") return print_index(c, "iring", i_ring(io::read_overlaps(a.overlaps), RingSpec{a.ring}));
  if (which == "mci") return print_index(c, "mci", mci(io::read_overlaps(a.overlaps), RingSpec{a.ring}, c.threads));
  // delta
  const MixedState state = io::read_wavefunction(a.state);
  const auto table = delta_table(state, partition_or_default(a.partition, state.n_orbitals()));
  const std::string csv = io::delta_table_to_csv(table);
  emit(c, "delta.csv", csv);
  std::cout << csv;
  return kOk;
}

// ---------------------------------------------------------------------------
// scan

struct ScanArgs {
  std::string family = "hubbard-u";
  std::vector<double> grid;
  std::size_t sites = 2;
  std::string topology = "chain";
  double t = 1.0;
  double u = 0.0;
  double beta = 1e3;
  std::size_t nstates = 4;
  IonicDimerParams ionic;
};

std::map<std::string, double> pair_report(const MixedState& state) {
  const std::size_t s0[] = {0};
  const auto mi = mutual_information(state, 0, 1);
  const std::vector<std::size_t> a{0}, b{1};
  return {{"S_site0", subset_entropy(state, s0)}, {"I01_norm", mi.normalized},
          {"delta01", delocalization_index(state, a, b)}};
}

int cmd_scan(const ScanArgs& a, const Common& c) {
  if (a.grid.empty()) throw UsageError("--grid needs at least one value");
  std::vector<ScanRow> rows;
  std::string name;
  if (a.family == "hubbard-u") {
    name = "U";
    const int half = static_cast<int>(a.sites / 2);
    rows = scan(
        a.grid,
        [&](double u) {
          return a.topology == "ring" ? ring_spec(a.sites, a.t, u, half, half) : chain_spec(a.sites, a.t, u, half, half);
        },
        [](const LatticeSpec& spec) {
          auto sol = lowest_eigenstates(build_hamiltonian(spec), 1);
          auto rec = pair_report(sol.pairs.front().state);
          rec["E0"] = sol.pairs.front().energy;
          return rec;
        });
  } else {
    name = "R";
    rows = scan(
        a.grid, [&](double r) { return ionic_dimer_spec(r, 1, 1, a.ionic); },
        [&](const LatticeSpec& spec) {
          auto sol = lowest_eigenstates_all_sz(spec, 2, a.nstates);
          auto rec = pair_report(thermal_state(sol.pairs, a.beta));
          rec["E0"] = sol.pairs.front().energy;
          return rec;
        });
  }
  const std::string csv = io::scan_to_csv(name, rows);
  emit(c, "scan.csv", csv);
  std::cout << csv;
  return kOk;
}

// ---------------------------------------------------------------------------

int exit_code_for(const std::exception& e) {
  if (const auto* scan_error = dynamic_cast<const ScanError*>(&e)) {
    try {
      std::rethrow_if_nested(*scan_error);
    } catch (const std::exception& inner) {
      return exit_code_for(inner);
    }
    return kFailure;
  }
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ContractError*>(&e) ||
      dynamic_cast<const DomainError*>(&e))
    return kUsage;
  if (dynamic_cast<const InputError*>(&e)) return kValidation;
  if (dynamic_cast<const SolverError*>(&e)) return kSolver;
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximally entangled atomic orbital bonding analysis"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out-dir", common.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* model = app.add_subcommand("model", "Build a model state by exact diagonalization");
  ModelArgs ma;
  model->add_option("kind", ma.kind, "hubbard | ionic-dimer | ideal-bond | ionic")
      ->required()
      ->check(CLI::IsMember({"hubbard", "ionic-dimer", "ideal-bond", "ionic"}));
  model->add_option("--sites", ma.sites)->check(CLI::PositiveNumber)->capture_default_str();
  model->add_option("--topology", ma.topology)->check(CLI::IsMember({"chain", "ring", "dimerized"}))->capture_default_str();
  model->add_option("--t", ma.t, "Hopping (strong bonds for dimerized rings)")->capture_default_str();
  model->add_option("--t-weak", ma.t_weak, "Weak hopping of a dimerized ring")->capture_default_str();
  model->add_option("--u", ma.u, "On-site repulsion")->capture_default_str();
  model->add_option("--nup", ma.n_up, "Spin-up electrons (default: sites/2)");
  model->add_option("--ndn", ma.n_down, "Spin-down electrons (default: sites/2)");
  model->add_option("--r", ma.r, "Ionic dimer coordinate")->capture_default_str();
  model->add_option("--t0", ma.ionic.t0)->capture_default_str();
  model->add_option("--decay", ma.ionic.decay)->capture_default_str();
  model->add_option("--delta-inf", ma.ionic.delta_inf)->capture_default_str();
  model->add_option("--ionic-u", ma.ionic.u)->capture_default_str();
  model->add_option("--p", ma.p, "Ionic weight of the two-orbital state")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  model->add_option("--nstates", ma.nstates)->check(CLI::PositiveNumber)->capture_default_str();
  model->add_flag("--all-sz", ma.all_sz, "Collect the lowest states over every spin split of N");

  auto* meao_cmd = app.add_subcommand("meao", "Optimize maximally entangled atomic orbitals");
  MeaoArgs mo;
  meao_cmd->add_option("--state", mo.state)->check(CLI::ExistingFile);
  meao_cmd->add_option("--rdm2", mo.rdm2)->check(CLI::ExistingFile);
  meao_cmd->add_option("--rdm1", mo.rdm1)->check(CLI::ExistingFile);
  meao_cmd->add_flag("--mean-field", mo.mean_field, "Factorize the RDM1 into a mean-field RDM2");
  meao_cmd->add_option("--partition", mo.partition)->check(CLI::ExistingFile);
  meao_cmd->add_option("--rotations", mo.rotations)->check(CLI::IsMember({"intra", "all"}))->capture_default_str();
  meao_cmd->add_option("--restarts", mo.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  meao_cmd->add_option("--sweeps", mo.sweeps)->check(CLI::PositiveNumber)->capture_default_str();
  meao_cmd->add_option("--tol", mo.tol)->check(CLI::PositiveNumber)->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Correlation graph, bond table and multicenter entanglement");
  AnalyzeArgs aa;
  analyze->add_option("--state", aa.state)->check(CLI::ExistingFile);
  analyze->add_option("--energies", aa.energies, "energies.csv from `model` for a thermal state")
      ->check(CLI::ExistingFile);
  analyze->add_option("--beta", aa.beta, "Inverse temperature")->check(CLI::PositiveNumber);
  analyze->add_option("--nstates", aa.nstates, "Use only the first n listed states")->check(CLI::PositiveNumber);
  analyze->add_option("--partition", aa.partition)->check(CLI::ExistingFile);
  analyze->add_option("--eta", aa.eta)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  analyze->add_flag("--intra", aa.intra, "Keep edges between orbitals of one atom");

  auto* indices = app.add_subcommand("indices", "Bonding and aromaticity indices");
  indices->require_subcommand(1);
  IndicesArgs ia;
  auto ring_option = [&](CLI::App* sub) { sub->add_option("--ring", ia.ring, "Ring atom labels")->delimiter(',')->required(); };
  auto* homa_cmd = indices->add_subcommand("homa", "Harmonic oscillator model of aromaticity");
  homa_cmd->add_option("--lengths", ia.lengths)->delimiter(',')->required();
  homa_cmd->add_option("--ropt", ia.r_opt)->capture_default_str();
  homa_cmd->add_option("--alpha", ia.alpha)->capture_default_str();
  auto* flu_cmd = indices->add_subcommand("flu", "Aromatic fluctuation index");
  flu_cmd->add_option("--delta", ia.delta, "Delocalization table CSV")->required()->check(CLI::ExistingFile);
  ring_option(flu_cmd);
  flu_cmd->add_option("--ref", ia.reference, "Reference delocalization")->capture_default_str();
  flu_cmd->add_flag("--squared", ia.squared, "Square the bracket");
  auto* iring_cmd = indices->add_subcommand("iring", "Ring multicenter index");
  iring_cmd->add_option("--overlaps", ia.overlaps)->required()->check(CLI::ExistingFile);
  ring_option(iring_cmd);
  auto* mci_cmd = indices->add_subcommand("mci", "Multicenter index over all ring orderings");
  mci_cmd->add_option("--overlaps", ia.overlaps)->required()->check(CLI::ExistingFile);
  ring_option(mci_cmd);
  auto* ebo_cmd = indices->add_subcommand("ebo", "Effective bond order");
  ebo_cmd->add_option("--nb", ia.n_bonding)->required();
  ebo_cmd->add_option("--nab", ia.n_antibonding)->required();
  auto* delta_cmd = indices->add_subcommand("delta", "Delocalization index table of a state");
  delta_cmd->add_option("--state", ia.state)->required()->check(CLI::ExistingFile);
  delta_cmd->add_option("--partition", ia.partition)->check(CLI::ExistingFile);

  auto* scan_cmd = app.add_subcommand("scan", "Parameter scan of a model family");
  ScanArgs sa;
  scan_cmd->add_option("family", sa.family, "hubbard-u | ionic-dimer")
      ->required()
      ->check(CLI::IsMember({"hubbard-u", "ionic-dimer"}));
  scan_cmd->add_option("--grid", sa.grid, "Comma-separated parameter values")->delimiter(',')->required();
  scan_cmd->add_option("--sites", sa.sites)->check(CLI::Range(2, 16))->capture_default_str();
  scan_cmd->add_option("--topology", sa.topology)->check(CLI::IsMember({"chain", "ring"}))->capture_default_str();
  scan_cmd->add_option("--t", sa.t)->capture_default_str();
  scan_cmd->add_option("--beta", sa.beta)->check(CLI::PositiveNumber)->capture_default_str();
  scan_cmd->add_option("--nstates", sa.nstates)->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*model) return cmd_model(ma, common);
    if (*meao_cmd) return cmd_meao(mo, common);
    if (*analyze) return cmd_analyze(aa, common);
    if (*scan_cmd) return cmd_scan(sa, common);
    for (auto* sub : indices->get_subcommands()) return cmd_indices(sub->get_name(), ia, common);
  } catch (const std::exception& e) {
    std::cerr << "meao: " << e.what() << "\n";
    try {
      std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
      std::cerr << "  caused by: " << inner.what() << "\n";
    }
    return exit_code_for(e);
  }
  return kUsage;
}
