#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "meao/bondgraph.hpp"
#include "meao/fockspace.hpp"
#include "meao/indices.hpp"
#include "meao/models.hpp"
#include "meao/orbital_optimizer.hpp"
#include "meao/partition.hpp"
#include "meao/rdm.hpp"

namespace meao::io {

namespace fs = std::filesystem;

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

// Wavefunctions. Readers reject states whose norm is not 1 within 1e-8.
std::string wavefunction_to_json(const WaveFunction& wf);
WaveFunction wavefunction_from_json(const std::string& text, const std::string& origin = "<string>");
void write_wavefunction(const fs::path& path, const WaveFunction& wf);
WaveFunction read_wavefunction(const fs::path& path);

// Reduced density matrices in the line-oriented text format.
std::string rdm1_to_text(const OneRDM& gamma);
std::string rdm2_to_text(const TwoRDM& gamma);
/// A file with a single spin block is taken to describe both spins.
std::variant<OneRDM, TwoRDM> rdm_from_text(const std::string& text, const std::string& origin = "<string>");
std::variant<OneRDM, TwoRDM> read_rdm(const fs::path& path);

std::string partition_to_json(const AtomicPartition& partition);
AtomicPartition partition_from_json(const std::string& text, const std::string& origin = "<string>");
AtomicPartition read_partition(const fs::path& path);

std::string meao_result_to_json(const MeaoResult& result);

AtomicOverlaps overlaps_from_json(const std::string& text, const std::string& origin = "<string>");
AtomicOverlaps read_overlaps(const fs::path& path);

/// "a,b,delta" rows for each unordered pair.
std::string delta_table_to_csv(const DeltaTable& table);
DeltaTable delta_table_from_csv(const std::string& text, const std::string& origin = "<string>");
DeltaTable read_delta_table(const fs::path& path);

/// Undirected graph, nodes labelled "atom:orbital", edge weight I/I_max.
std::string graph_to_dot(const CorrelationGraph& graph);
std::string bond_table_to_csv(const std::vector<BondRecord>& records);
std::string scan_to_csv(const std::string& parameter_name, const std::vector<ScanRow>& rows);

/// Energies listing written next to model states.
struct EnergyEntry {
  std::size_t index;
  double energy;
  std::string state_file;
  int n_up;
  int n_down;
};
std::string energies_to_csv(const std::vector<EnergyEntry>& entries);
std::vector<EnergyEntry> energies_from_csv(const std::string& text, const std::string& origin = "<string>");
std::vector<EnergyEntry> read_energies(const fs::path& path);

/// printf("%.6g")
std::string format_sig6(double value);

}  // namespace meao::io
