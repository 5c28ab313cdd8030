#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = MEAO_TEST_WORKDIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
};

Run meao(const std::string& args) {
  fs::create_directories(kWork);
  const auto log = kWork / "last_stdout.txt";
  const std::string cmd = std::string("\"") + MEAO_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

std::string dir(const std::string& name) {
  const auto d = kWork / name;
  fs::remove_all(d);
  return d.string();
}

}  // namespace

TEST_CASE("model writes the dimer ground energy") {
  const auto d = dir("dimer");
  const auto r = meao("--out-dir " + d + " model hubbard --sites 2 --t 1 --u 0 --nup 1 --ndn 1");
  REQUIRE(r.code == 0);
  CHECK(slurp(fs::path(d) / "energies.csv") == "index,energy,state_file,n_up,n_dn\n0,-2,state_0.json,1,1\n");
  CHECK(fs::exists(fs::path(d) / "state_0.json"));
}

TEST_CASE("model on a six-ring") {
  const auto d = dir("ring6");
  REQUIRE(meao("--out-dir " + d + " model hubbard --sites 6 --topology ring --u 2").code == 0);
  CHECK(slurp(fs::path(d) / "state_0.json").find("\"n_orbitals\": 6") != std::string::npos);
  const auto a = meao("--out-dir " + d + " analyze --state " + d + "/state_0.json");
  REQUIRE(a.code == 0);
  const auto bonds = slurp(fs::path(d) / "bonds.csv");
  CHECK(bonds.find("multicenter,A0;A1;A2;A3;A4;A5,0;1;2;3;4;5,,,0.972015") != std::string::npos);
  CHECK(a.out.find("nonbonding:\n") != std::string::npos);
}

TEST_CASE("usage errors exit 2 without writing files") {
  const auto d = dir("bad");
  CHECK(meao("--out-dir " + d + " model hubbard --sites 2 --bogus").code == 2);
  CHECK(meao("--out-dir " + d + " model hubbard --sites 2 --nup 5").code == 2);
  CHECK(meao("--out-dir " + d + " analyze --eta 1.5 --state x.json").code == 2);
  CHECK(meao("").code == 2);
  CHECK_FALSE(fs::exists(d));
}

TEST_CASE("validation errors exit 3") {
  const auto d = dir("invalid");
  fs::create_directories(d);
  std::ofstream(fs::path(d) / "bad.rdm2") << "RDM2 n=2 sector=ud\n0 0 1 1 0.25\n1 1 0 0 0.30\n";
  const auto r = meao("--out-dir " + d + " meao --rdm2 " + d + "/bad.rdm2");
  CHECK(r.code == 3);
  CHECK(r.out.find("bad.rdm2:2:") != std::string::npos);
  std::ofstream(fs::path(d) / "s.json") << R"({"n_orbitals": 1, "amplitudes": [{"config": "10", "re": 0.5}]})";
  CHECK(meao("--out-dir " + d + " analyze --state " + d + "/s.json").code == 3);
}

TEST_CASE("meao recovers the ideal bond and is deterministic") {
  const auto d = dir("meao");
  fs::create_directories(d);
  std::ofstream(fs::path(d) / "mo.json") << R"({"n_orbitals": 2, "amplitudes": [{"config": "1100", "re": 1.0}]})";
  std::ofstream(fs::path(d) / "part.json")
      << R"({"n_orbitals": 2, "atoms": [{"label": "H1", "orbitals": [0]}, {"label": "H2", "orbitals": [1]}]})";
  const std::string args = "meao --state " + d + "/mo.json --partition " + d + "/part.json --rotations all";
  const auto r = meao("--seed 5 --out-dir " + d + "/a " + args);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("F_MEAO = 0.125") != std::string::npos);
  REQUIRE(meao("--seed 5 --out-dir " + d + "/b " + args).code == 0);
  for (const char* f : {"meao_result.json", "rotated_state.json"})
    CHECK(slurp(fs::path(d) / "a" / f) == slurp(fs::path(d) / "b" / f));

  const auto rot = meao("--out-dir " + d + "/r analyze --state " + d + "/a/rotated_state.json --partition " + d +
                        "/part.json");
  REQUIRE(rot.code == 0);
  CHECK(rot.out.find("two-center,H1;H2,0;1,1,1,") != std::string::npos);
}

TEST_CASE("meao from an RDM1 with the mean-field flag") {
  const auto d = dir("rdm1");
  fs::create_directories(d);
  std::ofstream(fs::path(d) / "g.rdm1") << "RDM1 n=2 spin=u\n0 0 1\n";
  CHECK(meao("--out-dir " + d + " meao --rdm1 " + d + "/g.rdm1").code == 2);
  const auto r = meao("--out-dir " + d + " meao --rdm1 " + d + "/g.rdm1 --mean-field --rotations all");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("F_MEAO = 0.125") != std::string::npos);
}

TEST_CASE("thermal analysis from an energies listing") {
  const auto d = dir("thermal");
  REQUIRE(meao("--out-dir " + d + " model ionic-dimer --r 4 --nstates 4 --all-sz").code == 0);
  const auto r = meao("--out-dir " + d + " analyze --energies " + d + "/energies.csv --beta 1000");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("two-center,A0;A1,0;1,0.809621,,") != std::string::npos);
  CHECK(meao("--out-dir " + d + " analyze --energies " + d + "/energies.csv").code == 2);
}

TEST_CASE("high threshold leaves every orbital non-bonding") {
  const auto d = dir("eta");
  REQUIRE(meao("--out-dir " + d + " model hubbard --sites 4 --topology ring --u 0.5").code == 0);
  const auto r = meao("--out-dir " + d + " analyze --eta 0.99 --state " + d + "/state_0.json");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("nonbonding: A0:0 A1:1 A2:2 A3:3") != std::string::npos);
  CHECK(slurp(fs::path(d) / "graph.dot").find("--") == std::string::npos);
}

TEST_CASE("indices subcommands") {
  const auto d = dir("indices");
  auto r = meao("--out-dir " + d + " indices homa --lengths 1.388,1.388,1.388,1.388,1.388,1.388 --ropt 1.388 --alpha 257.7");
  REQUIRE(r.code == 0);
  CHECK(r.out == "index,value\nhoma,1\n");

  std::ofstream(fs::path(d) / "delta.csv") << "a,b,delta\nC1,C2,1.389\nC2,C3,1.389\nC3,C1,1.389\n";
  r = meao("--out-dir " + d + " indices flu --delta " + d + "/delta.csv --ring C1,C2,C3");
  REQUIRE(r.code == 0);
  CHECK(r.out == "index,value\nflu,0\n");

  std::ofstream(fs::path(d) / "ov.json")
      << R"({"occupations": [2], "atoms": [{"label": "C1", "S": [[0.3333333333333333]]}, )"
      << R"({"label": "C2", "S": [[0.3333333333333333]]}, {"label": "C3", "S": [[0.3333333333333334]]}]})";
  r = meao("--threads 2 --out-dir " + d + " indices mci --overlaps " + d + "/ov.json --ring C1,C2,C3");
  REQUIRE(r.code == 0);
  CHECK(r.out == "index,value\nmci,0.296296\n");
  r = meao("--out-dir " + d + " indices ebo --nb 2 --nab 0");
  CHECK(r.out == "index,value\nebo,1\n");
  CHECK(meao("--out-dir " + d + " indices ebo --nb 3 --nab 0").code == 2);

  REQUIRE(meao("--out-dir " + d + " model ideal-bond").code == 0);
  r = meao("--out-dir " + d + " indices delta --state " + d + "/state_0.json");
  REQUIRE(r.code == 0);
  CHECK(r.out == "a,b,delta\nA0,A1,1\n");
}

TEST_CASE("scan writes one row per grid point") {
  const auto d = dir("scan");
  const auto r = meao("--out-dir " + d + " scan hubbard-u --grid 0,1,1000");
  REQUIRE(r.code == 0);
  const auto csv = slurp(fs::path(d) / "scan.csv");
  CHECK(csv.rfind("U,E0,I01_norm,S_site0,delta01\n", 0) == 0);
  CHECK(csv.find("\n0,-2,1,1.38629,1\n") != std::string::npos);
  CHECK(meao("--out-dir " + d + " scan ionic-dimer --grid 2,-1").code == 3);
}
