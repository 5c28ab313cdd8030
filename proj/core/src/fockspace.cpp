#include "meao/fockspace.hpp"

#include <bit>
#include <cmath>

#include "meao/error.hpp"

namespace meao {

namespace {

constexpr Config kEvenMask = 0x5555555555555555ULL;  // spin-up modes

int parity_below(Config c, std::size_t mode) noexcept {
  const Config below = mode == 0 ? 0 : (c & ((Config{1} << mode) - 1));
  return std::popcount(below) & 1;
}

}  // namespace

int particle_count(Config c) noexcept { return std::popcount(c); }

int spin_count(Config c, Spin spin) noexcept {
  const Config mask = spin == Spin::Up ? kEvenMask : (kEvenMask << 1);
  return std::popcount(c & mask);
}

std::optional<SignedConfig> annihilate(Config c, std::size_t mode) noexcept {
  if (!occupied(c, mode)) return std::nullopt;
  return SignedConfig{c & ~(Config{1} << mode), parity_below(c, mode) ? -1 : 1};
}

std::optional<SignedConfig> create(Config c, std::size_t mode) noexcept {
  if (occupied(c, mode)) return std::nullopt;
  return SignedConfig{c | (Config{1} << mode), parity_below(c, mode) ? -1 : 1};
}

Config config_from_string(std::string_view bits) {
  if (bits.size() > 2 * kMaxOrbitals || bits.size() % 2 != 0)
    throw ContractError("configuration string must have even length <= " + std::to_string(2 * kMaxOrbitals));
  Config c = 0;
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (bits[p] == '1')
      c |= Config{1} << p;
    else if (bits[p] != '0')
      throw ContractError("configuration string contains a character other than 0/1");
  }
  return c;
}

std::string config_to_string(Config c, std::size_t n_orbitals) {
  std::string s(2 * n_orbitals, '0');
  for (std::size_t p = 0; p < s.size(); ++p)
    if (occupied(c, p)) s[p] = '1';
  return s;
}

// ---------------------------------------------------------------------------

WaveFunction::WaveFunction(std::size_t n_orbitals, double drop_tolerance)
    : n_orbitals_(n_orbitals), drop_tolerance_(drop_tolerance) {
  if (n_orbitals == 0 || n_orbitals > kMaxOrbitals)
    throw ContractError("WaveFunction supports 1.." + std::to_string(kMaxOrbitals) + " orbitals");
}

Complex WaveFunction::amplitude(Config c) const {
  auto it = amps_.find(c);
  return it == amps_.end() ? Complex{} : it->second;
}

void WaveFunction::set(Config c, Complex value) {
  if (n_orbitals_ < kMaxOrbitals && (c >> (2 * n_orbitals_)) != 0)
    throw ContractError("configuration has modes beyond n_orbitals");
  if (value == Complex{})
    amps_.erase(c);
  else
    amps_[c] = value;
}

void WaveFunction::add(Config c, Complex value) {
  if (value == Complex{}) return;
  amps_[c] += value;
}

double WaveFunction::norm() const {
  double s = 0.0;
  for (const auto& [c, a] : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void WaveFunction::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw InputError("cannot normalize a zero wavefunction");
  for (auto& [c, a] : amps_) a /= nrm;
}

void WaveFunction::prune() {
  std::erase_if(amps_, [tol = drop_tolerance_](const auto& kv) { return std::abs(kv.second) < tol; });
}

std::optional<std::pair<int, int>> WaveFunction::sector() const {
  std::optional<std::pair<int, int>> s;
  for (const auto& [c, a] : amps_) {
    std::pair<int, int> here{spin_count(c, Spin::Up), spin_count(c, Spin::Down)};
    if (!s)
      s = here;
    else if (*s != here)
      return std::nullopt;
  }
  return s;
}

bool WaveFunction::is_real(double tol) const {
  for (const auto& [c, a] : amps_)
    if (std::abs(a.imag()) > tol) return false;
  return true;
}

Complex WaveFunction::overlap(const WaveFunction& other) const {
  if (other.n_orbitals_ != n_orbitals_) throw ContractError("overlap: orbital counts differ");
  Complex s{};
  for (const auto& [c, a] : amps_) s += std::conj(a) * other.amplitude(c);
  return s;
}

// ---------------------------------------------------------------------------

QuditState::QuditState(std::vector<std::size_t> dims, Eigen::VectorXcd amps)
    : local_dims(std::move(dims)), amplitudes(std::move(amps)) {
  std::size_t total = 1;
  for (auto d : local_dims) {
    if (d < 2) throw ContractError("qudit dimensions must be >= 2");
    total *= d;
  }
  if (local_dims.empty() || total != static_cast<std::size_t>(amplitudes.size()))
    throw ContractError("product of local dimensions must equal the amplitude count");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) throw InputError("QuditState must have unit norm");
}

Complex QuditState::amplitude(std::span<const std::size_t> digits) const {
  if (digits.size() != local_dims.size()) throw ContractError("digit count does not match party count");
  std::size_t idx = 0;
  for (std::size_t p = 0; p < digits.size(); ++p) {
    if (digits[p] >= local_dims[p]) throw ContractError("digit out of range");
    idx = idx * local_dims[p] + digits[p];
  }
  return amplitudes[static_cast<Eigen::Index>(idx)];
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd jacobi_matrix(std::size_t n, std::size_t k, std::size_t l, double theta) {
  if (k >= n || l >= n || k == l) throw ContractError("jacobi_matrix: invalid orbital pair");
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double c = std::cos(theta), s = std::sin(theta);
  const auto ki = static_cast<Eigen::Index>(k), li = static_cast<Eigen::Index>(l);
  j(ki, ki) = c;
  j(li, li) = c;
  j(li, ki) = s;
  j(ki, li) = -s;
  return j;
}

RotationSchedule::RotationSchedule(std::size_t n_orbitals)
    : n_(n_orbitals),
      u_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_orbitals), static_cast<Eigen::Index>(n_orbitals))) {}

void RotationSchedule::append(std::size_t k, std::size_t l, double theta) {
  if (k >= n_ || l >= n_ || k == l) throw ContractError("RotationSchedule: invalid orbital pair");
  steps_.push_back({k, l, theta});
  // Left-multiply by J: only rows k and l change.
  const double c = std::cos(theta), s = std::sin(theta);
  const auto ki = static_cast<Eigen::Index>(k), li = static_cast<Eigen::Index>(l);
  const Eigen::RowVectorXd rk = u_.row(ki), rl = u_.row(li);
  u_.row(ki) = c * rk - s * rl;
  u_.row(li) = s * rk + c * rl;
}

void RotationSchedule::append(const RotationSchedule& other) {
  if (other.n_ != n_) throw ContractError("RotationSchedule: orbital counts differ");
  for (const auto& st : other.steps_) append(st.k, st.l, st.theta);
}

// ---------------------------------------------------------------------------

namespace {

Config two_orbital_config(int left, int right) {
  // local digit: bit0 = up, bit1 = down
  return static_cast<Config>(left) | (static_cast<Config>(right) << 2);
}

}  // namespace

WaveFunction ideal_bond_state() { return ionic_state(0.5); }

WaveFunction bonding_product_state() {
  WaveFunction wf(2);
  wf.set(two_orbital_config(3, 0), 1.0);
  return wf;
}

WaveFunction ionic_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("ionic_state: p must lie in [0, 1]");
  const double rest = std::sqrt((1.0 - p * p) / 3.0);
  WaveFunction wf(2);
  wf.set(two_orbital_config(0, 3), p);
  wf.set(two_orbital_config(1, 2), rest);
  wf.set(two_orbital_config(2, 1), -rest);
  wf.set(two_orbital_config(3, 0), rest);
  wf.prune();
  return wf;
}

QuditState ghz_state(std::size_t k) {
  if (k < 2) throw DomainError("ghz_state: need at least 2 parties");
  if (k > 30) throw ContractError("ghz_state: too many parties");
  const auto dim = Eigen::Index{1} << k;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v[0] = v[dim - 1] = 1.0 / std::sqrt(2.0);
  return QuditState(std::vector<std::size_t>(k, 2), std::move(v));
}

QuditState w_state(std::size_t k) {
  if (k < 2) throw DomainError("w_state: need at least 2 parties");
  if (k > 30) throw ContractError("w_state: too many parties");
  const auto dim = Eigen::Index{1} << k;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (std::size_t p = 0; p < k; ++p) v[Eigen::Index{1} << p] = 1.0 / std::sqrt(static_cast<double>(k));
  return QuditState(std::vector<std::size_t>(k, 2), std::move(v));
}

// ---------------------------------------------------------------------------

namespace {

// G_σ = f†_l f_k - f†_k f_l on one spin species.
WaveFunction apply_generator(const WaveFunction& wf, std::size_t mk, std::size_t ml) {
  WaveFunction out(wf.n_orbitals(), wf.drop_tolerance());
  for (const auto& [c, a] : wf.amplitudes()) {
    const bool ok = occupied(c, mk), ol = occupied(c, ml);
    if (ok == ol) continue;
    if (ok) {
      auto x = annihilate(c, mk);
      auto y = create(x->config, ml);
      out.add(y->config, static_cast<double>(x->sign * y->sign) * a);
    } else {
      auto x = annihilate(c, ml);
      auto y = create(x->config, mk);
      out.add(y->config, -static_cast<double>(x->sign * y->sign) * a);
    }
  }
  return out;
}

WaveFunction rotate_spin(const WaveFunction& wf, std::size_t mk, std::size_t ml, double theta) {
  const WaveFunction g1 = apply_generator(wf, mk, ml);
  const WaveFunction g2 = apply_generator(g1, mk, ml);
  const double s = std::sin(theta), omc = 1.0 - std::cos(theta);
  WaveFunction out = wf;
  for (const auto& [c, a] : g1.amplitudes()) out.add(c, s * a);
  for (const auto& [c, a] : g2.amplitudes()) out.add(c, omc * a);
  return out;
}

}  // namespace

WaveFunction rotate_wavefunction(const WaveFunction& wf, const RotationSchedule& schedule) {
  if (schedule.n_orbitals() != wf.n_orbitals())
    throw ContractError("rotate_wavefunction: schedule and wavefunction orbital counts differ");
  WaveFunction cur = wf;
  for (const auto& st : schedule.steps()) {
    if (st.theta == 0.0) continue;
    cur = rotate_spin(cur, mode_index(st.k, Spin::Up), mode_index(st.l, Spin::Up), st.theta);
    cur = rotate_spin(cur, mode_index(st.k, Spin::Down), mode_index(st.l, Spin::Down), st.theta);
    cur.prune();
  }
  return cur;
}

WaveFunction rotate_wavefunction(const WaveFunction& wf, std::size_t k, std::size_t l, double theta) {
  RotationSchedule s(wf.n_orbitals());
  s.append(k, l, theta);
  return rotate_wavefunction(wf, s);
}

}  // namespace meao
