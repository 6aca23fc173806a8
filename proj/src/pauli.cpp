// Copyright 2026 The metavqt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metavqt/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "metavqt/error.hpp"

namespace metavqt {

char pauli_char(Pauli p) noexcept {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: break;
  }
  fail(Errc::kParseError, std::string("invalid Pauli letter '") + c + "'");
}

PauliString::PauliString(double coef, std::string_view text)
    : coefficient(coef) {
  letters.reserve(text.size());
  for (char c : text) letters.push_back(pauli_from_char(c));
}

std::string PauliString::letter_string() const {
  std::string s;
  s.reserve(letters.size());
  for (Pauli p : letters) s.push_back(pauli_char(p));
  return s;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (other.letters.size() != letters.size()) {
    fail(Errc::kDimensionMismatch, "Pauli strings act on different sizes");
  }
  std::size_t clashes = 0;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const Pauli a = letters[q];
    const Pauli b = other.letters[q];
    if (a != Pauli::I && b != Pauli::I && a != b) ++clashes;
  }
  return clashes % 2 == 0;
}

bool PauliString::is_identity() const noexcept {
  for (Pauli p : letters) {
    if (p != Pauli::I) return false;
  }
  return true;
}

PauliMasks PauliMasks::of(std::span<const Pauli> letters) {
  if (letters.size() > 63) fail(Errc::kTooLarge, "Pauli string too long");
  PauliMasks m;
  const std::size_t n = letters.size();
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (letters[q]) {
      case Pauli::I: break;
      case Pauli::X: m.flip_mask |= bit; break;
      case Pauli::Y:
        m.flip_mask |= bit;
        m.phase_mask |= bit;
        ++m.n_y;
        break;
      case Pauli::Z: m.phase_mask |= bit; break;
    }
  }
  return m;
}

Complex PauliMasks::phase(std::uint64_t x) const noexcept {
  static constexpr Complex kPowersOfI[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  Complex ph = kPowersOfI[n_y % 4];
  if (std::popcount(x & phase_mask) % 2 == 1) ph = -ph;
  return ph;
}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliString> terms)
    : n_qubits_(n_qubits) {
  std::vector<PauliString> merged;
  for (auto& t : terms) {
    if (t.letters.size() != n_qubits_) {
      std::ostringstream os;
      os << "term " << t.letter_string() << " has " << t.letters.size()
         << " letters, expected " << n_qubits_;
      fail(Errc::kInvalidSize, os.str());
    }
    if (!std::isfinite(t.coefficient)) {
      fail(Errc::kInvalidSize, "non-finite Pauli coefficient");
    }
    auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) {
      return m.letters == t.letters;
    });
    if (it == merged.end()) {
      merged.push_back(std::move(t));
    } else {
      it->coefficient += t.coefficient;
    }
  }
  for (auto& t : merged) {
    if (std::abs(t.coefficient) >= kDropTolerance) terms_.push_back(std::move(t));
  }
}

PauliSum PauliSum::scaled(double factor) const {
  std::vector<PauliString> t = terms_;
  for (auto& term : t) term.coefficient *= factor;
  return PauliSum(n_qubits_, std::move(t));
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  if (other.n_qubits_ != n_qubits_) {
    fail(Errc::kDimensionMismatch, "adding Pauli sums of different sizes");
  }
  std::vector<PauliString> t = terms_;
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  return PauliSum(n_qubits_, std::move(t));
}

namespace {

std::vector<Pauli> letters_with(std::size_t n,
                                std::initializer_list<std::pair<std::size_t, Pauli>> at) {
  std::vector<Pauli> l(n, Pauli::I);
  for (auto [q, p] : at) l[q] = p;
  return l;
}

}  // namespace

PauliSum build_tfim(std::size_t n, double J, double h) {
  if (n < 2) fail(Errc::kInvalidSize, "TFIM needs at least 2 qubits");
  std::vector<PauliString> terms;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    terms.emplace_back(-J, letters_with(n, {{i, Pauli::X}, {i + 1, Pauli::X}}));
  }
  for (std::size_t i = 0; i < n; ++i) {
    terms.emplace_back(-h, letters_with(n, {{i, Pauli::Z}}));
  }
  return PauliSum(n, std::move(terms));
}

PauliSum build_kitaev_ring(std::size_t L, double J, double h) {
  if (L < 3) fail(Errc::kInvalidSize, "Kitaev ring needs at least 3 sites");
  std::vector<PauliString> terms;
  for (std::size_t i = 0; i + 1 < L; ++i) {
    terms.emplace_back(-J, letters_with(L, {{i, Pauli::X}, {i + 1, Pauli::X}}));
  }
  std::vector<Pauli> string(L, Pauli::Z);
  string.front() = Pauli::Y;
  string.back() = Pauli::Y;
  terms.emplace_back(-J, std::move(string));
  for (std::size_t i = 0; i < L; ++i) {
    terms.emplace_back(-h, letters_with(L, {{i, Pauli::Z}}));
  }
  return PauliSum(L, std::move(terms));
}

PauliSum build_heisenberg_fields(double J, double h) {
  return PauliSum(2, {{-J, "XX"}, {-J, "YY"}, {-J, "ZZ"},
                      {-h, "ZI"}, {-h, "IZ"}, {-h, "XI"},
                      {-h, "IX"}, {-h, "YI"}, {-h, "IY"}});
}

PauliSum build_qbm_hamiltonian(std::span<const double> coeffs,
                               std::span<const PauliSum> basis) {
  if (coeffs.size() != basis.size()) {
    std::ostringstream os;
    os << "QBM Hamiltonian has " << coeffs.size() << " coefficients for "
       << basis.size() << " basis elements";
    fail(Errc::kLengthMismatch, os.str());
  }
  if (basis.empty()) fail(Errc::kLengthMismatch, "QBM basis is empty");
  const std::size_t n = basis.front().n_qubits();
  std::vector<PauliString> terms;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].n_qubits() != n) {
      fail(Errc::kDimensionMismatch, "QBM basis elements differ in size");
    }
    for (const auto& t : basis[k].terms()) {
      terms.emplace_back(coeffs[k] * t.coefficient, t.letters);
    }
  }
  return PauliSum(n, std::move(terms));
}

ComplexMatrix to_dense(const PauliSum& hs) {
  if (hs.n_qubits() > kMaxDenseQubits) {
    std::ostringstream os;
    os << "dense realisation limited to " << kMaxDenseQubits << " qubits, got "
       << hs.n_qubits();
    fail(Errc::kTooLarge, os.str());
  }
  const std::uint64_t dim = std::uint64_t{1} << hs.n_qubits();
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                        static_cast<Eigen::Index>(dim));
  for (const auto& t : hs.terms()) {
    const PauliMasks masks = PauliMasks::of(t.letters);
    for (std::uint64_t x = 0; x < dim; ++x) {
      m(static_cast<Eigen::Index>(x ^ masks.flip_mask),
        static_cast<Eigen::Index>(x)) += t.coefficient * masks.phase(x);
    }
  }
  return m;
}

Complex pauli_expectation(std::span<const Pauli> letters,
                          const ComplexMatrix& rho) {
  const std::uint64_t dim = std::uint64_t{1} << letters.size();
  if (static_cast<std::uint64_t>(rho.rows()) != dim) {
    fail(Errc::kDimensionMismatch, "Pauli string and state differ in size");
  }
  const PauliMasks masks = PauliMasks::of(letters);
  Complex acc = 0.0;
  for (std::uint64_t y = 0; y < dim; ++y) {
    acc += masks.phase(y) * rho(static_cast<Eigen::Index>(y),
                                static_cast<Eigen::Index>(y ^ masks.flip_mask));
  }
  return acc;
}

double expectation(const PauliSum& hs, const DensityMatrix& rho) {
  if (rho.n_qubits() != hs.n_qubits()) {
    std::ostringstream os;
    os << "expectation: Hamiltonian on " << hs.n_qubits()
       << " qubits, state on " << rho.n_qubits();
    fail(Errc::kDimensionMismatch, os.str());
  }
  double acc = 0.0;
  for (const auto& t : hs.terms()) {
    acc += t.coefficient * pauli_expectation(t.letters, rho.matrix()).real();
  }
  return acc;
}

namespace {

BlockPartition first_fit(const std::vector<PauliString>& terms) {
  BlockPartition out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    bool placed = false;
    for (auto& group : out.groups) {
      const bool fits = std::all_of(group.begin(), group.end(), [&](auto j) {
        return terms[i].commutes_with(terms[j]);
      });
      if (fits) {
        group.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) out.groups.push_back({i});
  }
  return out;
}

// Assigns terms [i, n) to at most k groups; groups are opened in order so
// each partition is visited once.
bool cover(const std::vector<std::vector<bool>>& commute, std::size_t i,
           std::size_t k, std::vector<std::vector<std::size_t>>& groups) {
  if (i == commute.size()) return true;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const bool fits = std::all_of(groups[g].begin(), groups[g].end(),
                                  [&](std::size_t j) { return commute[i][j]; });
    if (!fits) continue;
    groups[g].push_back(i);
    if (cover(commute, i + 1, k, groups)) return true;
    groups[g].pop_back();
  }
  if (groups.size() < k) {
    groups.push_back({i});
    if (cover(commute, i + 1, k, groups)) return true;
    groups.pop_back();
  }
  return false;
}

}  // namespace

BlockPartition commuting_blocks(const PauliSum& hs) {
  const auto& terms = hs.terms();
  BlockPartition greedy = first_fit(terms);
  if (terms.size() > kExactBlockLimit) return greedy;
  std::vector<std::vector<bool>> commute(terms.size(),
                                         std::vector<bool>(terms.size()));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < terms.size(); ++j) {
      commute[i][j] = terms[i].commutes_with(terms[j]);
    }
  }
  for (std::size_t k = 1; k < greedy.count(); ++k) {
    BlockPartition out;
    if (cover(commute, 0, k, out.groups)) return out;
  }
  return greedy;
}

std::string to_text(const PauliSum& hs) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& t : hs.terms()) {
    os << t.coefficient << ' ' << t.letter_string() << '\n';
  }
  return os.str();
}

PauliSum pauli_sum_from_text(std::string_view text) {
  std::vector<PauliString> terms;
  std::size_t n = 0;
  bool have_n = false;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string coef_text;
    std::string letters;
    std::string extra;
    ls >> coef_text >> letters;
    if (letters.empty() || (ls >> extra)) {
      fail(Errc::kParseError,
           "line " + std::to_string(lineno) + ": expected '<coef> <letters>'");
    }
    double coef = 0.0;
    const auto [ptr, ec] = std::from_chars(
        coef_text.data(), coef_text.data() + coef_text.size(), coef);
    if (ec != std::errc{} || ptr != coef_text.data() + coef_text.size()) {
      fail(Errc::kParseError, "line " + std::to_string(lineno) +
                                  ": bad coefficient '" + coef_text + "'");
    }
    if (!have_n) {
      n = letters.size();
      have_n = true;
    } else if (letters.size() != n) {
      fail(Errc::kParseError, "line " + std::to_string(lineno) +
                                  ": inconsistent number of qubits");
    }
    terms.emplace_back(coef, letters);
  }
  if (!have_n) fail(Errc::kParseError, "no Pauli terms found");
  return PauliSum(n, std::move(terms));
}

}  // namespace metavqt
