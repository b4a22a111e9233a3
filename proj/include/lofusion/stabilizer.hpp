#pragma once

// Pauli strings and a generator-only stabilizer tableau.
//
// A Pauli is stored as i^phase X^x Z^z (X part to the left), so
// (i^a X^x1 Z^z1)(i^b X^x2 Z^z2) = i^(a+b) (-1)^(z1.x2) X^(x1^x2) Z^(z1^z2).
// Columns carry stable qubit ids; comparisons reorder by id.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lofusion/rng.hpp"

namespace lofusion {

struct PauliString {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;
  int phase = 0;  // power of i

  PauliString() = default;
  explicit PauliString(std::size_t n) : x(n, 0), z(n, 0) {}

  std::size_t size() const { return x.size(); }

  static PauliString single(std::size_t n, std::size_t q, char p) {
    PauliString s(n);
    switch (p) {
      case 'X': s.x[q] = 1; break;
      case 'Z': s.z[q] = 1; break;
      case 'Y': s.x[q] = s.z[q] = 1; s.phase = 1; break;
      case 'I': break;
      default: throw std::invalid_argument(std::string("unknown Pauli '") + p + "'");
    }
    return s;
  }

  /// Parses "+XZI", "-YY", "iZ"... one letter per qubit.
  static PauliString parse(const std::string& text) {
    std::size_t i = 0;
    int ph = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) ph = text[i++] == '-' ? 2 : 0;
    if (i < text.size() && text[i] == 'i') { ph += 1; ++i; }
    PauliString s(text.size() - i);
    for (std::size_t q = 0; i < text.size(); ++i, ++q) s = s * single(s.size(), q, text[i]);
    s.phase = (s.phase + ph) % 4;
    return s;
  }

  bool is_identity() const {
    for (std::size_t q = 0; q < size(); ++q)
      if (x[q] || z[q]) return false;
    return true;
  }

  /// Hermitian Paulis have phase + x.z even; for those, sign() is +1 or -1.
  int yz_count() const {
    int c = 0;
    for (std::size_t q = 0; q < size(); ++q) c += x[q] & z[q];
    return c;
  }
  bool is_hermitian() const { return ((phase + yz_count()) & 1) == 0; }

  /// Eigenvalue sign of a Hermitian Pauli relative to the product of its letters (Y = iXZ).
  int sign() const { return ((phase - yz_count()) % 4 + 4) % 4 == 0 ? 1 : -1; }

  bool commutes(const PauliString& o) const {
    int c = 0;
    for (std::size_t q = 0; q < size(); ++q) c += (x[q] & o.z[q]) ^ (z[q] & o.x[q]);
    return (c & 1) == 0;
  }

  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Pauli size mismatch");
    PauliString r(a.size());
    int ph = a.phase + b.phase;
    for (std::size_t q = 0; q < a.size(); ++q) {
      ph += 2 * (a.z[q] & b.x[q]);
      r.x[q] = a.x[q] ^ b.x[q];
      r.z[q] = a.z[q] ^ b.z[q];
    }
    r.phase = ph % 4;
    return r;
  }

  bool operator==(const PauliString& o) const { return x == o.x && z == o.z && phase == o.phase; }

  std::string to_string() const {
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    int ph = ((phase - yz_count()) % 4 + 4) % 4;  // phase relative to letter product
    std::string s = prefix[ph];
    for (std::size_t q = 0; q < size(); ++q) s += x[q] ? (z[q] ? 'Y' : 'X') : (z[q] ? 'Z' : 'I');
    return s;
  }
};

struct TableauMeasurement {
  int outcome = 0;  // eigenvalue (-1)^outcome
  bool deterministic = false;
  double probability = 1.0;
  std::size_t row = 0;  // generator now equal to (-1)^outcome P
};

/// Stabilizer state on n qubits given by n independent commuting generators.
class StabilizerTableau {
 public:
  StabilizerTableau() = default;

  /// |0...0> on the given qubit ids.
  explicit StabilizerTableau(std::vector<int> ids) : ids_(std::move(ids)) {
    for (std::size_t q = 0; q < ids_.size(); ++q) rows_.push_back(PauliString::single(ids_.size(), q, 'Z'));
  }

  StabilizerTableau(std::vector<int> ids, std::vector<PauliString> rows) : ids_(std::move(ids)), rows_(std::move(rows)) {
    if (rows_.size() != ids_.size()) throw std::invalid_argument("need one generator per qubit");
    for (const auto& r : rows_)
      if (r.size() != ids_.size() || !r.is_hermitian()) throw std::invalid_argument("bad generator");
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = i + 1; j < rows_.size(); ++j)
        if (!rows_[i].commutes(rows_[j])) throw std::invalid_argument("generators do not commute");
    if (rank() != rows_.size()) throw std::invalid_argument("generators are dependent");
  }

  std::size_t size() const { return ids_.size(); }
  const std::vector<int>& ids() const { return ids_; }
  const std::vector<PauliString>& rows() const { return rows_; }

  std::size_t column(int id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw std::out_of_range("qubit " + std::to_string(id) + " not in tableau");
    return static_cast<std::size_t>(it - ids_.begin());
  }

  bool has(int id) const { return std::find(ids_.begin(), ids_.end(), id) != ids_.end(); }

  void rename(int from, int to) {
    if (has(to)) throw std::invalid_argument("qubit id already present");
    ids_[column(from)] = to;
  }

  /// Appends qubits in |+> (X-stabilized).
  void add_plus(int id) {
    if (has(id)) throw std::invalid_argument("qubit id already present");
    ids_.push_back(id);
    for (auto& r : rows_) {
      r.x.push_back(0);
      r.z.push_back(0);
    }
    rows_.push_back(PauliString::single(ids_.size(), ids_.size() - 1, 'X'));
  }

  // Clifford conjugations, by column id.
  void h(int id) {
    const std::size_t q = column(id);
    for (auto& r : rows_) {
      r.phase = (r.phase + 2 * (r.x[q] & r.z[q])) % 4;
      std::swap(r.x[q], r.z[q]);
    }
  }

  void s(int id) {
    const std::size_t q = column(id);
    for (auto& r : rows_) {
      r.phase = (r.phase + r.x[q]) % 4;
      r.z[q] ^= r.x[q];
    }
  }

  void sdg(int id) {
    const std::size_t q = column(id);
    for (auto& r : rows_) {
      r.phase = (r.phase + 3 * r.x[q]) % 4;
      r.z[q] ^= r.x[q];
    }
  }

  void cz(int a, int b) {
    const std::size_t qa = column(a), qb = column(b);
    if (qa == qb) throw std::invalid_argument("CZ needs two distinct qubits");
    for (auto& r : rows_) {
      r.phase = (r.phase + 2 * (r.x[qa] & r.x[qb])) % 4;
      r.z[qa] ^= r.x[qb];
      r.z[qb] ^= r.x[qa];
    }
  }

  void pauli(int id, char p) {
    const std::size_t q = column(id);
    for (auto& r : rows_) {
      int anti = 0;
      if (p == 'X') anti = r.z[q];
      else if (p == 'Z') anti = r.x[q];
      else if (p == 'Y') anti = r.x[q] ^ r.z[q];
      else if (p != 'I') throw std::invalid_argument("unknown Pauli");
      r.phase = (r.phase + 2 * anti) % 4;
    }
  }

  /// Pauli on named qubits, e.g. letters {{3,'X'},{5,'Z'}}, with sign +1.
  PauliString pauli_on(const std::vector<std::pair<int, char>>& letters) const {
    PauliString p(size());
    for (const auto& [id, c] : letters) p = p * PauliString::single(size(), column(id), c);
    return p;
  }

  /// Outcome probabilities follow the Born rule. `forced` selects an outcome
  /// (throws if it has probability zero); otherwise `rng` samples it.
  TableauMeasurement measure(const PauliString& p, std::optional<int> forced, Rng* rng) {
    if (p.size() != size() || !p.is_hermitian() || p.is_identity())
      throw std::invalid_argument("measurement needs a non-identity Hermitian Pauli");
    std::optional<std::size_t> pivot;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!rows_[i].commutes(p)) {
        if (!pivot) {
          pivot = i;
        } else {
          rows_[i] = rows_[i] * rows_[*pivot];
        }
      }
    TableauMeasurement m;
    if (pivot) {
      m.outcome = forced ? (*forced & 1) : draw(rng);
      m.probability = 0.5;
      rows_[*pivot] = p;
      if (m.outcome) rows_[*pivot].phase = (rows_[*pivot].phase + 2) % 4;
      m.row = *pivot;
      return m;
    }
    // Deterministic: write p as a product of generators.
    auto combo = solve(p);
    if (!combo) throw std::logic_error("commuting Pauli not in stabilizer group");
    PauliString prod(size());
    std::size_t first = rows_.size();
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if ((*combo)[i]) {
        prod = prod * rows_[i];
        if (first == rows_.size()) first = i;
      }
    m.deterministic = true;
    m.outcome = prod.phase == p.phase ? 0 : 1;
    if (forced && (*forced & 1) != m.outcome) throw std::domain_error("forced outcome has probability zero");
    rows_[first] = prod;
    m.row = first;
    return m;
  }

  TableauMeasurement measure(int id, char basis, std::optional<int> forced, Rng* rng) {
    return measure(PauliString::single(size(), column(id), basis), forced, rng);
  }

  /// Expectation value of a Hermitian Pauli: +1, -1 or 0.
  int expectation(const PauliString& p) const {
    for (const auto& r : rows_)
      if (!r.commutes(p)) return 0;
    auto combo = solve(p);
    if (!combo) throw std::logic_error("commuting Pauli not in stabilizer group");
    PauliString prod(size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if ((*combo)[i]) prod = prod * rows_[i];
    return prod.phase == p.phase ? 1 : -1;
  }

  /// Removes qubits that are unentangled from the rest (after measuring them).
  void discard(const std::vector<int>& ids) {
    std::vector<std::size_t> cols;
    for (int id : ids) cols.push_back(column(id));
    // Eliminate on the discarded columns; pivot rows must be supported there only.
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c : cols)
      for (int part = 0; part < 2; ++part) {
        auto bit = [&](const PauliString& r) { return part ? r.z[c] : r.x[c]; };
        std::size_t r = next;
        while (r < rows_.size() && !bit(rows_[r])) ++r;
        if (r == rows_.size()) continue;
        std::swap(rows_[r], rows_[next]);
        for (std::size_t i = 0; i < rows_.size(); ++i)
          if (i != next && bit(rows_[i])) rows_[i] = rows_[i] * rows_[next];
        pivots.push_back(next++);
      }
    if (pivots.size() != cols.size()) throw std::logic_error("discarded qubits are not in a pure state");
    // Clear the pivot rows' support on kept qubits using the remaining generators.
    std::size_t r_next = next;
    for (int part = 0; part < 2; ++part)
      for (std::size_t c = 0; c < size(); ++c) {
        auto bit = [&](const PauliString& r) { return part ? r.z[c] : r.x[c]; };
        std::size_t r = r_next;
        while (r < rows_.size() && !bit(rows_[r])) ++r;
        if (r == rows_.size()) continue;
        std::swap(rows_[r], rows_[r_next]);
        for (std::size_t i = 0; i < rows_.size(); ++i)
          if (i != r_next && bit(rows_[i])) rows_[i] = rows_[i] * rows_[r_next];
        ++r_next;
      }
    for (std::size_t i = 0; i < next; ++i)
      for (std::size_t q = 0; q < size(); ++q)
        if (std::find(cols.begin(), cols.end(), q) == cols.end() && (rows_[i].x[q] || rows_[i].z[q]))
          throw std::logic_error("discarded qubits are entangled with the rest");
    std::vector<PauliString> kept(rows_.begin() + static_cast<std::ptrdiff_t>(next), rows_.end());
    std::vector<int> kept_ids;
    std::vector<std::size_t> kept_cols;
    for (std::size_t q = 0; q < size(); ++q)
      if (std::find(cols.begin(), cols.end(), q) == cols.end()) {
        kept_ids.push_back(ids_[q]);
        kept_cols.push_back(q);
      }
    for (auto& r : kept) {
      PauliString t(kept_cols.size());
      for (std::size_t k = 0; k < kept_cols.size(); ++k) {
        t.x[k] = r.x[kept_cols[k]];
        t.z[k] = r.z[kept_cols[k]];
      }
      t.phase = r.phase;
      r = std::move(t);
    }
    ids_ = std::move(kept_ids);
    rows_ = std::move(kept);
  }

  /// Tableau with columns sorted by id.
  StabilizerTableau sorted() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ids_[a] < ids_[b]; });
    StabilizerTableau t;
    for (auto q : order) t.ids_.push_back(ids_[q]);
    for (const auto& r : rows_) {
      PauliString p(size());
      for (std::size_t k = 0; k < size(); ++k) {
        p.x[k] = r.x[order[k]];
        p.z[k] = r.z[order[k]];
      }
      p.phase = r.phase;
      t.rows_.push_back(std::move(p));
    }
    return t;
  }

  /// Reduced row echelon form over (x | z) with phases carried along; unique per stabilizer group.
  std::vector<PauliString> canonical_rows() const {
    std::vector<PauliString> r = sorted().rows_;
    const std::size_t n = size();
    std::size_t next = 0;
    for (int part = 0; part < 2; ++part)
      for (std::size_t c = 0; c < n; ++c) {
        auto bit = [&](const PauliString& p) { return part ? p.z[c] : p.x[c]; };
        std::size_t k = next;
        while (k < r.size() && !bit(r[k])) ++k;
        if (k == r.size()) continue;
        std::swap(r[k], r[next]);
        for (std::size_t i = 0; i < r.size(); ++i)
          if (i != next && bit(r[i])) r[i] = r[i] * r[next];
        ++next;
      }
    return r;
  }

  /// Same stabilizer group (signs included).
  bool same_state(const StabilizerTableau& o) const {
    if (sorted_ids() != o.sorted_ids()) return false;
    return canonical_rows() == o.canonical_rows();
  }

  /// Same stabilizer group up to signs, i.e. equal up to a Pauli correction.
  bool same_up_to_pauli(const StabilizerTableau& o) const {
    if (sorted_ids() != o.sorted_ids()) return false;
    auto a = canonical_rows(), b = o.canonical_rows();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].x != b[i].x || a[i].z != b[i].z) return false;
    return true;
  }

  std::vector<int> sorted_ids() const {
    auto s = ids_;
    std::sort(s.begin(), s.end());
    return s;
  }

  std::size_t rank() const {
    auto r = rows_;
    std::size_t next = 0;
    for (int part = 0; part < 2; ++part)
      for (std::size_t c = 0; c < size(); ++c) {
        auto bit = [&](const PauliString& p) { return part ? p.z[c] : p.x[c]; };
        std::size_t k = next;
        while (k < r.size() && !bit(r[k])) ++k;
        if (k == r.size()) continue;
        std::swap(r[k], r[next]);
        for (std::size_t i = next + 1; i < r.size(); ++i)
          if (bit(r[i])) r[i] = r[i] * r[next];
        ++next;
      }
    return next;
  }

 private:
  static int draw(Rng* rng) {
    if (!rng) throw std::invalid_argument("random outcome requested without a generator");
    return rng->coin() ? 1 : 0;
  }

  /// GF(2) coefficients c with prod_i rows_i^c_i = +-p (up to phase), if any.
  std::optional<std::vector<std::uint8_t>> solve(const PauliString& p) const {
    const std::size_t n = size(), m = rows_.size();
    // Augmented system: columns are generators, rows are the 2n bit positions.
    std::vector<std::vector<std::uint8_t>> a(2 * n, std::vector<std::uint8_t>(m + 1, 0));
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t i = 0; i < m; ++i) {
        a[q][i] = rows_[i].x[q];
        a[n + q][i] = rows_[i].z[q];
      }
      a[q][m] = p.x[q];
      a[n + q][m] = p.z[q];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < 2 * n; ++c) {
      std::size_t k = r;
      while (k < 2 * n && !a[k][c]) ++k;
      if (k == 2 * n) continue;
      std::swap(a[k], a[r]);
      for (std::size_t i = 0; i < 2 * n; ++i)
        if (i != r && a[i][c])
          for (std::size_t j = c; j <= m; ++j) a[i][j] ^= a[r][j];
      pivot_col.push_back(c);
      ++r;
    }
    for (std::size_t i = r; i < 2 * n; ++i)
      if (a[i][m]) return std::nullopt;
    std::vector<std::uint8_t> coeff(m, 0);
    for (std::size_t i = 0; i < r; ++i) coeff[pivot_col[i]] = a[i][m];
    return coeff;
  }

  std::vector<int> ids_;
  std::vector<PauliString> rows_;
};

}  // namespace lofusion
