#include "edp/symplectic.hpp"

#include <algorithm>
#include <stdexcept>

namespace edp {

namespace {

void require_same_space(const SympVector& u, const SympVector& v, const char* what) {
  if (!(u.field() == v.field()) || u.num_positions() != v.num_positions()) {
    throw std::invalid_argument(std::string(what) + ": field or length mismatch");
  }
}

}  // namespace

SympVector::SympVector(PrimeField field, FpVector coords) : field_(field), coords_(std::move(coords)) {
  if (coords_.cols() % 2 != 0) throw std::invalid_argument("symplectic vector needs even length");
  coords_ = reduced(coords_, field_);
}

SympVector SympVector::zero(PrimeField field, int n) { return {field, FpVector::Zero(2 * n)}; }

SympVector SympVector::from_parts(PrimeField field, const FpVector& a, const FpVector& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("x- and z-parts differ in length");
  FpVector c(a.cols() + b.cols());
  c << a, b;
  return {field, std::move(c)};
}

SympVector SympVector::parse(PrimeField field, std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos) {
    throw std::invalid_argument("expected <a-digits>|<b-digits>, got '" + std::string(text) + "'");
  }
  const std::string_view a = text.substr(0, bar);
  const std::string_view b = text.substr(bar + 1);
  if (a.size() != b.size()) {
    throw std::invalid_argument("x- and z-parts differ in length in '" + std::string(text) + "'");
  }
  FpVector c(static_cast<Index>(a.size() + b.size()));
  Index j = 0;
  for (std::string_view part : {a, b}) {
    for (char ch : part) {
      if (ch < '0' || ch > '9' || ch - '0' >= field.modulus()) {
        throw std::invalid_argument("digit '" + std::string(1, ch) + "' not in F_" +
                                    std::to_string(field.modulus()));
      }
      c(j++) = ch - '0';
    }
  }
  return {field, std::move(c)};
}

SympVector SympVector::single(PrimeField field, int n, int pos, Scalar a, Scalar b) {
  if (pos < 0 || pos >= n) throw std::out_of_range("position out of range");
  FpVector c = FpVector::Zero(2 * n);
  c(pos) = a;
  c(n + pos) = b;
  return {field, std::move(c)};
}

std::string SympVector::to_string() const {
  // Digits for p <= 10, otherwise comma separated residues.
  const int n = num_positions();
  const bool compact = field_.modulus() <= 10;
  std::string out;
  for (int i = 0; i < 2 * n; ++i) {
    if (i == n) out += '|';
    else if (!compact && i > 0) out += ',';
    out += std::to_string(coords_(i));
  }
  if (n == 0) out = "|";
  return out;
}

SympVector SympVector::operator+(const SympVector& o) const {
  require_same_space(*this, o, "add");
  return {field_, coords_ + o.coords_};
}

SympVector SympVector::operator-(const SympVector& o) const {
  require_same_space(*this, o, "sub");
  return {field_, coords_ - o.coords_};
}

SympVector SympVector::scaled(Scalar s) const { return {field_, coords_ * field_.reduce(s)}; }

std::strong_ordering operator<=>(const SympVector& u, const SympVector& v) {
  const auto& a = u.coords_;
  const auto& b = v.coords_;
  const Index len = std::min(a.cols(), b.cols());
  for (Index i = 0; i < len; ++i) {
    if (a(i) != b(i)) return a(i) <=> b(i);
  }
  return a.cols() <=> b.cols();
}

SympSubspace::SympSubspace(PrimeField field, int n, const FpMatrix& rows)
    : field_(field), n_(n), echelon_(rref(rows, field)) {
  if (rows.cols() != 2 * n) throw std::invalid_argument("subspace rows must have 2n columns");
}

SympSubspace SympSubspace::zero(PrimeField field, int n) { return {field, n, FpMatrix(0, 2 * n)}; }

SympSubspace SympSubspace::full(PrimeField field, int n) {
  return {field, n, FpMatrix::Identity(2 * n, 2 * n)};
}

SympSubspace SympSubspace::span(PrimeField field, int n, std::span<const SympVector> generators) {
  FpMatrix rows(static_cast<Index>(generators.size()), 2 * n);
  for (size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].num_positions() != n || !(generators[i].field() == field)) {
      throw std::invalid_argument("generator " + std::to_string(i + 1) + " is not in F_" +
                                  std::to_string(field.modulus()) + "^" + std::to_string(2 * n));
    }
    rows.row(static_cast<Index>(i)) = generators[i].coords();
  }
  return {field, n, rows};
}

SympVector SympSubspace::basis_vector(int i) const { return {field_, echelon_.basis.row(i)}; }

std::vector<SympVector> SympSubspace::basis_vectors() const {
  std::vector<SympVector> out;
  out.reserve(static_cast<size_t>(dim()));
  for (int i = 0; i < dim(); ++i) out.push_back(basis_vector(i));
  return out;
}

bool SympSubspace::contains(const SympVector& v) const {
  return v.num_positions() == n_ && in_row_space(echelon_, v.coords(), field_);
}

SympVector SympSubspace::reduce(const SympVector& v) const {
  if (v.num_positions() != n_) throw std::invalid_argument("reduce: length mismatch");
  return {field_, reduce_modulo(echelon_, v.coords(), field_)};
}

bool SympSubspace::contains(const SympSubspace& other) const {
  if (other.n_ != n_) return false;
  for (Index i = 0; i < other.basis().rows(); ++i) {
    if (!in_row_space(echelon_, other.basis().row(i), field_)) return false;
  }
  return true;
}

Scalar symp_product(const SympVector& u, const SympVector& v) {
  require_same_space(u, v, "symp_product");
  const int n = u.num_positions();
  const auto& cu = u.coords();
  const auto& cv = v.coords();
  long long acc = 0;
  for (int i = 0; i < n; ++i) {
    acc += static_cast<long long>(cu(i)) * cv(n + i) - static_cast<long long>(cu(n + i)) * cv(i);
  }
  return u.field().reduce(acc);
}

int symp_weight(const SympVector& v) {
  const int n = v.num_positions();
  int w = 0;
  for (int i = 0; i < n; ++i) w += (v.x(i) != 0 || v.z(i) != 0) ? 1 : 0;
  return w;
}

SympVector star(const SympVector& v) {
  const int n = v.num_positions();
  FpVector c = v.coords();
  c.tail(n) = -c.tail(n);
  return {v.field(), std::move(c)};
}

SympSubspace star(const SympSubspace& s) {
  FpMatrix rows = s.basis();
  const int n = s.num_positions();
  rows.rightCols(n) = -rows.rightCols(n);
  return {s.field(), n, rows};
}

FpMatrix symp_check_matrix(const FpMatrix& rows, int n, const PrimeField& f) {
  FpMatrix out(rows.rows(), 2 * n);
  out.leftCols(n) = -rows.rightCols(n);
  out.rightCols(n) = rows.leftCols(n);
  return reduced(out, f);
}

SympSubspace symp_dual(const SympSubspace& s) {
  const int n = s.num_positions();
  const FpMatrix check = symp_check_matrix(s.basis(), n, s.field());
  return {s.field(), n, kernel(check, s.field())};
}

GramMatrix gram(const SympSubspace& s) {
  const auto vs = s.basis_vectors();
  const Index m = static_cast<Index>(vs.size());
  GramMatrix g(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) g(i, j) = symp_product(vs[i], vs[j]);
  }
  return g;
}

bool is_self_orthogonal(const SympSubspace& s) { return gram(s).isZero(); }

int gram_rank(const SympSubspace& s) {
  const auto r = static_cast<int>(rank(gram(s), s.field()));
  if (r % 2 != 0) {
    throw std::logic_error("alternating Gram matrix has odd rank " + std::to_string(r));
  }
  return r;
}

SympVector puncture(const SympVector& v, std::span<const int> positions) {
  const int n = v.num_positions();
  std::vector<bool> drop(static_cast<size_t>(n), false);
  for (int pos : positions) {
    if (pos < 0 || pos >= n) throw std::out_of_range("puncture position out of range");
    drop[static_cast<size_t>(pos)] = true;
  }
  const int kept = n - static_cast<int>(std::count(drop.begin(), drop.end(), true));
  FpVector c(2 * kept);
  int j = 0;
  for (int i = 0; i < n; ++i) {
    if (drop[static_cast<size_t>(i)]) continue;
    c(j) = v.x(i);
    c(kept + j) = v.z(i);
    ++j;
  }
  return {v.field(), std::move(c)};
}

SympSubspace puncture(const SympSubspace& s, std::span<const int> positions) {
  const auto vs = s.basis_vectors();
  std::vector<SympVector> punctured;
  punctured.reserve(vs.size());
  for (const auto& v : vs) punctured.push_back(puncture(v, positions));
  const int n = s.num_positions();
  std::vector<int> uniq(positions.begin(), positions.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  for (int pos : uniq) {
    if (pos < 0 || pos >= n) throw std::out_of_range("puncture position out of range");
  }
  return SympSubspace::span(s.field(), n - static_cast<int>(uniq.size()), punctured);
}

SymplecticExtension symp_extend(const SympSubspace& d) {
  const PrimeField& f = d.field();
  const int n = d.num_positions();

  // Symplectic Gram-Schmidt: split the basis into hyperbolic pairs (u, w) with
  // <u, w> = 1 and a radical orthogonal to everything.
  std::vector<SympVector> work = d.basis_vectors();
  std::vector<std::pair<SympVector, SympVector>> pairs;
  for (;;) {
    size_t ui = 0, wi = 0;
    bool found = false;
    for (ui = 0; ui < work.size() && !found; ++ui) {
      for (wi = ui + 1; wi < work.size(); ++wi) {
        if (symp_product(work[ui], work[wi]) != 0) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) break;
    const SympVector u = work[ui];
    const SympVector w = work[wi].scaled(f.inv(symp_product(work[ui], work[wi])));
    std::vector<SympVector> rest;
    for (size_t i = 0; i < work.size(); ++i) {
      if (i == ui || i == wi) continue;
      // x - <x,w> u + <x,u> w is orthogonal to both u and w.
      const SympVector& x = work[i];
      rest.push_back(x - u.scaled(symp_product(x, w)) + w.scaled(symp_product(x, u)));
    }
    pairs.emplace_back(u, w);
    work = std::move(rest);
  }

  const int c = static_cast<int>(pairs.size());
  const int big_n = n + c;
  FpMatrix rows = FpMatrix::Zero(2 * c + static_cast<Index>(work.size()), 2 * big_n);
  auto place = [&](Index row, const SympVector& v) {
    rows.row(row).segment(0, n) = v.coords().head(n);
    rows.row(row).segment(big_n, n) = v.coords().tail(n);
  };
  for (int i = 0; i < c; ++i) {
    place(2 * i, pairs[static_cast<size_t>(i)].first);
    place(2 * i + 1, pairs[static_cast<size_t>(i)].second);
    // New position n+i: u gets (1|0), w gets (0|-1), contributing -1 to <u,w>.
    rows(2 * i, n + i) = 1;
    rows(2 * i + 1, big_n + n + i) = f.neg(1);
  }
  for (size_t i = 0; i < work.size(); ++i) place(2 * c + static_cast<Index>(i), work[i]);

  SymplecticExtension ext{SympSubspace(f, big_n, rows), c};
  if (ext.extended.dim() != d.dim() || !is_self_orthogonal(ext.extended)) {
    throw std::logic_error("symplectic extension failed to produce a self-orthogonal lift");
  }
  return ext;
}

}  // namespace edp
