#include "edp/catalog.hpp"

#include "edp/edp_engine.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

namespace edp {

namespace {

constexpr const char* kBuiltinCatalog = R"(# Codes shipped with the library. Every parameter below is recomputed on load.

# X^6 and Z^6; puncturing one position gives the 5-pair breeding protocol.
code six_qubit_x6z6 p=2 n=6 k=4 d=2 pure=1
111111|000000
000000|111111

# The perfect five-qubit code, cyclic shifts of XZZXI.
code five_qubit p=2 n=5 k=1 d=3 pure=1
10010|01100
01001|00110
10100|00011
01010|10001

# X^4 and Z^4.
code four_qubit_x4z4 p=2 n=4 k=2 d=2 pure=1
1111|0000
0000|1111

# Gottesman's [[8,3,3]] code.
code gottesman_8_3_3 p=2 n=8 k=3 d=3 pure=1
11111111|00000000
00000000|11111111
01011010|00001111
01010101|00110011
01101001|01010101
)";

std::string trim(std::string s) {
  const auto hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int_field(const std::string& token, const std::string& key, int line) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw CatalogError("line " + std::to_string(line) + ": expected " + prefix + "<value>, got '" + token + "'");
  }
  const std::string value = token.substr(prefix.size());
  if (value.empty() || !std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      value.size() > 6) {
    throw CatalogError("line " + std::to_string(line) + ": bad value for " + key + ": '" + value + "'");
  }
  return std::stoi(value);
}

struct PendingEntry {
  std::string name;
  int p = 2, n = 0, k = 0, d = 0;
  bool pure = false;
  int header_line = 0;
  std::string note;
  std::vector<SympVector> rows;
};

CatalogEntry finish(PendingEntry&& pe) {
  const PrimeField f(pe.p);
  const auto fail = [&](const std::string& what) {
    return CatalogError("entry '" + pe.name + "' (line " + std::to_string(pe.header_line) + "): " + what);
  };
  StabilizerCode code = [&] {
    try {
      return make_code(f, pe.n, pe.rows);
    } catch (const CodeConstructionError& e) {
      throw fail(e.what());
    }
  }();
  const DistanceInfo& info = code.distance_info();
  if (code.k() != pe.k) {
    throw fail("claims k=" + std::to_string(pe.k) + " but generators give k=" + std::to_string(code.k()));
  }
  if (!info.d) throw fail("claims d=" + std::to_string(pe.d) + " but the distance is undefined");
  if (*info.d != pe.d) {
    throw fail("claims d=" + std::to_string(pe.d) + " but recomputed d=" + std::to_string(*info.d));
  }
  if (info.pure != pe.pure) {
    throw fail(std::string("claims pure=") + (pe.pure ? "1" : "0") + " but recomputed pure=" +
               (info.pure ? "1" : "0"));
  }
  return CatalogEntry{pe.name, pe.p, pe.n, pe.k, pe.d, pe.pure, std::move(pe.rows), pe.note, std::move(code)};
}

}  // namespace

std::vector<CatalogEntry> load_catalog(std::istream& in) {
  std::vector<CatalogEntry> out;
  std::optional<PendingEntry> cur;
  std::string note;
  std::string raw;
  int line = 0;

  auto close = [&] {
    if (!cur) return;
    if (static_cast<int>(cur->rows.size()) != cur->n - cur->k) {
      throw CatalogError("entry '" + cur->name + "' (line " + std::to_string(cur->header_line) + "): expected " +
                         std::to_string(cur->n - cur->k) + " generator lines, found " +
                         std::to_string(cur->rows.size()));
    }
    out.push_back(finish(std::move(*cur)));
    cur.reset();
  };

  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) {
      const auto hash = raw.find('#');
      if (hash == std::string::npos) {
        close();
        note.clear();
      } else if (!cur) {
        const std::string c = raw.substr(hash + 1);
        const auto b = c.find_first_not_of(' ');
        if (b != std::string::npos) note += (note.empty() ? "" : " ") + c.substr(b);
      }
      continue;
    }
    if (text.rfind("code ", 0) == 0 || text == "code") {
      close();
      std::istringstream ss(text);
      std::string kw, name, tp, tn, tk, td, tpure, extra;
      ss >> kw >> name >> tp >> tn >> tk >> td >> tpure;
      if (tpure.empty() || (ss >> extra)) {
        throw CatalogError("line " + std::to_string(line) +
                           ": header must be 'code <name> p=<p> n=<n> k=<k> d=<d> pure=<0|1>'");
      }
      PendingEntry pe;
      pe.name = name;
      pe.header_line = line;
      pe.p = parse_int_field(tp, "p", line);
      pe.n = parse_int_field(tn, "n", line);
      pe.k = parse_int_field(tk, "k", line);
      pe.d = parse_int_field(td, "d", line);
      const int pure = parse_int_field(tpure, "pure", line);
      if (pure > 1) throw CatalogError("line " + std::to_string(line) + ": pure must be 0 or 1");
      pe.pure = pure == 1;
      try {
        PrimeField check(pe.p);
      } catch (const std::invalid_argument& e) {
        throw CatalogError("line " + std::to_string(line) + ": " + e.what());
      }
      if (pe.n < 1 || pe.k > pe.n) {
        throw CatalogError("line " + std::to_string(line) + ": need n >= 1 and k <= n");
      }
      if (pe.n > 32) throw CatalogError("line " + std::to_string(line) + ": n above 32 is not supported");
      pe.note = note;
      note.clear();
      cur = std::move(pe);
      continue;
    }
    if (!cur) throw CatalogError("line " + std::to_string(line) + ": generator row outside any entry");
    const auto bar = text.find('|');
    if (bar == std::string::npos || bar != static_cast<size_t>(cur->n) || text.size() != static_cast<size_t>(2 * cur->n + 1)) {
      throw CatalogError("line " + std::to_string(line) + ": expected " + std::to_string(cur->n) +
                         " digits on each side of '|', got '" + text + "'");
    }
    try {
      cur->rows.push_back(SympVector::parse(PrimeField(cur->p), text));
    } catch (const std::invalid_argument& e) {
      throw CatalogError("line " + std::to_string(line) + ": " + e.what());
    }
  }
  close();
  return out;
}

std::vector<CatalogEntry> load_catalog_text(const std::string& text) {
  std::istringstream in(text);
  return load_catalog(in);
}

std::vector<CatalogEntry> load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog file '" + path + "'");
  return load_catalog(in);
}

std::string format_entry(const CatalogEntry& e) {
  std::ostringstream out;
  out << "code " << e.name << " p=" << e.p << " n=" << e.n << " k=" << e.k << " d=" << e.d
      << " pure=" << (e.pure ? 1 : 0) << '\n';
  for (const auto& g : e.generators) out << g.to_string() << '\n';
  return out.str();
}

const std::string& builtin_catalog_text() {
  static const std::string text(kBuiltinCatalog);
  return text;
}

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> catalog = load_catalog_text(builtin_catalog_text());
  return catalog;
}

const CatalogEntry* find_entry(const std::vector<CatalogEntry>& catalog, const std::string& name) {
  for (const auto& e : catalog) {
    const std::string params = std::to_string(e.n) + "," + std::to_string(e.k) + "," + std::to_string(e.d);
    if (e.name == name || name == params || name == "[[" + params + "]]") return &e;
  }
  return nullptr;
}

std::string to_string(SearchResult::Verdict v) {
  switch (v) {
    case SearchResult::Verdict::exists: return "exists";
    case SearchResult::Verdict::not_exists: return "not_exists";
    case SearchResult::Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(CompareRow::Kind k) { return k == CompareRow::Kind::hashing ? "hashing" : "breeding"; }

// ---------------------------------------------------------------------------
// Exhaustive search

namespace {

using Raw = std::vector<Scalar>;

struct SearchContext {
  const SearchQuery& q;
  PrimeField f;
  int n;
  int len;
  int dim;
  std::vector<Raw> low_weight;  // nonzero vectors of weight < d_min
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  bool exhausted_budget = false;

  explicit SearchContext(const SearchQuery& query)
      : q(query), f(query.p), n(query.n), len(2 * query.n), dim(query.n - query.k) {
    // Vectors of weight 1 .. d_min - 1, any nonzero pair per supported position.
    const int pairs = q.p * q.p;
    std::vector<int> support;
    std::function<void(int, int)> choose = [&](int start, int remaining) {
      if (remaining == 0) {
        std::vector<int> digit(support.size(), 1);
        for (;;) {
          Raw v(static_cast<size_t>(len), 0);
          for (size_t i = 0; i < support.size(); ++i) {
            v[static_cast<size_t>(support[i])] = digit[i] / q.p;
            v[static_cast<size_t>(n + support[i])] = digit[i] % q.p;
          }
          low_weight.push_back(std::move(v));
          size_t j = 0;
          for (; j < digit.size(); ++j) {
            if (++digit[j] < pairs) break;
            digit[j] = 1;
          }
          if (j == digit.size()) return;
        }
      }
      for (int i = start; i <= n - remaining; ++i) {
        support.push_back(i);
        choose(i + 1, remaining - 1);
        support.pop_back();
      }
    };
    for (int w = 1; w < q.d_min && w <= n; ++w) choose(0, w);
  }

  Scalar product(const Raw& u, const Raw& v) const {
    long long acc = 0;
    for (int i = 0; i < n; ++i) {
      acc += static_cast<long long>(u[static_cast<size_t>(i)]) * v[static_cast<size_t>(n + i)] -
             static_cast<long long>(u[static_cast<size_t>(n + i)]) * v[static_cast<size_t>(i)];
    }
    return f.reduce(acc);
  }

  int weight(const Raw& v) const {
    int w = 0;
    for (int i = 0; i < n; ++i) w += (v[static_cast<size_t>(i)] != 0 || v[static_cast<size_t>(n + i)] != 0);
    return w;
  }

  FpMatrix to_matrix(const std::vector<Raw>& rows) const {
    FpMatrix m(static_cast<Index>(rows.size()), len);
    for (size_t r = 0; r < rows.size(); ++r) {
      for (int c = 0; c < len; ++c) m(static_cast<Index>(r), c) = rows[r][static_cast<size_t>(c)];
    }
    return m;
  }

  // Every nonzero element of span(prev + new_row) outside span(prev) has weight >= d_min.
  bool new_elements_heavy(const std::vector<Raw>& prev, const Raw& row) const {
    if (q.d_min <= 1) return true;
    const int p = q.p;
    Raw v = row;
    std::vector<int> digit(prev.size(), 0);
    for (;;) {
      if (weight(v) < q.d_min) return false;
      size_t j = 0;
      for (; j < prev.size(); ++j) {
        for (int c = 0; c < len; ++c) {
          v[static_cast<size_t>(c)] = f.add(v[static_cast<size_t>(c)], prev[j][static_cast<size_t>(c)]);
        }
        if (++digit[j] < p) break;
        digit[j] = 0;
      }
      if (j == prev.size()) return true;
    }
  }

  // Leaf test for a complete self-orthogonal basis.
  bool accepts(const std::vector<Raw>& rows) const {
    if (dim >= n) return false;  // C^⊥s = C: distance undefined
    const Echelon e = rref(to_matrix(rows), f);
    for (const Raw& v : low_weight) {
      bool commutes = true;
      for (const Raw& r : rows) {
        if (product(r, v) != 0) {
          commutes = false;
          break;
        }
      }
      if (!commutes) continue;
      if (q.purity_required) return false;
      FpVector vv(len);
      for (int c = 0; c < len; ++c) vv(c) = v[static_cast<size_t>(c)];
      if (!in_row_space(e, vv, f)) return false;
    }
    if (q.purity_required) {
      const StabilizerCode code(SympSubspace(f, n, to_matrix(rows)));
      return code.distance_info().pure;
    }
    return true;
  }

  bool spend() {
    if (++nodes > q.budget) {
      exhausted_budget = true;
      return false;
    }
    return true;
  }
};

// Rows are assigned last-pivot-first; each reduced echelon form is produced once.
class EchelonSearch {
 public:
  EchelonSearch(SearchContext& ctx, std::function<bool(const std::vector<Raw>&)> on_leaf)
      : ctx_(ctx), on_leaf_(std::move(on_leaf)) {}

  void run() {
    if (ctx_.dim == 0) {
      ++ctx_.leaves;
      if (ctx_.accepts({})) on_leaf_({});
      return;
    }
    chosen_.clear();
    pivots_.clear();
    place(ctx_.dim - 1, ctx_.len);
  }

 private:
  // Returns false to stop the whole search.
  bool place(int row, int pivot_limit) {
    for (int pivot = row; pivot < pivot_limit; ++pivot) {
      std::vector<int> free_cols;
      for (int c = pivot + 1; c < ctx_.len; ++c) {
        if (std::find(pivots_.begin(), pivots_.end(), c) == pivots_.end()) free_cols.push_back(c);
      }
      Raw v(static_cast<size_t>(ctx_.len), 0);
      v[static_cast<size_t>(pivot)] = 1;
      std::vector<int> digit(free_cols.size(), 0);
      for (;;) {
        if (!ctx_.spend()) return false;
        if (admissible(v)) {
          chosen_.push_back(v);
          pivots_.push_back(pivot);
          bool go_on = true;
          if (row == 0) {
            ++ctx_.leaves;
            if (ctx_.accepts(chosen_)) go_on = on_leaf_(chosen_);
          } else {
            go_on = place(row - 1, pivot);
          }
          chosen_.pop_back();
          pivots_.pop_back();
          if (!go_on) return false;
        }
        size_t j = free_cols.size();
        bool done = true;
        while (j-- > 0) {
          auto& cell = v[static_cast<size_t>(free_cols[j])];
          if (++digit[j] < ctx_.q.p) {
            cell = static_cast<Scalar>(digit[j]);
            done = false;
            break;
          }
          digit[j] = 0;
          cell = 0;
        }
        if (done) break;
      }
    }
    return true;
  }

  bool admissible(const Raw& v) const {
    for (const Raw& r : chosen_) {
      if (ctx_.product(r, v) != 0) return false;
    }
    return !ctx_.q.purity_required || ctx_.new_elements_heavy(chosen_, v);
  }

  SearchContext& ctx_;
  std::function<bool(const std::vector<Raw>&)> on_leaf_;
  std::vector<Raw> chosen_;
  std::vector<int> pivots_;
};

// Grows every self-orthogonal subspace one dimension at a time from its
// symplectic dual, deduplicating on the reduced echelon basis.
struct ClosureOutcome {
  bool complete = false;
  std::optional<std::vector<Raw>> witness;
};

ClosureOutcome closure_search(SearchContext& ctx) {
  const PrimeField& f = ctx.f;
  std::vector<std::vector<Raw>> level{{}};
  for (int j = 0; j < ctx.dim; ++j) {
    std::map<Raw, std::vector<Raw>> next;
    for (const auto& basis : level) {
      const SympSubspace s(f, ctx.n, ctx.to_matrix(basis).eval());
      const SympSubspace dual = symp_dual(s);
      // Enumerate the dual by odometer over its basis.
      const FpMatrix& db = dual.basis();
      Raw v(static_cast<size_t>(ctx.len), 0);
      std::vector<int> digit(static_cast<size_t>(db.rows()), 0);
      for (;;) {
        size_t t = 0;
        for (; t < digit.size(); ++t) {
          for (int c = 0; c < ctx.len; ++c) {
            v[static_cast<size_t>(c)] = f.add(v[static_cast<size_t>(c)], db(static_cast<Index>(t), c));
          }
          if (++digit[t] < ctx.q.p) break;
          digit[t] = 0;
        }
        if (t == digit.size()) break;
        FpVector vv(ctx.len);
        for (int c = 0; c < ctx.len; ++c) vv(c) = v[static_cast<size_t>(c)];
        const FpVector rep = reduce_modulo(s.echelon(), vv, f);
        if (rep.isZero()) continue;
        if (ctx.q.purity_required) {
          Raw r(rep.data(), rep.data() + rep.size());
          if (!ctx.new_elements_heavy(basis, r)) continue;
        }
        const Echelon grown = rref(stack(s.basis(), rep), f);
        Raw key(grown.basis.data(), grown.basis.data() + grown.basis.size());
        if (next.contains(key)) continue;
        if (!ctx.spend()) return {};
        std::vector<Raw> rows;
        for (Index r = 0; r < grown.basis.rows(); ++r) {
          rows.emplace_back(grown.basis.row(r).data(), grown.basis.row(r).data() + ctx.len);
        }
        next.emplace(std::move(key), std::move(rows));
      }
    }
    level.clear();
    for (auto& [key, rows] : next) level.push_back(std::move(rows));
  }
  for (const auto& basis : level) {
    ++ctx.leaves;
    if (ctx.accepts(basis)) return {true, basis};
  }
  return {true, std::nullopt};
}

void validate_query(const SearchQuery& q) {
  PrimeField check(q.p);
  if (q.n < 1 || q.n > 32) throw std::invalid_argument("search needs 1 <= n <= 32");
  if (q.k < 0 || q.n - q.k < 1) throw std::invalid_argument("search needs 0 <= k <= n - 1");
  if (q.d_min < 1) throw std::invalid_argument("search needs d_min >= 1");
  const double projected = projected_nodes(q);
  if (projected > q.max_projected) {
    std::ostringstream msg;
    msg << "projected " << projected << " nodes exceeds the " << q.max_projected << " node limit";
    throw InfeasibleError(msg.str());
  }
}

std::vector<SympVector> to_witness(const SearchContext& ctx, const std::vector<Raw>& rows) {
  std::vector<SympVector> out;
  for (const Raw& r : rows) {
    FpVector v(ctx.len);
    for (int c = 0; c < ctx.len; ++c) v(c) = r[static_cast<size_t>(c)];
    out.emplace_back(ctx.f, v);
  }
  return out;
}

}  // namespace

double projected_nodes(const SearchQuery& q) {
  double per = 1;
  for (int i = 0; i < 2 * q.n; ++i) per *= q.p;
  double total = 1;
  for (int i = 0; i < q.n - q.k; ++i) total *= per;
  return total;
}

bool satisfies(const StabilizerCode& code, const SearchQuery& q) {
  if (code.field().modulus() != q.p || code.n() != q.n || code.k() != q.k) return false;
  const DistanceInfo& info = code.distance_info();
  if (!info.d || *info.d < q.d_min) return false;
  return !q.purity_required || info.pure;
}

SearchResult search_codes(const SearchQuery& q, SearchStrategy strategy) {
  validate_query(q);
  SearchContext ctx(q);
  SearchResult result;
  std::optional<std::vector<Raw>> witness;
  if (strategy == SearchStrategy::echelon_dfs) {
    EchelonSearch search(ctx, [&](const std::vector<Raw>& rows) {
      witness = rows;
      return false;
    });
    search.run();
  } else {
    witness = closure_search(ctx).witness;
  }
  result.nodes = ctx.nodes;
  result.leaves = ctx.leaves;
  if (witness) {
    result.verdict = SearchResult::Verdict::exists;
    result.witness = to_witness(ctx, *witness);
    const StabilizerCode code = make_code(ctx.f, q.n, result.witness);
    if (!satisfies(code, q)) throw std::logic_error("search witness failed re-validation");
  } else if (ctx.exhausted_budget) {
    result.verdict = SearchResult::Verdict::inconclusive;
  } else {
    result.verdict = SearchResult::Verdict::not_exists;
  }
  return result;
}

std::vector<SympSubspace> enumerate_codes(const SearchQuery& q) {
  validate_query(q);
  SearchContext ctx(q);
  std::vector<SympSubspace> out;
  EchelonSearch search(ctx, [&](const std::vector<Raw>& rows) {
    out.emplace_back(ctx.f, q.n, ctx.to_matrix(rows));
    return true;
  });
  search.run();
  if (ctx.exhausted_budget) throw InfeasibleError("enumeration budget exhausted");
  return out;
}

SearchResult search_codes(const SearchQuery& q) {
  SearchResult primary = search_codes(q, SearchStrategy::echelon_dfs);
  if (primary.verdict == SearchResult::Verdict::not_exists) {
    const SearchResult replay = search_codes(q, SearchStrategy::extension_closure);
    if (replay.verdict == SearchResult::Verdict::exists) {
      throw std::logic_error("search strategies disagree on non-existence");
    }
    if (replay.verdict == SearchResult::Verdict::inconclusive) {
      primary.verdict = SearchResult::Verdict::inconclusive;
    }
    primary.replay_nodes = replay.nodes;
  }
  return primary;
}

// ---------------------------------------------------------------------------
// Comparison report

int required_distance(const CompareRow& row, const CompareOptions& opts) {
  if (opts.correction) return 2 * opts.correction->first + opts.correction->second + 1;
  return row.d;
}

std::vector<CompareRow> compare_report(const std::vector<CatalogEntry>& catalog, const CompareOptions& opts) {
  std::vector<CompareRow> rows;
  for (const auto& e : catalog) {
    const DistanceInfo& info = e.code.distance_info();
    if (!info.d) continue;
    CompareRow h;
    h.kind = CompareRow::Kind::hashing;
    h.code_name = e.name;
    h.p = e.p;
    h.code_n = e.n;
    h.code_k = e.code.k();
    h.code_d = *info.d;
    h.noisy = e.n;
    h.gross = h.net = e.code.k();
    h.d = *info.d;
    rows.push_back(h);
    if (!info.pure) continue;
    for (int c = 1; c < *info.d && c < e.n; ++c) {
      const BreedingProtocolSpec spec = convert_pure(e.code, last_positions(e.n, c));
      CompareRow b = h;
      b.kind = CompareRow::Kind::breeding;
      b.punctured = spec.ebit_positions;
      b.noisy = spec.params.n;
      b.c = spec.params.c;
      b.gross = spec.params.gross_k;
      b.net = spec.params.net_yield();
      b.d = *spec.params.d;
      rows.push_back(b);
    }
  }

  std::erase_if(rows, [&](const CompareRow& r) {
    if (opts.noisy_pairs && r.noisy != *opts.noisy_pairs) return true;
    return opts.correction && r.d < required_distance(r, opts);
  });

  std::map<std::tuple<int, int, int, int>, std::string> searched;
  for (auto& r : rows) {
    if (r.kind != CompareRow::Kind::breeding || r.net <= 0) continue;
    const int d_req = required_distance(r, opts);
    bool beats_catalog = true;
    for (const auto& h : rows) {
      if (h.kind == CompareRow::Kind::hashing && h.noisy == r.noisy && h.d >= d_req && h.net >= r.net) {
        beats_catalog = false;
      }
    }
    // No [[noisy, net, d_req]] code rules out every k >= net as well: adding a
    // logical operator to the stabilizer of a larger-k code keeps d >= d_req.
    const auto key = std::make_tuple(r.p, r.noisy, r.net, d_req);
    auto it = searched.find(key);
    if (it == searched.end()) {
      SearchQuery q;
      q.p = r.p;
      q.n = r.noisy;
      q.k = r.net;
      q.d_min = d_req;
      q.budget = opts.search_budget;
      std::string verdict;
      try {
        verdict = to_string(search_codes(q).verdict);
      } catch (const InfeasibleError&) {
        verdict = "refused";
      }
      it = searched.emplace(key, verdict).first;
    }
    r.hashing_search = it->second;
    r.dominant = beats_catalog && r.hashing_search == "not_exists";
  }

  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    return std::tie(a.noisy, a.kind, a.code_name, a.c) < std::tie(b.noisy, b.kind, b.code_name, b.c);
  });
  return rows;
}

}  // namespace edp
