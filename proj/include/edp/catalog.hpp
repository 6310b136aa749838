#pragma once

// Explicit code catalog (line-oriented text), exhaustive existence search for
// small stabilizer code parameters, and the breeding-versus-hashing report.

#include "edp/eaqecc.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace edp {

struct CatalogEntry {
  std::string name;
  int p = 2;
  int n = 0;
  int k = 0;
  int d = 0;
  bool pure = false;
  std::vector<SympVector> generators;
  std::string note;  // comment lines preceding the header
  StabilizerCode code;
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Format:
///   # comment
///   code <name> p=<p> n=<n> k=<k> d=<d> pure=<0|1>
///   <a-digits>|<b-digits>      (n - k lines)
/// Entries are separated by blank lines. Every entry is re-validated: the
/// recomputed (k, d, purity) must equal the claimed values.
std::vector<CatalogEntry> load_catalog(std::istream& in);
std::vector<CatalogEntry> load_catalog_text(const std::string& text);
std::vector<CatalogEntry> load_catalog_file(const std::string& path);

std::string format_entry(const CatalogEntry& e);

/// Text of the catalog that ships with the library.
const std::string& builtin_catalog_text();
const std::vector<CatalogEntry>& builtin_catalog();
const CatalogEntry* find_entry(const std::vector<CatalogEntry>& catalog, const std::string& name);

struct SearchQuery {
  int p = 2;
  int n = 0;
  int k = 0;
  int d_min = 1;
  bool purity_required = false;
  std::uint64_t budget = 20'000'000;       // node cap
  double max_projected = 1e8;              // refusal threshold on (p^{2n})^{n-k}
};

struct SearchResult {
  enum class Verdict { exists, not_exists, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::vector<SympVector> witness;
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;          // complete candidate subspaces examined
  std::uint64_t replay_nodes = 0;    // second, independent enumeration (not_exists only)
};

std::string to_string(SearchResult::Verdict v);

enum class SearchStrategy {
  echelon_dfs,        // one node per reduced echelon form, last pivot first
  extension_closure,  // level-by-level growth with canonical deduplication
};

/// Projected node count before pruning: (p^{2n})^{n-k}.
double projected_nodes(const SearchQuery& q);

/// Throws InfeasibleError when the projected count exceeds q.max_projected.
/// not_exists verdicts are replayed with the second strategy and must agree.
SearchResult search_codes(const SearchQuery& q);
SearchResult search_codes(const SearchQuery& q, SearchStrategy strategy);

/// Every code satisfying q, as canonical subspaces in search order. Throws
/// InfeasibleError when the budget runs out before the space is exhausted.
std::vector<SympSubspace> enumerate_codes(const SearchQuery& q);

/// Whether a code of these exact parameters satisfies the query.
bool satisfies(const StabilizerCode& code, const SearchQuery& q);

struct CompareRow {
  enum class Kind { hashing, breeding };
  Kind kind = Kind::hashing;
  std::string code_name;
  int p = 2;
  int code_n = 0;
  int code_k = 0;
  int code_d = 0;
  std::vector<int> punctured;  // 0-based
  int noisy = 0;
  int c = 0;
  int gross = 0;
  int net = 0;
  int d = 0;  // guarantee: every (t, e) with 2t + e < d
  std::string hashing_search = "n/a";  // verdict for a hashing code [[noisy, net, d_req]]
  bool dominant = false;
};

struct CompareOptions {
  std::optional<int> noisy_pairs;
  std::optional<std::pair<int, int>> correction;  // (t, e)
  std::uint64_t search_budget = 20'000'000;
};

/// Minimum distance a row must have to guarantee `correction`, or the row's own d.
int required_distance(const CompareRow& row, const CompareOptions& opts);

/// Hashing rows for every catalog code, breeding rows for every pure code
/// punctured on its last c positions, 1 <= c < d. A breeding row is flagged
/// when its net yield is positive, beats every hashing row at the same noisy
/// count and guarantee, and the search certifies no hashing code matches it.
std::vector<CompareRow> compare_report(const std::vector<CatalogEntry>& catalog, const CompareOptions& opts = {});

std::string to_string(CompareRow::Kind k);

}  // namespace edp
