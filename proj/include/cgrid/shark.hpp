#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cgrid {

/// n = 2^k q with q odd.
struct SharkNumber {
  int n = 1;
  int k = 0;
  int q = 1;
  explicit SharkNumber(int value);
};

enum class SharkOrder { precedes, equals, succeeds };

/// Sharkovskii order: 3, 5, 7, ..., 2*3, 2*5, ..., 4*3, ..., 8, 4, 2, 1.
SharkOrder shark_compare(const SharkNumber& a, const SharkNumber& b);
inline bool shark_precedes(int a, int b) { return shark_compare(SharkNumber(a), SharkNumber(b)) == SharkOrder::precedes; }

/// { m <= upto : n precedes m } together with n itself (when n <= upto).
std::set<int> shark_successors(int n, int upto);

/// Cyclic permutation of spatial positions 1..n; sigma[p-1] is the image of p.
struct Pattern {
  std::vector<int> sigma;

  Pattern() = default;
  explicit Pattern(std::vector<int> s);  ///< @throws std::invalid_argument unless a single n-cycle

  int n() const { return static_cast<int>(sigma.size()); }
  int operator()(int p) const { return sigma[static_cast<std::size_t>(p - 1)]; }
  Pattern reversed() const;  ///< mirror image p -> n+1-p
  std::string to_string() const;

  /// Parses "s1,s2,...,sn".
  static Pattern parse(const std::string& text);
};

/// Closed interval between orbit positions i < j.
struct OInterval {
  int i = 0, j = 0;
  bool operator==(const OInterval&) const = default;
  auto operator<=>(const OInterval&) const = default;
  bool contains(const OInterval& o) const { return i <= o.i && o.j <= j; }
  bool contains(int p) const { return i <= p && p <= j; }
  /// int(*this) meets o
  bool interior_meets(const OInterval& o) const { return o.j > i && o.i < j; }
};

/// All O-intervals in lexicographic order.
std::vector<OInterval> all_ointervals(int n);

/// I -> J: some O-subinterval K of I has f(dK) spanning J.
bool covers_forced(const Pattern& p, const OInterval& a, const OInterval& b);
/// I >-> J: f(dI) already spans J.
bool covers_proper(const Pattern& p, const OInterval& a, const OInterval& b);

struct CoveringDigraph {
  std::vector<OInterval> nodes;
  std::vector<std::vector<char>> forced, proper;  ///< adjacency matrices over nodes
  std::size_t index(const OInterval& v) const;
};
CoveringDigraph covering_digraph(const Pattern& p);

struct CoveringLoop {
  std::vector<OInterval> k;
  bool proper = false;
  bool non_repeating = false;
  std::string origin;  ///< "stefan", "doubling", "digraph"

  int m() const { return static_cast<int>(k.size()); }
  std::string to_string() const;
};

/// Every step K_i -> K_{i+1 mod m} holds (forced or proper covering).
bool loop_steps_hold(const Pattern& p, const std::vector<OInterval>& k, bool proper);
/// int K_0 misses every K_i, i >= 1.
bool loop_separated(const std::vector<OInterval>& k);
/// Some endpoint x of the K_i has f^i(x) in K_i for all i and f^m(x) = x.
bool loop_followed_by_endpoint(const Pattern& p, const std::vector<OInterval>& k);
/// Both non-repeating conditions.
bool loop_non_repeating(const Pattern& p, const std::vector<OInterval>& k);

struct StefanResult {
  std::vector<OInterval> j;             ///< J_0..J_{l-1}; empty when doubling
  std::optional<Pattern> half;          ///< f^2 on the left half when doubling
  bool doubling() const { return j.empty(); }
};

/// Štefan sequence of minimal even length, or the doubling signal when every
/// orbit point switches sides.
/// @throws std::invalid_argument for n < 2.
/// @throws std::runtime_error when neither applies (not expected for cyclic patterns).
StefanResult stefan_sequence(const Pattern& p);

/// Non-repeating forced m-loop from the Štefan templates or the doubling
/// recursion, else a non-repeating proper loop from the digraph search.
std::optional<CoveringLoop> non_repeating_loop(const Pattern& p, int m);

/// Shrinks each K_i to an O-subinterval covering K_{i+1} properly.
/// @throws std::invalid_argument when a step is not a forced covering.
CoveringLoop properize_loop(const Pattern& p, const CoveringLoop& loop);

/// Search of the proper digraph: simple cycles through K_0 padded by
/// repeating self-covering vertices.
std::optional<CoveringLoop> proper_loop_search(const Pattern& p, int m, std::size_t budget = 2'000'000);

struct PeriodWitness {
  int m = 0;
  std::optional<CoveringLoop> loop;  ///< proper and non-repeating
  bool orbit = false;                ///< m = n realized by the orbit itself
};

struct ForcedPeriods {
  std::set<int> periods;
  std::vector<PeriodWitness> witnesses;  ///< one per member, increasing m
};

ForcedPeriods forced_periods(const Pattern& p, int upto);

/// Re-checks a witness against the pattern.
bool witness_valid(const Pattern& p, const PeriodWitness& w);

/// Least periods m <= upto of the piecewise-linear connect-the-dots map.
/// @throws std::length_error when n > 9 or upto > 14.
std::set<int> pl_oracle_periods(const Pattern& p, int upto);

}  // namespace cgrid
