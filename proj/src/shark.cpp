#include "cgrid/shark.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cgrid {

SharkNumber::SharkNumber(int value) : n(value) {
  if (value < 1) throw std::invalid_argument("Sharkovskii numbers start at 1");
  q = value;
  while (q % 2 == 0) {
    q /= 2;
    ++k;
  }
}

SharkOrder shark_compare(const SharkNumber& a, const SharkNumber& b) {
  if (a.n == b.n) return SharkOrder::equals;
  bool before;
  if (a.q > 1 && b.q > 1)
    before = a.k < b.k || (a.k == b.k && a.q < b.q);
  else if (a.q > 1)
    before = true;
  else if (b.q > 1)
    before = false;
  else
    before = a.k > b.k;
  return before ? SharkOrder::precedes : SharkOrder::succeeds;
}

std::set<int> shark_successors(int n, int upto) {
  if (upto < 1) throw std::invalid_argument("upto must be positive");
  std::set<int> out;
  for (int m = 1; m <= upto; ++m)
    if (m == n || shark_precedes(n, m)) out.insert(m);
  return out;
}

Pattern::Pattern(std::vector<int> s) : sigma(std::move(s)) {
  const int n = this->n();
  if (n < 1) throw std::invalid_argument("empty pattern");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : sigma) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) throw std::invalid_argument("pattern is not a permutation of 1..n");
    seen[static_cast<std::size_t>(v - 1)] = 1;
  }
  int p = 1, len = 0;
  do {
    p = (*this)(p);
    ++len;
  } while (p != 1);
  if (len != n) throw std::invalid_argument("pattern is not a single cycle");
}

Pattern Pattern::reversed() const {
  const int n = this->n();
  std::vector<int> r(sigma.size());
  for (int p = 1; p <= n; ++p) r[static_cast<std::size_t>(p - 1)] = n + 1 - (*this)(n + 1 - p);
  return Pattern(std::move(r));
}

std::string Pattern::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < sigma.size(); ++i) os << (i ? "," : "") << sigma[i];
  return os.str();
}

Pattern Pattern::parse(const std::string& text) {
  std::vector<int> s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad pattern entry '" + item + "'");
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size()) throw std::invalid_argument("bad pattern entry '" + item + "'");
    s.push_back(v);
  }
  return Pattern(std::move(s));
}

std::vector<OInterval> all_ointervals(int n) {
  std::vector<OInterval> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
  return out;
}

bool covers_forced(const Pattern& p, const OInterval& a, const OInterval& b) {
  int lo = p(a.i), hi = lo;
  for (int x = a.i + 1; x <= a.j; ++x) {
    lo = std::min(lo, p(x));
    hi = std::max(hi, p(x));
  }
  return lo <= b.i && b.j <= hi;
}

bool covers_proper(const Pattern& p, const OInterval& a, const OInterval& b) {
  const int u = p(a.i), v = p(a.j);
  return std::min(u, v) <= b.i && b.j <= std::max(u, v);
}

std::size_t CoveringDigraph::index(const OInterval& v) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  if (it == nodes.end() || *it != v) throw std::out_of_range("not an O-interval of this pattern");
  return static_cast<std::size_t>(it - nodes.begin());
}

CoveringDigraph covering_digraph(const Pattern& p) {
  CoveringDigraph g;
  g.nodes = all_ointervals(p.n());
  const std::size_t v = g.nodes.size();
  g.forced.assign(v, std::vector<char>(v, 0));
  g.proper.assign(v, std::vector<char>(v, 0));
  for (std::size_t a = 0; a < v; ++a)
    for (std::size_t b = 0; b < v; ++b) {
      g.proper[a][b] = covers_proper(p, g.nodes[a], g.nodes[b]);
      // forced = proper for some O-subinterval
      for (const auto& k : g.nodes)
        if (g.nodes[a].contains(k) && covers_proper(p, k, g.nodes[b])) {
          g.forced[a][b] = 1;
          break;
        }
    }
  return g;
}

std::string CoveringLoop::to_string() const {
  std::ostringstream os;
  for (std::size_t t = 0; t < k.size(); ++t) os << (t ? (proper ? " >-> " : " -> ") : "") << "[" << k[t].i << "," << k[t].j << "]";
  if (!k.empty()) os << (proper ? " >-> " : " -> ") << "[" << k[0].i << "," << k[0].j << "]";
  return os.str();
}

bool loop_steps_hold(const Pattern& p, const std::vector<OInterval>& k, bool proper) {
  if (k.empty()) return false;
  for (std::size_t t = 0; t < k.size(); ++t) {
    const auto& a = k[t];
    const auto& b = k[(t + 1) % k.size()];
    if (a.i < 1 || a.j > p.n() || a.i >= a.j) return false;
    if (!(proper ? covers_proper(p, a, b) : covers_forced(p, a, b))) return false;
  }
  return true;
}

bool loop_separated(const std::vector<OInterval>& k) {
  for (std::size_t t = 1; t < k.size(); ++t)
    if (k[0].interior_meets(k[t])) return false;
  return true;
}

bool loop_followed_by_endpoint(const Pattern& p, const std::vector<OInterval>& k) {
  const std::size_t m = k.size();
  if (m % static_cast<std::size_t>(p.n()) != 0) return false;  // orbit points have period n
  std::set<int> ends;
  for (const auto& v : k) {
    ends.insert(v.i);
    ends.insert(v.j);
  }
  for (int x : ends) {
    int y = x;
    bool follows = true;
    for (std::size_t t = 0; t < m && follows; ++t) {
      follows = k[t].contains(y);
      y = p(y);
    }
    if (follows) return true;
  }
  return false;
}

bool loop_non_repeating(const Pattern& p, const std::vector<OInterval>& k) {
  return !k.empty() && loop_separated(k) && !loop_followed_by_endpoint(p, k);
}

namespace {

bool switches_sides(const Pattern& p) {
  const int n = p.n();
  if (n % 2) return false;
  for (int x = 1; x <= n / 2; ++x)
    if (p(x) <= n / 2) return false;
  return true;
}

Pattern left_square(const Pattern& p) {
  std::vector<int> h;
  for (int x = 1; x <= p.n() / 2; ++x) h.push_back(p(p(x)));
  return Pattern(std::move(h));
}

// Calls visit on Štefan sequences of even length l in lexicographic order
// until it returns true. Returns whether some visit returned true.
bool for_each_stefan(const Pattern& p, int l, const std::function<bool(const std::vector<OInterval>&)>& visit, std::size_t& budget) {
  const auto nodes = all_ointervals(p.n());
  std::vector<OInterval> seq(static_cast<std::size_t>(l));
  std::function<bool(int)> extend = [&](int t) -> bool {
    if (t == l) return covers_forced(p, seq[static_cast<std::size_t>(l - 1)], seq[0]) && visit(seq);
    for (const auto& c : nodes) {
      if (budget == 0) return false;
      --budget;
      if (seq[0].interior_meets(c)) continue;
      if (!covers_forced(p, seq[static_cast<std::size_t>(t - 1)], c) && t > 1) continue;
      if (t == 1 && !(covers_forced(p, c, c) && covers_forced(p, seq[0], c))) continue;
      if (t % 2 == 1 && !covers_forced(p, seq[0], c)) continue;
      if (std::find(seq.begin() + 1, seq.begin() + t, c) != seq.begin() + t) continue;
      seq[static_cast<std::size_t>(t)] = c;
      if (extend(t + 1)) return true;
    }
    return false;
  };
  for (const auto& j0 : nodes) {
    seq[0] = j0;
    if (extend(1)) return true;
  }
  return false;
}

std::vector<OInterval> stefan_template(const std::vector<OInterval>& j, int m) {
  const int l = static_cast<int>(j.size());
  std::vector<OInterval> k;
  if (m >= l) {
    k.push_back(j[0]);
    for (int t = 0; t < m - l + 1; ++t) k.push_back(j[1]);
    for (int t = 2; t < l; ++t) k.push_back(j[static_cast<std::size_t>(t)]);
  } else if (m % 2 == 0) {
    k.push_back(j[0]);
    for (int t = l - m + 1; t < l; ++t) k.push_back(j[static_cast<std::size_t>(t)]);
  }
  return k;
}

constexpr std::size_t kStefanBudget = 4'000'000;

std::optional<CoveringLoop> from_stefan(const Pattern& p, int m) {
  std::optional<CoveringLoop> found;
  std::size_t budget = kStefanBudget;
  for (int l = 2; l <= p.n() && !found; l += 2) {
    if (m < l && m % 2) continue;
    for_each_stefan(p, l, [&](const std::vector<OInterval>& j) {
      auto k = stefan_template(j, m);
      if (k.empty() || !loop_steps_hold(p, k, false) || !loop_non_repeating(p, k)) return false;
      found = CoveringLoop{std::move(k), false, true, "stefan"};
      return true;
    }, budget);
  }
  return found;
}

std::optional<CoveringLoop> from_doubling(const Pattern& p, int m) {
  if (m % 2 || !switches_sides(p)) return std::nullopt;
  const Pattern half = left_square(p);
  const auto q = non_repeating_loop(half, m / 2);
  if (!q) return std::nullopt;
  const int n = p.n();
  std::vector<OInterval> right;
  for (const auto& v : all_ointervals(n))
    if (v.i > n / 2) right.push_back(v);
  const std::size_t r = q->k.size();
  std::vector<OInterval> k(2 * r);
  std::size_t budget = 100'000;
  std::function<bool(std::size_t)> place = [&](std::size_t t) -> bool {
    if (t == r) return loop_steps_hold(p, k, false) && loop_non_repeating(p, k);
    const auto& a = q->k[t];
    const auto& b = q->k[(t + 1) % r];
    for (const auto& c : right) {
      if (budget == 0) return false;
      --budget;
      if (!covers_forced(p, a, c) || !covers_forced(p, c, b)) continue;
      k[2 * t] = a;
      k[2 * t + 1] = c;
      if (place(t + 1)) return true;
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  return CoveringLoop{std::move(k), false, true, "doubling"};
}

}  // namespace

StefanResult stefan_sequence(const Pattern& p) {
  if (p.n() < 2) throw std::invalid_argument("Štefan sequences need n >= 2");
  StefanResult res;
  std::size_t budget = kStefanBudget;
  for (int l = 2; l <= p.n() && res.j.empty(); l += 2)
    for_each_stefan(p, l, [&](const std::vector<OInterval>& j) {
      res.j = j;
      return true;
    }, budget);
  if (!res.j.empty()) return res;
  if (switches_sides(p)) {
    res.half = left_square(p);
    return res;
  }
  throw std::runtime_error("no Štefan sequence and no side switching for pattern " + p.to_string());
}

std::optional<CoveringLoop> non_repeating_loop(const Pattern& p, int m) {
  if (m < 1) throw std::invalid_argument("loop length must be positive");
  if (p.n() < 2) return std::nullopt;
  if (m == 1) {
    for (const auto& v : all_ointervals(p.n()))
      if (covers_forced(p, v, v) && !loop_followed_by_endpoint(p, {v})) return CoveringLoop{{v}, covers_proper(p, v, v), true, "stefan"};
    return std::nullopt;
  }
  if (auto s = from_stefan(p, m)) return s;
  if (auto d = from_doubling(p, m)) return d;
  return proper_loop_search(p, m);
}

CoveringLoop properize_loop(const Pattern& p, const CoveringLoop& loop) {
  const std::size_t m = loop.k.size();
  if (!loop_steps_hold(p, loop.k, false)) throw std::invalid_argument("loop steps are not forced coverings");
  std::vector<std::vector<OInterval>> cand(m);
  for (std::size_t t = 0; t < m; ++t) {
    const auto& a = loop.k[t];
    const auto& b = loop.k[(t + 1) % m];
    if (covers_proper(p, a, b)) {
      cand[t] = {a};
      continue;
    }
    for (const auto& v : all_ointervals(p.n()))
      if (a.contains(v) && covers_proper(p, v, b)) cand[t].push_back(v);
    std::stable_sort(cand[t].begin(), cand[t].end(), [](const OInterval& x, const OInterval& y) { return x.j - x.i < y.j - y.i; });
  }
  CoveringLoop out{{}, true, false, loop.origin};
  std::vector<OInterval> k(m);
  std::size_t budget = 10'000;
  std::function<bool(std::size_t)> pick = [&](std::size_t t) -> bool {
    if (t == m) {
      if (out.k.empty()) out.k = k;
      return loop_non_repeating(p, k);
    }
    for (const auto& c : cand[t]) {
      if (budget == 0) return false;
      --budget;
      k[t] = c;
      if (pick(t + 1)) return true;
    }
    return false;
  };
  if (pick(0)) out.k = k;
  out.proper = loop_steps_hold(p, out.k, true);
  out.non_repeating = loop_non_repeating(p, out.k);
  return out;
}

std::optional<CoveringLoop> proper_loop_search(const Pattern& p, int m, std::size_t budget) {
  if (m < 1 || p.n() < 2) return std::nullopt;
  const CoveringDigraph g = covering_digraph(p);
  const std::size_t v = g.nodes.size();
  std::vector<std::size_t> path;
  std::vector<char> used(v, 0);
  std::optional<CoveringLoop> found;

  // distributes r repeats over self-covering path vertices
  auto try_paddings = [&]() -> bool {
    const int c = static_cast<int>(path.size());
    const int r = m - c;
    std::vector<std::size_t> slots;
    for (std::size_t t = 1; t < path.size(); ++t)
      if (g.proper[path[t]][path[t]]) slots.push_back(t);
    if (r > 0 && slots.empty()) return false;
    std::vector<int> extra(path.size(), 0);
    auto build = [&]() -> bool {
      std::vector<OInterval> k;
      for (std::size_t t = 0; t < path.size(); ++t)
        for (int e = 0; e <= extra[t]; ++e) k.push_back(g.nodes[path[t]]);
      if (!loop_non_repeating(p, k)) return false;
      found = CoveringLoop{std::move(k), true, true, "digraph"};
      return true;
    };
    if (slots.empty()) return build();
    std::function<bool(std::size_t, int)> fill = [&](std::size_t s, int left) -> bool {
      if (budget == 0) return false;
      --budget;
      if (s + 1 == slots.size()) {
        extra[slots[s]] = left;
        const bool ok = build();
        extra[slots[s]] = 0;
        return ok;
      }
      for (int e = left; e >= 0; --e) {
        extra[slots[s]] = e;
        if (fill(s + 1, left - e)) return true;
      }
      extra[slots[s]] = 0;
      return false;
    };
    return fill(0, r);
  };

  // cycles of length c through K_0, shortest first
  int c = 1;
  std::function<bool()> dfs = [&]() -> bool {
    const std::size_t last = path.back();
    const std::size_t k0 = path.front();
    if (static_cast<int>(path.size()) == c) return g.proper[last][k0] && (c > 1 || m == 1) && try_paddings();
    for (std::size_t w = 0; w < v; ++w) {
      if (budget == 0) return false;
      if (used[w] || !g.proper[last][w] || g.nodes[k0].interior_meets(g.nodes[w])) continue;
      --budget;
      used[w] = 1;
      path.push_back(w);
      if (dfs()) return true;
      path.pop_back();
      used[w] = 0;
    }
    return false;
  };

  for (c = 1; c <= std::min<int>(m, static_cast<int>(v)) && !found; ++c)
    for (std::size_t k0 = 0; k0 < v && !found; ++k0) {
      path.assign(1, k0);
      std::fill(used.begin(), used.end(), 0);
      used[k0] = 1;
      dfs();
    }
  return found;
}

bool witness_valid(const Pattern& p, const PeriodWitness& w) {
  if (w.orbit) return w.m == p.n();
  if (!w.loop || w.loop->m() != w.m) return false;
  return loop_steps_hold(p, w.loop->k, true) && loop_non_repeating(p, w.loop->k);
}

ForcedPeriods forced_periods(const Pattern& p, int upto) {
  if (upto < 1) throw std::invalid_argument("upto must be positive");
  ForcedPeriods out;
  for (int m = 1; m <= upto; ++m) {
    PeriodWitness w;
    w.m = m;
    if (auto loop = non_repeating_loop(p, m)) {
      CoveringLoop proper = properize_loop(p, *loop);
      if (!(proper.proper && proper.non_repeating)) {
        auto direct = proper_loop_search(p, m);
        if (direct) proper = *direct;
      }
      if (proper.proper && proper.non_repeating) w.loop = std::move(proper);
    }
    if (!w.loop && m == p.n()) w.orbit = true;
    if (w.loop || w.orbit) {
      out.periods.insert(m);
      out.witnesses.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace cgrid
