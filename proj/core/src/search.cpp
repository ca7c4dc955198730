// Branch-and-bound search for points of 𝔛_β over o_F0 / p^k.
//
// Points are F-lines ⟨v⟩: the first coordinate of minimal ν_F is scaled to 1,
// earlier coordinates lie in p_F. Each node is a box {r + Δ : ν(Δ_a) ≥ lvl_a}
// of the four remaining F0-coordinates.

#include <atomic>
#include <climits>
#include <cmath>
#include <thread>

#include "u21/xbeta.hpp"

namespace u21 {

namespace {

constexpr int kMaxForms = 5;

struct IntForm {
  int64_t S[kVars][kVars];
  int vS[kVars][kVars];
};

struct Ctx {
  int64_t p = 0, M = 0;
  int K = 0, target = 0;
  int nf = 0;  // forms 0, 1 are Q1, Q2; the rest are pencil members
  bool single = false;
  bool usable[kVars] = {};  // not forced to vanish
  IntForm F[kMaxForms];
  std::vector<int64_t> pw;

  int64_t mul(int64_t a, int64_t b) const { return int64_t((__int128)a * b % M); }
  int64_t add(int64_t a, int64_t b) const {
    int64_t s = a + b;
    return s >= M ? s - M : s;
  }
  int vp(int64_t x) const {
    if (x == 0) return K;
    int v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  }
};

struct Node {
  int64_t r[kVars];
  int8_t lvl[kVars];  // K marks a fixed coordinate
  int64_t q[kMaxForms];
  int64_t g[kMaxForms][kVars];
};

void recompute(const Ctx& c, Node& n) {
  for (int f = 0; f < c.nf; ++f) {
    int64_t q = 0;
    for (int u = 0; u < kVars; ++u) {
      int64_t gu = 0;
      for (int w = 0; w < kVars; ++w) gu = c.add(gu, c.mul(c.F[f].S[u][w], n.r[w]));
      q = c.add(q, c.mul(gu, n.r[u]));
      n.g[f][u] = c.add(gu, gu);
    }
    n.q[f] = q;
  }
}

// Child with r_a += d.
void shift(const Ctx& c, const Node& n, int a, int64_t d, Node& out) {
  out = n;
  out.r[a] = c.add(n.r[a], d);
  for (int f = 0; f < c.nf; ++f) {
    const int64_t saa = c.F[f].S[a][a];
    out.q[f] = c.add(c.add(n.q[f], c.mul(n.g[f][a], d)), c.mul(c.mul(saa, d), d));
    for (int w = 0; w < kVars; ++w) {
      const int64_t t = c.mul(c.F[f].S[w][a], d);
      out.g[f][w] = c.add(n.g[f][w], c.add(t, t));
    }
  }
}

enum class Verdict { prune, leaf, split };

struct Decision {
  Verdict v = Verdict::split;
  int var = -1;
};

Decision decide(const Ctx& c, const Node& n) {
  int bestL = INT_MAX, bestVar = -1;
  for (int f = 0; f < c.nf; ++f) {
    if (f == 1 && c.single) continue;
    const int vq = c.vp(n.q[f]);
    int L = c.K, arg = -1;
    for (int u = 0; u < kVars; ++u) {
      if (n.lvl[u] >= c.K) continue;
      const int t = c.vp(n.g[f][u]) + n.lvl[u];
      if (t < L) L = t, arg = u;
    }
    for (int u = 0; u < kVars; ++u) {
      if (n.lvl[u] >= c.K) continue;
      for (int w = u; w < kVars; ++w) {
        if (n.lvl[w] >= c.K) continue;
        const int t = c.F[f].vS[u][w] + n.lvl[u] + n.lvl[w];
        if (t < L) L = t, arg = n.lvl[u] <= n.lvl[w] ? u : w;
      }
    }
    if (vq < std::min(L, c.target)) return {Verdict::prune, -1};
    if (L < c.target && L < bestL) bestL = L, bestVar = arg;
  }
  if (bestVar < 0) return {Verdict::leaf, -1};
  return {Verdict::split, bestVar};
}

// m > 2t with t the least valuation of a 2×2 minor of the Jacobian.
bool certifiable(const Ctx& c, const Node& n, int& m_out) {
  int m = c.vp(n.q[0]);
  if (!c.single) m = std::min(m, c.vp(n.q[1]));
  m_out = m;
  if (m == 0) return false;
  int t = c.K;
  if (c.single) {
    for (int u = 0; u < kVars; ++u)
      if (c.usable[u]) t = std::min(t, c.vp(n.g[0][u]));
  } else {
    for (int u = 0; u < kVars && 2 * t >= m; ++u)
      for (int w = u + 1; w < kVars; ++w) {
        if (!c.usable[u] || !c.usable[w]) continue;
        const int64_t d =
            c.add(c.mul(n.g[0][u], n.g[1][w]), c.M - c.mul(n.g[0][w], n.g[1][u]));
        t = std::min(t, c.vp(d));
      }
  }
  return m > 2 * t;
}

std::vector<Node> chart_roots(const Ctx& c, bool ramified) {
  std::vector<Node> out;
  for (int i = 0; i < 3; ++i) {
    if (!c.usable[2 * i]) continue;
    Node n{};
    for (int j = 0; j < 3; ++j) {
      const int x = 2 * j, y = x + 1;
      if (!c.usable[x]) {
        n.lvl[x] = n.lvl[y] = int8_t(c.K);
      } else if (j == i) {
        n.r[x] = 1;
        n.lvl[x] = n.lvl[y] = int8_t(c.K);
      } else if (j < i) {
        n.lvl[x] = 1;                      // x_j ∈ p
        n.lvl[y] = ramified ? 0 : 1;       // δ ∈ p_F when ramified
      }
    }
    recompute(c, n);
    out.push_back(n);
  }
  return out;
}

struct BatchResult {
  bool certified = false, leaf = false, complete = false;
  Node cert{}, first_leaf{};
  int cert_m = 0, leaf_m = 0;
  int64_t nodes = 0;
};

void run_batch(const Ctx& c, const Node& root, int64_t budget, int index,
               std::atomic<int>& best_cert, BatchResult& out) {
  std::vector<Node> stack{root};
  Node child;
  while (!stack.empty()) {
    if ((out.nodes & 1023) == 0 && index > best_cert.load(std::memory_order_relaxed)) return;
    if (out.nodes >= budget) return;
    Node n = stack.back();
    stack.pop_back();
    ++out.nodes;
    int m = 0;
    if (certifiable(c, n, m)) {
      out.certified = true;
      out.cert = n;
      out.cert_m = m;
      int cur = best_cert.load();
      while (index < cur && !best_cert.compare_exchange_weak(cur, index)) {
      }
      return;
    }
    const Decision d = decide(c, n);
    if (d.v == Verdict::prune) continue;
    if (d.v == Verdict::leaf) {
      if (!out.leaf) {
        out.leaf = true;
        out.first_leaf = n;
        out.leaf_m = std::min(m, c.target);
      }
      continue;
    }
    const int a = d.var;
    const int64_t step = c.pw[size_t(n.lvl[a])];
    for (int64_t digit = c.p - 1; digit >= 0; --digit) {
      shift(c, n, a, c.mul(step, digit), child);
      child.lvl[a] = int8_t(n.lvl[a] + 1);
      stack.push_back(child);
    }
  }
  out.complete = true;
}

int64_t to_int(const BaseElement& x, int K, int64_t M) {
  const i128 v = x.to_integer_mod(K);
  int64_t r = int64_t(v % M);
  return r < 0 ? r + M : r;
}

Witness make_witness(const Ctx& c, const Field& f, const Node& n, int m) {
  Witness w;
  for (int u = 0; u < kVars; ++u) {
    int64_t r = n.r[u];
    if (r > c.M / 2) r -= c.M;  // balanced representative
    w.point[size_t(u)] = f.from_i128(r);
  }
  w.residual_level = m;
  return w;
}

}  // namespace

SearchResult brute_search(const QuadricPairSystem& sys, const SearchOptions& opt) {
  const Field& f = *sys.field;
  if (opt.depth < 4) throw InvalidConfig("search depth must be at least 4");
  Ctx c;
  c.p = f.p();
  c.K = std::min<int>(f.N(), int(std::floor(62.0 / std::log2(double(c.p)))));
  if (opt.depth > c.K)
    throw InvalidConfig("search depth " + std::to_string(opt.depth) + " exceeds " +
                        std::to_string(c.K) + " digits for p = " + std::to_string(c.p));
  const SystemShape shape = system_shape(sys);
  c.single = shape.single;
  for (int u = 0; u < kVars; ++u) c.usable[u] = !shape.forced_zero[size_t(u / 2)];

  std::vector<const QuadraticForm6*> forms{&sys.q1, &sys.q2};
  for (const auto& q : sys.pencil)
    if (forms.size() < size_t(kMaxForms)) forms.push_back(&q);
  c.nf = int(forms.size());
  // Coefficients are known modulo p^abs; the search works modulo the least of these.
  for (const QuadraticForm6* q : forms)
    if (!q->zero)
      for (const auto& row : q->S)
        for (const BaseElement& x : row)
          if (!x.is_exact_zero()) c.K = int(std::min<int64_t>(c.K, x.abs_precision()));
  if (opt.depth > c.K)
    throw PrecisionExhausted("search depth " + std::to_string(opt.depth) +
                             " exceeds the " + std::to_string(c.K) +
                             " coefficient digits of the system");
  c.target = opt.depth;
  c.pw.push_back(1);
  for (int k = 1; k <= c.K; ++k) c.pw.push_back(c.pw.back() * c.p);
  c.M = c.pw[size_t(c.K)];
  for (int k = 0; k < c.nf; ++k)
    for (int u = 0; u < kVars; ++u)
      for (int w = 0; w < kVars; ++w) {
        const BaseElement& x = forms[size_t(k)]->S[size_t(u)][size_t(w)];
        c.F[k].S[u][w] = forms[size_t(k)]->zero || x.is_zero() ? 0 : to_int(x, c.K, c.M);
        c.F[k].vS[u][w] = c.vp(c.F[k].S[u][w]);
      }

  // Deterministic frontier: split breadth-first until there are enough batches.
  std::vector<Node> frontier = chart_roots(c, f.ramified());
  for (int level = 0; level < 3 && frontier.size() < 64; ++level) {
    std::vector<Node> next;
    bool split_any = false;
    for (const Node& n : frontier) {
      int m = 0;
      if (certifiable(c, n, m)) {
        next.push_back(n);
        continue;
      }
      const Decision d = decide(c, n);
      if (d.v == Verdict::prune) continue;
      if (d.v == Verdict::leaf) {
        next.push_back(n);
        continue;
      }
      split_any = true;
      const int64_t step = c.pw[size_t(n.lvl[d.var])];
      for (int64_t digit = 0; digit < c.p; ++digit) {
        Node ch;
        shift(c, n, d.var, c.mul(step, digit), ch);
        ch.lvl[d.var] = int8_t(n.lvl[d.var] + 1);
        next.push_back(ch);
      }
    }
    frontier.swap(next);
    if (!split_any) break;
  }

  const int nb = int(frontier.size());
  std::vector<BatchResult> res(static_cast<size_t>(nb));
  std::atomic<int> next{0}, best_cert{INT_MAX};
  auto worker = [&] {
    for (int b = next.fetch_add(1); b < nb; b = next.fetch_add(1)) {
      if (b > best_cert.load()) continue;
      run_batch(c, frontier[size_t(b)], opt.node_budget, b, best_cert, res[size_t(b)]);
    }
  };
  const int threads = std::max(1, std::min(opt.threads, nb));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SearchResult out;
  out.exhausted = true;
  for (int b = 0; b < nb; ++b) {
    const BatchResult& r = res[size_t(b)];
    out.nodes += r.nodes;
    if (r.certified) {
      Witness w = make_witness(c, f, r.cert, r.cert_m);
      const HenselOutcome h = hensel_check(sys, w);
      w.certificate = h.certificate;
      out.witness = w;
      if (w.certificate) return out;
    }
    if (!r.complete) out.exhausted = false;
  }
  // No certified point: the first leaf in candidate order.
  for (int b = 0; b < nb; ++b)
    if (res[size_t(b)].leaf) {
      out.witness = make_witness(c, f, res[size_t(b)].first_leaf, res[size_t(b)].leaf_m);
      break;
    }
  return out;
}

}  // namespace u21
