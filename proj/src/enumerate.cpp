#include "avoid/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <thread>

namespace avoid {

namespace {

// Iterative DFS over legal extensions of `word` up to max_len. visit(word)
// runs for every legal extension (not for the start word); returning false
// from it stops the search.
template <class Visit>
void extend_legal(std::vector<Symbol> word, const AvoidanceSpec& spec, std::size_t max_len,
                  Visit&& visit) {
  const std::size_t base = word.size();
  const unsigned k = spec.alphabet_size;
  std::vector<unsigned> next{0};
  while (!next.empty()) {
    if (next.back() >= k || word.size() >= max_len) {
      next.pop_back();
      if (word.size() > base)
        word.pop_back();
      continue;
    }
    word.push_back(static_cast<Symbol>(next.back()++));
    if (suffix_legal(word, spec)) {
      if (!visit(word))
        return;
      next.push_back(0);
    } else {
      word.pop_back();
    }
  }
}

} // namespace

std::string CountTable::csv() const {
  std::ostringstream out;
  out << "n,count\n";
  for (std::size_t n = 0; n < counts.size(); ++n)
    out << n << ',' << counts[n] << '\n';
  return out.str();
}

unsigned default_workers() {
  if (const char* env = std::getenv("AVOID_WORKERS")) {
    char* end = nullptr;
    unsigned long w = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && w >= 1 && w <= 256)
      return static_cast<unsigned>(w);
  }
  return 1;
}

CountTable count_avoiding(const AvoidanceSpec& spec, std::size_t n_max, unsigned workers) {
  spec.validate();
  if (workers == 0)
    workers = default_workers();
  std::vector<std::uint64_t> total(n_max + 1, 0);
  total[0] = 1;

  // Subtrees rooted at the legal words of length `split` go to workers.
  const std::size_t split = workers > 1 ? std::min<std::size_t>(n_max, 12) : 0;
  std::vector<std::vector<Symbol>> roots;
  if (split == 0) {
    roots.emplace_back();
  } else {
    extend_legal({}, spec, split, [&](const std::vector<Symbol>& w) {
      ++total[w.size()];
      if (w.size() == split)
        roots.push_back(w);
      return true;
    });
  }

  std::atomic<std::size_t> cursor{0};
  std::vector<std::vector<std::uint64_t>> partial(workers,
                                                  std::vector<std::uint64_t>(n_max + 1, 0));
  auto work = [&](unsigned id) {
    auto& mine = partial[id];
    for (std::size_t i = cursor++; i < roots.size(); i = cursor++)
      extend_legal(roots[i], spec, n_max, [&](const std::vector<Symbol>& w) {
        ++mine[w.size()];
        return true;
      });
  };
  std::vector<std::thread> pool;
  for (unsigned id = 1; id < workers; ++id)
    pool.emplace_back(work, id);
  work(0);
  for (std::thread& t : pool)
    t.join();

  CountTable table{spec, {}};
  table.counts.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    BigInt c = total[n];
    for (const auto& p : partial)
      c += p[n];
    table.counts[n] = c;
  }
  return table;
}

std::string MinimalForbiddenSet::str() const {
  std::string s;
  for (const Word& w : words)
    s += w.str() + '\n';
  return s;
}

MinimalForbiddenSet minimal_forbidden(const AvoidanceSpec& spec, std::size_t max_length) {
  spec.validate();
  if (max_length < 1)
    throw UsageError("maximum length must be at least 1");
  const unsigned k = spec.alphabet_size;
  MinimalForbiddenSet out{spec, max_length, {}};

  // Children wx of a legal word w: wx illegal and w[1:]x legal.
  std::vector<Symbol> buf;
  auto probe = [&](const std::vector<Symbol>& w) {
    if (w.size() + 1 > max_length)
      return;
    for (unsigned x = 0; x < k; ++x) {
      buf.assign(w.begin(), w.end());
      buf.push_back(static_cast<Symbol>(x));
      if (suffix_legal(buf, spec))
        continue;
      if (!w.empty() && !suffix_legal(std::span<const Symbol>(buf).subspan(1), spec))
        continue;
      out.words.emplace_back(buf, k);
    }
  };
  probe({});
  extend_legal({}, spec, max_length - 1, [&](const std::vector<Symbol>& w) {
    probe(w);
    return true;
  });
  std::sort(out.words.begin(), out.words.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return out;
}

// ------------------------------------------------------------- automaton

FactorAutomaton::FactorAutomaton(const std::vector<Word>& forbidden, unsigned alphabet_size)
    : k_(alphabet_size) {
  if (k_ < 1 || k_ > kMaxAlphabet)
    throw UsageError("alphabet size outside [1, 255]");
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  delta_.assign(k_, none);
  dead_.assign(1, 0);
  for (const Word& f : forbidden) {
    if (f.empty())
      throw UsageError("empty forbidden word");
    std::size_t s = 0;
    for (Symbol x : f) {
      if (x >= k_)
        throw UsageError("forbidden word " + f.str() + " leaves the alphabet");
      if (delta_[s * k_ + x] == none) {
        delta_[s * k_ + x] = dead_.size();
        dead_.push_back(0);
        delta_.resize(delta_.size() + k_, none);
      }
      s = delta_[s * k_ + x];
    }
    dead_[s] = 1;
  }

  std::vector<std::size_t> fail(dead_.size(), 0);
  std::deque<std::size_t> queue;
  for (unsigned x = 0; x < k_; ++x) {
    std::size_t& t = delta_[x];
    if (t == none) {
      t = 0;
    } else {
      fail[t] = 0;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (dead_[fail[s]])
      dead_[s] = 1;
    for (unsigned x = 0; x < k_; ++x) {
      std::size_t& t = delta_[s * k_ + x];
      if (t == none) {
        t = delta_[fail[s] * k_ + x];
      } else {
        fail[t] = delta_[fail[s] * k_ + x];
        queue.push_back(t);
      }
    }
  }
  for (std::size_t s = 0; s < dead_.size(); ++s)
    if (dead_[s])
      for (unsigned x = 0; x < k_; ++x)
        delta_[s * k_ + x] = s;
  live_ = static_cast<std::size_t>(std::count(dead_.begin(), dead_.end(), 0));
}

bool FactorAutomaton::accepts(const Word& w) const {
  std::size_t s = start();
  for (Symbol x : w) {
    if (x >= k_)
      throw UsageError("word leaves the automaton alphabet");
    s = next(s, x);
    if (dead(s))
      return false;
  }
  return !dead(s);
}

std::vector<BigInt> FactorAutomaton::path_counts(std::size_t n_max) const {
  std::vector<BigInt> out(n_max + 1);
  std::vector<BigInt> cur(states()), nxt(states());
  if (dead(start()))
    return out;
  cur[start()] = 1;
  out[0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::fill(nxt.begin(), nxt.end(), BigInt(0));
    for (std::size_t s = 0; s < states(); ++s) {
      if (cur[s] == 0 || dead(s))
        continue;
      for (unsigned x = 0; x < k_; ++x) {
        std::size_t t = next(s, static_cast<Symbol>(x));
        if (!dead(t))
          nxt[t] += cur[s];
      }
    }
    std::swap(cur, nxt);
    BigInt sum = 0;
    for (const BigInt& c : cur)
      sum += c;
    out[n] = sum;
  }
  return out;
}

GrowthEstimate growth_rate(const FactorAutomaton& a, double tol, std::size_t max_iterations) {
  if (!(tol > 0))
    throw UsageError("tolerance must be positive");
  GrowthEstimate g;
  g.states = a.states();
  g.live_states = a.live_states();
  if (g.live_states == 0)
    return g;

  std::vector<std::size_t> index(a.states(), 0);
  std::vector<std::size_t> live;
  for (std::size_t s = 0; s < a.states(); ++s)
    if (!a.dead(s)) {
      index[s] = live.size();
      live.push_back(s);
    }
  // succ[i]: live successors of live state i, with multiplicity.
  std::vector<std::vector<std::size_t>> succ(live.size());
  for (std::size_t i = 0; i < live.size(); ++i)
    for (unsigned x = 0; x < a.alphabet_size(); ++x) {
      std::size_t t = a.next(live[i], static_cast<Symbol>(x));
      if (!a.dead(t))
        succ[i].push_back(index[t]);
    }

  // Drop states with no infinite continuation. They form a nilpotent block
  // that does not change the spectral radius but makes power iteration on
  // M + I converge only like 1/k when nothing else is left.
  std::vector<std::size_t> out_degree(live.size());
  std::vector<std::vector<std::size_t>> pred(live.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    out_degree[i] = succ[i].size();
    for (std::size_t j : succ[i])
      pred[j].push_back(i);
  }
  std::vector<char> keep(live.size(), 1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < live.size(); ++i)
    if (out_degree[i] == 0)
      stack.push_back(i);
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    keep[i] = 0;
    for (std::size_t p : pred[i])
      if (--out_degree[p] == 0)
        stack.push_back(p);
  }
  std::vector<std::size_t> core_index(live.size());
  std::size_t n = 0;
  for (std::size_t i = 0; i < live.size(); ++i)
    if (keep[i])
      core_index[i] = n++;
  if (n == 0)
    return g;
  std::vector<std::vector<std::size_t>> core(n);
  for (std::size_t i = 0; i < live.size(); ++i)
    if (keep[i])
      for (std::size_t j : succ[i])
        if (keep[j])
          core[core_index[i]].push_back(core_index[j]);
  succ = std::move(core);

  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  auto step = [&]() {
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = x[i];
      for (std::size_t j : succ[i])
        v += x[j];
      y[i] = v;
      norm += v;
    }
    return norm; // ‖x‖₁ = 1
  };
  double mu = 0;
  for (g.iterations = 1; g.iterations <= max_iterations; ++g.iterations) {
    double norm = step();
    if (norm == 0)
      return g;
    for (std::size_t i = 0; i < n; ++i)
      x[i] = y[i] / norm;
    double delta = std::abs(norm - mu);
    mu = norm;
    if (delta < tol && g.iterations > 1)
      break;
  }
  g.iterations = std::min(g.iterations, max_iterations);
  double norm = step();
  double res = 0;
  for (std::size_t i = 0; i < n; ++i)
    res += std::abs(y[i] - mu * x[i]);
  g.eigenvalue = std::max(0.0, norm - 1.0);
  g.residual = res;
  return g;
}

nlohmann::ordered_json to_json(const GrowthEstimate& g) {
  return {{"eigenvalue", g.eigenvalue},
          {"states", g.states},
          {"live_states", g.live_states},
          {"iterations", g.iterations},
          {"residual", g.residual}};
}

ExhaustResult exhaust_max_length(const AvoidanceSpec& spec, std::size_t hard_cap) {
  spec.validate();
  ExhaustResult r;
  r.witness = Word(spec.alphabet_size);
  r.finite = true;
  extend_legal({}, spec, hard_cap, [&](const std::vector<Symbol>& w) {
    ++r.nodes;
    if (w.size() > r.max_length) {
      r.max_length = w.size();
      r.witness = Word(w, spec.alphabet_size);
    }
    if (w.size() >= hard_cap) {
      r.finite = false;
      return false;
    }
    return true;
  });
  return r;
}

// --------------------------------------------------------------- families

FamilyReport lower_bound_family(const Substitution& sub, const Morphism& outer,
                                const Word& seed_word, const AvoidanceSpec& target,
                                std::size_t divisor, const FamilyOptions& opts) {
  if (divisor == 0)
    throw UsageError("divisor must be positive");
  if (outer.source_alphabet_size() != sub.target_alphabet_size())
    throw UsageError("outer morphism does not read the substitution's target alphabet");
  FamilyReport r;
  r.divisor = divisor;
  ImageLanguage lang(sub, seed_word);
  r.family_size = lang.count();

  auto check = [&](const Word& inner) {
    Word w = apply(outer, inner);
    r.word_length = w.size();
    ++r.checked;
    SpecCheck chk = satisfies_spec(w, target);
    if (chk.ok()) {
      ++r.verified_count;
    } else if (r.failures.size() < 8) {
      const Violation& v = *chk.violation;
      r.failures.push_back(to_string(v.kind) + " " + v.factor.str() + " at " +
                           std::to_string(v.position));
    }
  };
  if (r.family_size <= opts.enumeration_cap) {
    r.enumerated = true;
    auto it = lang.enumerate(opts.enumeration_cap);
    while (auto inner = it.next())
      check(*inner);
  } else {
    for (std::uint64_t i = 0; i < opts.samples; ++i)
      check(sample_image(sub, seed_word, opts.seed + i));
  }
  // family_size >= 2^(n/d)  <=>  family_size^d >= 2^n
  BigInt lhs = boost::multiprecision::pow(r.family_size, static_cast<unsigned>(divisor));
  BigInt rhs = BigInt(1) << r.word_length;
  r.exponent_check = r.checked > 0 && lhs >= rhs;
  return r;
}

nlohmann::ordered_json to_json(const FamilyReport& r) {
  return {{"word_length", r.word_length},
          {"family_size", r.family_size.str()},
          {"enumerated", r.enumerated},
          {"checked", r.checked},
          {"verified_count", r.verified_count},
          {"divisor", r.divisor},
          {"exponent_check", r.exponent_check},
          {"failures", r.failures},
          {"passed", r.passed()}};
}

} // namespace avoid
