#include "avoid/scan.hpp"

#include <algorithm>
#include <functional>

namespace avoid {

namespace {

using Span = std::span<const Symbol>;

// Maximal extent [lo, hi] of positions j around anchor i with
// w[j] == w[j + p], clipped to [i - reach, i + reach].
struct Extent {
  std::size_t lo;
  std::size_t hi;
};

Extent match_extent(Span w, std::size_t i, std::size_t p, std::size_t reach) {
  const std::size_t n = w.size();
  std::size_t lo = i;
  std::size_t lo_limit = i >= reach ? i - reach : 0;
  while (lo > lo_limit && w[lo - 1] == w[lo - 1 + p])
    --lo;
  std::size_t hi = i;
  std::size_t hi_limit = std::min(i + reach, n - p - 1);
  while (hi < hi_limit && w[hi + 1] == w[hi + 1 + p])
    ++hi;
  return {lo, hi};
}

// Calls emit(s) for every s such that w[j] == w[j+p] for all j in
// [s, s + span_len), with each s reported exactly once. span_len >= 1.
template <typename Emit>
bool for_each_run_window(Span w, std::size_t p, std::size_t span_len, Emit&& emit) {
  const std::size_t n = w.size();
  if (p == 0 || span_len == 0 || n < p + span_len)
    return false;
  const std::size_t last_start = n - p - span_len; // s <= last_start
  const std::size_t stride = span_len;
  for (std::size_t i = 0; i + p < n; i += stride) {
    if (w[i] != w[i + p])
      continue;
    Extent e = match_extent(w, i, p, span_len - 1);
    // windows [s, s+span_len) inside [lo, hi] that contain i
    std::size_t s_lo = std::max(e.lo, i >= span_len - 1 ? i - (span_len - 1) : 0);
    if (e.hi + 1 < span_len)
      continue;
    std::size_t s_hi = std::min({i, e.hi + 1 - span_len, last_start});
    for (std::size_t s = s_lo; s <= s_hi && s_lo <= s_hi; ++s)
      if (emit(s))
        return true;
  }
  return false;
}

} // namespace

std::vector<SquareOccurrence> find_squares(const Word& w, std::size_t min_root) {
  if (min_root == 0)
    throw UsageError("find_squares: min_root must be positive");
  std::vector<SquareOccurrence> out;
  Span s = w.symbols();
  for (std::size_t p = min_root; 2 * p <= s.size(); ++p)
    for_each_run_window(s, p, p, [&](std::size_t pos) {
      out.push_back({pos, p});
      return false;
    });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SquareOccurrence> find_squares_with_root(const Word& w, std::size_t root) {
  std::vector<SquareOccurrence> out;
  for_each_run_window(w.symbols(), root, root, [&](std::size_t pos) {
    out.push_back({pos, root});
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<SquareOccurrence> first_square_in_range(const Word& w, std::size_t min_root,
                                                      std::size_t max_root) {
  Span s = w.symbols();
  min_root = std::max<std::size_t>(min_root, 1);
  max_root = std::min(max_root, s.size() / 2);
  for (std::size_t p = min_root; p <= max_root; ++p) {
    std::optional<std::size_t> best;
    for_each_run_window(s, p, p, [&](std::size_t pos) {
      if (!best || pos < *best)
        best = pos;
      return false;
    });
    if (best)
      return SquareOccurrence{*best, p};
  }
  return std::nullopt;
}

std::size_t max_square_root(const Word& w) {
  Span s = w.symbols();
  for (std::size_t p = s.size() / 2; p >= 1; --p) {
    if (for_each_run_window(s, p, p, [](std::size_t) { return true; }))
      return p;
  }
  return 0;
}

std::vector<CubeOccurrence> find_cubes(const Word& w) {
  std::vector<CubeOccurrence> out;
  Span s = w.symbols();
  for (std::size_t p = 1; 3 * p <= s.size(); ++p)
    for_each_run_window(s, p, 2 * p, [&](std::size_t pos) {
      out.push_back({pos, p});
      return false;
    });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<CubeOccurrence> first_cube_in_range(const Word& w, std::size_t min_root,
                                                  std::size_t max_root) {
  Span s = w.symbols();
  min_root = std::max<std::size_t>(min_root, 1);
  max_root = std::min(max_root, s.size() / 3);
  for (std::size_t p = min_root; p <= max_root; ++p) {
    std::optional<std::size_t> best;
    for_each_run_window(s, p, 2 * p, [&](std::size_t pos) {
      if (!best || pos < *best)
        best = pos;
      return false;
    });
    if (best)
      return CubeOccurrence{*best, p};
  }
  return std::nullopt;
}

std::optional<std::size_t> find_factor(const Word& w, const Word& f, std::size_t from) {
  if (from > w.size())
    return std::nullopt;
  if (f.empty())
    return from;
  auto it = std::search(w.begin() + static_cast<std::ptrdiff_t>(from), w.end(),
                        std::boyer_moore_horspool_searcher(f.begin(), f.end()));
  if (it == w.end())
    return std::nullopt;
  return static_cast<std::size_t>(it - w.begin());
}

bool contains_factor(const Word& w, const Word& f) {
  return find_factor(w, f).has_value();
}

std::optional<FactorOccurrence> scan_forbidden(const Word& w, std::span<const Word> fs) {
  std::optional<FactorOccurrence> best;
  for (const Word& f : fs) {
    auto pos = find_factor(w, f);
    if (!pos)
      continue;
    if (!best || *pos < best->position ||
        (*pos == best->position && f.size() < best->factor.size()))
      best = FactorOccurrence{f, *pos};
  }
  return best;
}

std::string to_string(const GapPattern& p) {
  std::string s;
  s += static_cast<char>('0' + p.first);
  s += "α";
  s += static_cast<char>('0' + p.middle);
  s += "α";
  s += static_cast<char>('0' + p.last);
  return s;
}

std::optional<GapOccurrence> contains_gap_pattern(const Word& w, const GapPattern& p) {
  Span s = w.symbols();
  const std::size_t n = s.size();
  std::optional<GapOccurrence> best;
  auto offer = [&](std::size_t start, std::size_t alpha) {
    if (!best || start < best->first_pos ||
        (start == best->first_pos && alpha < best->alpha_length))
      best = GapOccurrence{start, start + alpha + 1, start + 2 * alpha + 2, alpha};
  };
  // α = ε: the factor b c a
  for (std::size_t i = 0; i + 2 < n; ++i)
    if (s[i] == p.first && s[i + 1] == p.middle && s[i + 2] == p.last) {
      offer(i, 0);
      break;
    }
  // |α| = q - 1 >= 1: the two copies of α start at j and j + q, and
  // s[i] == s[i + q] for all i in [j, j + q - 1).
  for (std::size_t q = 2; 2 * q + 1 <= n; ++q) {
    for_each_run_window(s, q, q - 1, [&](std::size_t j) {
      if (j == 0 || j + 2 * q - 1 >= n)
        return false;
      if (best && j - 1 > best->first_pos)
        return false;
      if (s[j - 1] == p.first && s[j + q - 1] == p.middle && s[j + 2 * q - 1] == p.last)
        offer(j - 1, q - 1);
      return false;
    });
  }
  return best;
}

Word perfect_shuffle(const Word& w, const Word& x) {
  if (w.size() != x.size())
    throw UsageError("perfect_shuffle: words of different lengths (" + std::to_string(w.size()) +
                     " and " + std::to_string(x.size()) + ")");
  if (w.alphabet_size() != x.alphabet_size())
    throw UsageError("perfect_shuffle: alphabet mismatch");
  std::vector<Symbol> out(2 * w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[2 * i] = w[i];
    out[2 * i + 1] = x[i];
  }
  return Word(std::move(out), w.alphabet_size());
}

SuffixRepetitions suffix_repetitions(std::span<const Symbol> w, bool want_cubes) {
  // z[p] over the reversed word = length of the longest common suffix of
  // w and w[0 .. n-p).
  const std::size_t n = w.size();
  SuffixRepetitions out;
  if (n < 2)
    return out;
  auto rev = [&](std::size_t i) { return w[n - 1 - i]; };
  std::vector<std::size_t> z(n, 0);
  std::size_t l = 0, r = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (i < r)
      z[i] = std::min(r - i, z[i - l]);
    while (i + z[i] < n && rev(z[i]) == rev(i + z[i]))
      ++z[i];
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
  }
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    if (z[p] >= p)
      out.square_roots.push_back(p);
    if (want_cubes && 3 * p <= n && z[p] >= 2 * p)
      out.cube_roots.push_back(p);
  }
  return out;
}

} // namespace avoid
