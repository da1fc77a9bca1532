// Copyright 2026 The Forge Authors
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

#ifndef FORGE_ALIGN_HPP_
#define FORGE_ALIGN_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "forge/core.hpp"
#include "forge/unicode.hpp"

namespace forge {

enum class EditOp : uint8_t { Match, Substitute, Delete, Insert };

struct AlignOp {
  EditOp op;
  int32_t ref_idx = -1;  // -1 for Insert
  int32_t hyp_idx = -1;  // -1 for Delete

  bool operator==(const AlignOp&) const = default;
};

/// Word-level alignment between a reference and a hypothesis token sequence.
/// Ops visit every ref index and every hyp index exactly once, in order.
struct WordAlignment {
  std::vector<AlignOp> ops;
  int64_t cost = 0;  // 1 per Substitute/Delete/Insert
};

struct AlignOptions {
  /// Windows with both sides at or below this run the full dynamic program
  /// directly; larger windows are first split at anchor n-grams.
  size_t window_threshold = 64;
  /// Anchor length: n-grams of exact tokens unique in both sequences.
  int anchor_ngram_len = 4;
};

namespace detail {

// Above this many DP cells the divide-and-conquer (linear-memory) path kicks
// in; cost is still exact, only the memory profile changes.
inline constexpr size_t kDpCellLimit = size_t{1} << 24;

/// Full DP over suffix costs, then a forward walk that takes, at every tie,
/// the first applicable of Match > Substitute > Delete > Insert in reading
/// order.  Appends ops with absolute indices.
template <class Eq>
int64_t align_dp(std::span<const std::string> ref, std::span<const std::string> hyp,
                 const Eq& eq, int32_t ref_off, int32_t hyp_off,
                 std::vector<AlignOp>& out) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<int32_t> dp((n + 1) * (m + 1));
  const auto at = [&](size_t i, size_t j) -> int32_t& { return dp[i * (m + 1) + j]; };
  for (size_t j = 0; j <= m; ++j) at(n, j) = static_cast<int32_t>(m - j);
  for (size_t i = n; i-- > 0;) {
    at(i, m) = static_cast<int32_t>(n - i);
    for (size_t j = m; j-- > 0;) {
      int32_t diag = at(i + 1, j + 1) + (eq(ref[i], hyp[j]) ? 0 : 1);
      int32_t del = at(i + 1, j) + 1;
      int32_t ins = at(i, j + 1) + 1;
      at(i, j) = std::min(diag, std::min(del, ins));
    }
  }
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && eq(ref[i], hyp[j]) && at(i, j) == at(i + 1, j + 1)) {
      out.push_back({EditOp::Match, static_cast<int32_t>(i) + ref_off,
                     static_cast<int32_t>(j) + hyp_off});
      ++i, ++j;
    } else if (i < n && j < m && at(i, j) == at(i + 1, j + 1) + 1) {
      out.push_back({EditOp::Substitute, static_cast<int32_t>(i) + ref_off,
                     static_cast<int32_t>(j) + hyp_off});
      ++i, ++j;
    } else if (i < n && at(i, j) == at(i + 1, j) + 1) {
      out.push_back({EditOp::Delete, static_cast<int32_t>(i) + ref_off, -1});
      ++i;
    } else {
      out.push_back({EditOp::Insert, -1, static_cast<int32_t>(j) + hyp_off});
      ++j;
    }
  }
  return at(0, 0);
}

template <class Eq>
std::vector<int32_t> forward_cost_row(std::span<const std::string> ref,
                                      std::span<const std::string> hyp, const Eq& eq) {
  std::vector<int32_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
  for (size_t j = 0; j <= hyp.size(); ++j) prev[j] = static_cast<int32_t>(j);
  for (size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = static_cast<int32_t>(i);
    for (size_t j = 1; j <= hyp.size(); ++j) {
      int32_t diag = prev[j - 1] + (eq(ref[i - 1], hyp[j - 1]) ? 0 : 1);
      cur[j] = std::min(diag, std::min(prev[j] + 1, cur[j - 1] + 1));
    }
    std::swap(prev, cur);
  }
  return prev;
}

template <class Eq>
std::vector<int32_t> backward_cost_row(std::span<const std::string> ref,
                                       std::span<const std::string> hyp, const Eq& eq) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<int32_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int32_t>(m - j);
  for (size_t i = n; i-- > 0;) {
    cur[m] = static_cast<int32_t>(n - i);
    for (size_t j = m; j-- > 0;) {
      int32_t diag = prev[j + 1] + (eq(ref[i], hyp[j]) ? 0 : 1);
      cur[j] = std::min(diag, std::min(prev[j] + 1, cur[j + 1] + 1));
    }
    std::swap(prev, cur);
  }
  return prev;
}

/// Exact alignment with bounded memory: plain DP when the table fits,
/// otherwise Hirschberg-style splitting on the optimal column.
template <class Eq>
int64_t align_exact(std::span<const std::string> ref, std::span<const std::string> hyp,
                    const Eq& eq, int32_t ref_off, int32_t hyp_off,
                    std::vector<AlignOp>& out) {
  const size_t n = ref.size(), m = hyp.size();
  if (n == 0 || m == 0 || (n + 1) * (m + 1) <= kDpCellLimit) {
    return align_dp(ref, hyp, eq, ref_off, hyp_off, out);
  }
  const size_t mid = n / 2;
  std::vector<int32_t> left = forward_cost_row(ref.subspan(0, mid), hyp, eq);
  std::vector<int32_t> right = backward_cost_row(ref.subspan(mid), hyp, eq);
  size_t split = 0;
  int64_t best = INT64_MAX;
  for (size_t j = 0; j <= m; ++j) {
    int64_t c = int64_t{left[j]} + right[j];
    if (c < best) {
      best = c;
      split = j;
    }
  }
  int64_t cost = align_exact(ref.subspan(0, mid), hyp.subspan(0, split), eq, ref_off,
                             hyp_off, out);
  cost += align_exact(ref.subspan(mid), hyp.subspan(split), eq,
                      ref_off + static_cast<int32_t>(mid),
                      hyp_off + static_cast<int32_t>(split), out);
  return cost;
}

struct Anchor {
  int32_t ref_pos;
  int32_t hyp_pos;
};

/// Unique shared n-grams of exact tokens, thinned to a longest chain that is
/// strictly increasing and non-overlapping on both sides.
inline std::vector<Anchor> find_anchor_chain(std::span<const std::string> ref,
                                             std::span<const std::string> hyp, int n) {
  if (ref.size() < static_cast<size_t>(n) || hyp.size() < static_cast<size_t>(n)) return {};
  const auto ngram_positions = [n](std::span<const std::string> seq) {
    std::unordered_map<std::string, std::pair<int32_t, int32_t>> pos;  // key -> (count, first)
    std::string key;
    for (size_t i = 0; i + n <= seq.size(); ++i) {
      key.clear();
      for (int k = 0; k < n; ++k) {
        key += seq[i + k];
        key.push_back('\x1f');
      }
      auto [it, inserted] = pos.try_emplace(key, 1, static_cast<int32_t>(i));
      if (!inserted) ++it->second.first;
    }
    return pos;
  };
  auto ref_pos = ngram_positions(ref);
  auto hyp_pos = ngram_positions(hyp);
  std::vector<Anchor> candidates;
  for (const auto& [key, rc] : ref_pos) {
    if (rc.first != 1) continue;
    auto it = hyp_pos.find(key);
    if (it == hyp_pos.end() || it->second.first != 1) continue;
    candidates.push_back({rc.second, it->second.second});
  }
  if (candidates.empty()) return {};
  std::sort(candidates.begin(), candidates.end(),
            [](const Anchor& a, const Anchor& b) { return a.ref_pos < b.ref_pos; });
  // Longest strictly-increasing chain on hyp positions (patience LIS).
  std::vector<int32_t> tails;       // hyp_pos of chain tails
  std::vector<size_t> tail_idx;     // candidate index of each tail
  std::vector<int32_t> parent(candidates.size(), -1);
  for (size_t c = 0; c < candidates.size(); ++c) {
    auto it = std::lower_bound(tails.begin(), tails.end(), candidates[c].hyp_pos);
    size_t k = static_cast<size_t>(it - tails.begin());
    if (k > 0) parent[c] = static_cast<int32_t>(tail_idx[k - 1]);
    if (it == tails.end()) {
      tails.push_back(candidates[c].hyp_pos);
      tail_idx.push_back(c);
    } else {
      *it = candidates[c].hyp_pos;
      tail_idx[k] = c;
    }
  }
  std::vector<Anchor> chain;
  for (int32_t c = static_cast<int32_t>(tail_idx.back()); c >= 0; c = parent[c]) {
    chain.push_back(candidates[c]);
  }
  std::reverse(chain.begin(), chain.end());
  // Drop anchors overlapping their predecessor; shingled n-grams collapse to
  // the earliest one.
  std::vector<Anchor> thinned;
  for (const Anchor& a : chain) {
    if (thinned.empty() || (a.ref_pos >= thinned.back().ref_pos + n &&
                            a.hyp_pos >= thinned.back().hyp_pos + n)) {
      thinned.push_back(a);
    }
  }
  return thinned;
}

template <class Eq>
int64_t align_recursive(std::span<const std::string> ref, std::span<const std::string> hyp,
                        const Eq& eq, const AlignOptions& opts, int32_t ref_off,
                        int32_t hyp_off, std::vector<AlignOp>& out) {
  if (ref.size() <= opts.window_threshold && hyp.size() <= opts.window_threshold) {
    return align_exact(ref, hyp, eq, ref_off, hyp_off, out);
  }
  std::vector<Anchor> anchors = find_anchor_chain(ref, hyp, opts.anchor_ngram_len);
  if (anchors.empty()) {
    return align_exact(ref, hyp, eq, ref_off, hyp_off, out);
  }
  int64_t cost = 0;
  int32_t r = 0, h = 0;
  const int n = opts.anchor_ngram_len;
  for (const Anchor& a : anchors) {
    cost += align_recursive(ref.subspan(r, a.ref_pos - r), hyp.subspan(h, a.hyp_pos - h),
                            eq, opts, ref_off + r, hyp_off + h, out);
    for (int k = 0; k < n; ++k) {
      out.push_back({EditOp::Match, ref_off + a.ref_pos + k, hyp_off + a.hyp_pos + k});
    }
    r = a.ref_pos + n;
    h = a.hyp_pos + n;
  }
  cost += align_recursive(ref.subspan(r), hyp.subspan(h), eq, opts, ref_off + r,
                          hyp_off + h, out);
  return cost;
}

}  // namespace detail

struct ExactTokenEq {
  bool operator()(std::string_view a, std::string_view b) const { return a == b; }
};

/// Minimum-edit-cost word alignment under `eq` (cost 0 for Match, 1 for
/// Substitute/Delete/Insert).  Inputs larger than the window threshold are
/// split at n-grams unique to both sequences, with the full dynamic program
/// run inside the windows; `eq` must be reflexive.
template <class Eq>
WordAlignment align_words(std::span<const std::string> ref_tokens,
                          std::span<const std::string> hyp_tokens, const Eq& eq,
                          const AlignOptions& opts = {}) {
  WordAlignment result;
  result.ops.reserve(ref_tokens.size() + 16);
  result.cost =
      detail::align_recursive(ref_tokens, hyp_tokens, eq, opts, 0, 0, result.ops);
  return result;
}

inline WordAlignment align_words(std::span<const std::string> ref_tokens,
                                 std::span<const std::string> hyp_tokens,
                                 const AlignOptions& opts = {}) {
  return align_words(ref_tokens, hyp_tokens, ExactTokenEq{}, opts);
}

// ---------------------------------------------------------------------------
// Chunk extraction
// ---------------------------------------------------------------------------

/// A stretch of reference text whose boundaries were matched against the
/// timestamped hypothesis; the text comes from the reference side, only the
/// timing comes from the hypothesis.
struct AlignedChunk {
  int32_t ref_begin = 0;  // [ref_begin, ref_end) into the reference tokens
  int32_t ref_end = 0;
  int64_t start_ms = 0;
  int64_t end_ms = 0;
  std::string text;
  double anchor_quality = 1.0;  // fraction of Match ops inside the span
};

struct ChunkOptions {
  int64_t target_duration_ms = kMaxSegmentMs;
  double min_anchor_quality = 0.8;
};

/// Cuts the alignment into chunks that start and end on Match ops, keep
/// duration at or under the target, and hold anchor quality at or above the
/// minimum.  No Match ops means an unalignable document: empty result.
inline std::vector<AlignedChunk> extract_chunks(const WordAlignment& alignment,
                                                const std::vector<TimedWord>& hyp_words,
                                                const std::vector<std::string>& ref_tokens,
                                                const ChunkOptions& opts = {}) {
  const auto& ops = alignment.ops;
  for (const AlignOp& op : ops) {
    if ((op.hyp_idx >= 0 && op.hyp_idx >= static_cast<int32_t>(hyp_words.size())) ||
        (op.ref_idx >= 0 && op.ref_idx >= static_cast<int32_t>(ref_tokens.size()))) {
      throw Error("alignment does not match the supplied token lists");
    }
  }
  // Prefix counts of Match ops for O(1) quality over any op span.
  std::vector<int32_t> match_prefix(ops.size() + 1, 0);
  for (size_t i = 0; i < ops.size(); ++i) {
    match_prefix[i + 1] = match_prefix[i] + (ops[i].op == EditOp::Match ? 1 : 0);
  }
  const auto quality = [&](size_t s, size_t e) {  // ops [s, e]
    return static_cast<double>(match_prefix[e + 1] - match_prefix[s]) /
           static_cast<double>(e + 1 - s);
  };
  std::vector<AlignedChunk> chunks;
  const auto emit = [&](size_t s, size_t e) {
    AlignedChunk c;
    c.ref_begin = ops[s].ref_idx;
    c.ref_end = ops[e].ref_idx + 1;
    c.start_ms = hyp_words[ops[s].hyp_idx].start_ms;
    c.end_ms = hyp_words[ops[e].hyp_idx].end_ms;
    c.anchor_quality = quality(s, e);
    for (int32_t t = c.ref_begin; t < c.ref_end; ++t) {
      if (t > c.ref_begin) c.text += ' ';
      c.text += ref_tokens[t];
    }
    if (c.end_ms > c.start_ms && c.anchor_quality >= opts.min_anchor_quality) {
      chunks.push_back(std::move(c));
    }
  };
  bool open = false;
  size_t chunk_start = 0, chunk_end = 0;
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].op != EditOp::Match) continue;
    if (!open) {
      open = true;
      chunk_start = chunk_end = i;
      continue;
    }
    int64_t dur = hyp_words[ops[i].hyp_idx].end_ms -
                  hyp_words[ops[chunk_start].hyp_idx].start_ms;
    if (dur <= opts.target_duration_ms &&
        quality(chunk_start, i) >= opts.min_anchor_quality) {
      chunk_end = i;
    } else {
      emit(chunk_start, chunk_end);
      chunk_start = chunk_end = i;
    }
  }
  if (open) emit(chunk_start, chunk_end);
  return chunks;
}

// ---------------------------------------------------------------------------
// Variant-aware token equivalence
// ---------------------------------------------------------------------------

/// Headword -> accepted variant spellings, all lowercase.
using VariantLexicon = std::unordered_map<std::string, std::unordered_set<std::string>>;

/// Tokens are equivalent when equal after case folding or when either is a
/// listed variant of the other.
class VariantEquivalence {
 public:
  VariantEquivalence() : lexicon_(std::make_shared<VariantLexicon>()) {}
  explicit VariantEquivalence(VariantLexicon lexicon)
      : lexicon_(std::make_shared<VariantLexicon>(std::move(lexicon))) {}

  bool operator()(std::string_view a, std::string_view b) const {
    std::string fa = fold_case(a);
    std::string fb = fold_case(b);
    if (fa == fb) return true;
    if (auto it = lexicon_->find(fa); it != lexicon_->end() && it->second.count(fb)) {
      return true;
    }
    if (auto it = lexicon_->find(fb); it != lexicon_->end() && it->second.count(fa)) {
      return true;
    }
    return false;
  }

 private:
  std::shared_ptr<const VariantLexicon> lexicon_;
};

inline VariantEquivalence variant_equivalence(VariantLexicon lexicon) {
  return VariantEquivalence(std::move(lexicon));
}

/// TSV: column 1 headword, remaining columns variants.  Blank lines and
/// #-comments are skipped.
inline VariantLexicon read_variant_lexicon(std::istream& in) {
  VariantLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string head, variant;
    if (!std::getline(fields, head, '\t')) continue;
    auto& set = lex[fold_case(head)];
    while (std::getline(fields, variant, '\t')) {
      if (!variant.empty()) set.insert(fold_case(variant));
    }
  }
  return lex;
}

inline VariantLexicon read_variant_lexicon_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open variant lexicon: " + path);
  return read_variant_lexicon(in);
}

}  // namespace forge

#endif  // FORGE_ALIGN_HPP_
