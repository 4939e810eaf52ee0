#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxaudit/catalog.hpp"
#include "ctxaudit/engine.hpp"

namespace ctxaudit::detail {

// Maps a language-local enum onto catalog state ids and back.
template <typename E, std::size_t N>
class StateBinding {
 public:
  StateBinding(Language language, const std::array<std::string_view, N>& names) {
    const StateCatalog& catalog = StateCatalog::builtin();
    local_.assign(catalog.size(), -1);
    for (std::size_t i = 0; i < N; ++i) {
      ids_[i] = catalog.require(language, names[i]);
      local_[ids_[i]] = static_cast<int>(i);
    }
  }

  StateId id(E e) const noexcept { return ids_[static_cast<std::size_t>(e)]; }
  StateId operator()(E e) const noexcept { return id(e); }

  std::optional<E> local(StateId id) const noexcept {
    if (id >= local_.size() || local_[id] < 0) return std::nullopt;
    return static_cast<E>(local_[id]);
  }

 private:
  std::array<StateId, N> ids_{};
  std::vector<int> local_;
};

// Lower-case ASCII word trie walked one byte per step; node ids live in
// stack symbols so keyword recognition stays a function of the stack top.
class WordTrie {
 public:
  static constexpr std::uint16_t kNoNode = 0xFFFF;
  static constexpr std::uint16_t kRoot = 0;

  WordTrie(const std::vector<std::pair<std::string_view, int>>& words, bool fold_case) : fold_case_(fold_case) {
    nodes_.emplace_back();
    for (const auto& [word, tag] : words) {
      std::uint16_t node = kRoot;
      for (char c : word) {
        const int slot = c - 'a';
        if (nodes_[node].child[slot] == kNoNode) {
          nodes_[node].child[slot] = static_cast<std::uint16_t>(nodes_.size());
          nodes_.emplace_back();
        }
        node = nodes_[node].child[slot];
      }
      nodes_[node].tag = tag;
    }
  }

  std::uint16_t child(std::uint16_t node, std::uint8_t byte) const noexcept {
    if (node == kNoNode) return kNoNode;
    if (fold_case_ && byte >= 'A' && byte <= 'Z') byte = static_cast<std::uint8_t>(byte + 32);
    if (byte < 'a' || byte > 'z') return kNoNode;
    return nodes_[node].child[byte - 'a'];
  }

  // Tag of the word ending at `node`, or -1.
  int tag(std::uint16_t node) const noexcept { return node == kNoNode ? -1 : nodes_[node].tag; }

 private:
  struct Node {
    Node() { child.fill(kNoNode); }
    std::array<std::uint16_t, 26> child;
    int tag = -1;
  };
  std::vector<Node> nodes_;
  bool fold_case_;
};

inline Transition advance(StateId next) { return Transition{next, HeadOp::Advance, StackOp::None, {}}; }
inline Transition revisit(StateId next) { return Transition{next, HeadOp::Revisit, StackOp::None, {}}; }
inline Transition error_at(StateId current) { return Transition{current, HeadOp::Error, StackOp::None, {}}; }

inline Transition push(StateId next, StackSymbol symbol, HeadOp head = HeadOp::Advance) {
  return Transition{next, head, StackOp::Push, symbol};
}
inline Transition pop(StateId next, HeadOp head = HeadOp::Advance) {
  return Transition{next, head, StackOp::Pop, {}};
}
inline Transition replace(StateId next, StackSymbol symbol, HeadOp head = HeadOp::Advance) {
  return Transition{next, head, StackOp::Replace, symbol};
}

inline bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }
inline bool is_alpha(std::uint8_t c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }

}  // namespace ctxaudit::detail
