#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "thermoform/error.hpp"
#include "thermoform/shift.hpp"

namespace thermoform {

/// How an enumerated word must close up to be visited.
enum class Closure {
  Tail,      ///< root·ω·tail admissible
  Periodic,  ///< root·ω is a periodic word (last symbol may precede the first)
  Free,      ///< every admissible word is visited
};

struct EnumerationRequest {
  /// Fixed leading block; the enumeration extends it. Empty for plain words.
  Word root;
  Closure closure = Closure::Tail;
  /// Required when closure == Tail.
  const TailPoint* tail = nullptr;
  /// Maximum length of the extension (root excluded).
  std::size_t max_length = 0;
  /// Restricts the first extension symbol; used to partition work.
  std::optional<Symbol> first_symbol;
};

namespace detail {

template <class Keep, class Visit>
class DepthFirst {
 public:
  DepthFirst(const Subshift& sub, const EnumerationRequest& req, Keep& keep, Visit& visit)
      : sub_(sub), req_(req), keep_(keep), visit_(visit), word_(req.root) {
    word_.reserve(req.root.size() + req.max_length);
  }

  std::uint64_t run() {
    if (req_.max_length == 0) return 0;
    if (!req_.root.empty()) {
      for (Symbol s : sub_.successors(req_.root.back())) step(s);
    } else {
      for (Symbol s = 0; s < sub_.size(); ++s) step(s);
    }
    return visited_;
  }

 private:
  void step(Symbol s) {
    const std::size_t depth = word_.size() - req_.root.size();
    if (depth == 0 && req_.first_symbol && *req_.first_symbol != s) return;
    word_.push_back(s);
    const std::span<const Symbol> view(word_);
    if (keep_(view)) {
      if (closes()) {
        visit_(view);
        ++visited_;
      }
      if (depth + 1 < req_.max_length)
        for (Symbol next : sub_.successors(s)) step(next);
    }
    word_.pop_back();
  }

  bool closes() const noexcept {
    switch (req_.closure) {
      case Closure::Tail: return sub_.allowed(word_.back(), req_.tail->first());
      case Closure::Periodic: return sub_.allowed(word_.back(), word_.front());
      case Closure::Free: return true;
    }
    return false;
  }

  const Subshift& sub_;
  const EnumerationRequest& req_;
  Keep& keep_;
  Visit& visit_;
  Word word_;
  std::uint64_t visited_ = 0;
};

}  // namespace detail

/// Lexicographic depth-first enumeration of admissible extensions of
/// req.root. `keep(word)` is called on every admissible prefix (root
/// included in the span); returning false prunes the prefix and its whole
/// subtree, so the predicate must be monotone along extensions. `visit(word)`
/// is called once for each kept word that satisfies the closure condition,
/// in pre-order. Returns the number of visited words.
template <class Keep, class Visit>
std::uint64_t enumerate_admissible(const Subshift& sub, const EnumerationRequest& req, Keep&& keep, Visit&& visit) {
  if (req.closure == Closure::Tail && req.tail == nullptr)
    throw Error(ErrorCode::BadQuery, "tail closure requested without a tail");
  if (!is_admissible(req.root, sub)) throw Error(ErrorCode::Inadmissible, "root word is not admissible");
  detail::DepthFirst<std::remove_reference_t<Keep>, std::remove_reference_t<Visit>> dfs(sub, req, keep, visit);
  return dfs.run();
}

}  // namespace thermoform
