#include "thermoform/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "thermoform/error.hpp"

namespace thermoform {

TransferGraph::TransferGraph(const Subshift& sub, const LocallyConstantPotential& f, std::size_t state_length)
    : sub_(sub), f_(f) {
  const std::size_t d = f.depth();
  length_ = state_length == 0 ? std::max<std::size_t>(d > 1 ? d - 1 : 1, 1) : state_length;
  if (length_ + 1 < d) throw Error(ErrorCode::BadQuery, "state length shorter than potential depth - 1");

  states_ = admissible_words(sub, length_);
  std::size_t table = 1;
  for (std::size_t k = 0; k < length_; ++k) table *= sub.size();
  state_index_.assign(table, static_cast<std::size_t>(-1));
  auto encode = [&](std::span<const Symbol> w) {
    std::size_t i = 0;
    for (std::size_t k = 0; k < length_; ++k) i = i * sub.size() + w[k];
    return i;
  };
  for (std::size_t i = 0; i < states_.size(); ++i) state_index_[encode(states_[i])] = i;

  // Prepending e to the point with state s gives state e·s[0..L-2]; the
  // weight is read from the window e·s[0..d-2].
  Word joined(length_ + 1);
  for (std::size_t col = 0; col < states_.size(); ++col) {
    const Word& s = states_[col];
    for (Symbol e : sub.predecessors(s.front())) {
      joined[0] = e;
      std::copy(s.begin(), s.end(), joined.begin() + 1);
      const std::size_t row = state_index_[encode(joined)];
      edges_.push_back(TransferEdge{row, col, f.weight(joined)});
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const TransferEdge& a, const TransferEdge& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
}

std::size_t TransferGraph::state_of(std::span<const Symbol> word) const {
  if (word.size() < length_) throw Error(ErrorCode::BadQuery, "word shorter than the state length");
  std::size_t i = 0;
  for (std::size_t k = 0; k < length_; ++k) i = i * sub_.size() + word[k];
  const std::size_t s = state_index_.at(i);
  if (s == static_cast<std::size_t>(-1)) throw Error(ErrorCode::Inadmissible, "state word is not admissible");
  return s;
}

std::size_t TransferGraph::state_of(const TailPoint& point) const { return state_of(point.head(length_)); }

std::vector<double> TransferGraph::apply(double x, std::span<const double> v) const {
  std::vector<double> y(size(), 0.0);
  for (const auto& e : edges_) y[e.row] += std::exp(x * e.weight) * v[e.col];
  return y;
}

std::vector<double> TransferGraph::apply_transpose(double x, std::span<const double> u) const {
  std::vector<double> y(size(), 0.0);
  for (const auto& e : edges_) y[e.col] += std::exp(x * e.weight) * u[e.row];
  return y;
}

std::vector<std::complex<double>> TransferGraph::apply(std::complex<double> s,
                                                       std::span<const std::complex<double>> v) const {
  std::vector<std::complex<double>> y(size(), 0.0);
  for (const auto& e : edges_) y[e.row] += std::exp(s * e.weight) * v[e.col];
  return y;
}

std::vector<std::complex<double>> TransferGraph::dense(std::complex<double> s) const {
  std::vector<std::complex<double>> out(size() * size(), 0.0);
  for (const auto& e : edges_) out[e.row * size() + e.col] = std::exp(s * e.weight);
  return out;
}

}  // namespace thermoform
