#include "bivirus/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "bivirus/errors.hpp"

namespace bivirus {

ContactGraph::ContactGraph(std::size_t n, std::vector<Arc> arcs)
    : n_(n), arcs_(std::move(arcs)), irreducible_(false) {
  if (n_ == 0) throw PreconditionError("contact graph needs at least one node");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Arc& a : arcs_) {
    if (a.source >= n_ || a.target >= n_) {
      throw PreconditionError("arc " + std::to_string(a.source) + "->" +
                              std::to_string(a.target) + " references a node outside [0, " +
                              std::to_string(n_) + ")");
    }
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw PreconditionError("arc " + std::to_string(a.source) + "->" +
                              std::to_string(a.target) + " has a negative or non-finite weight");
    }
    if (!seen.emplace(a.source, a.target).second) {
      throw PreconditionError("duplicate arc " + std::to_string(a.source) + "->" +
                              std::to_string(a.target));
    }
  }
  irreducible_ = check_irreducible(adjacency_matrix());
}

Matrix ContactGraph::adjacency_matrix() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix B = Matrix::Zero(n, n);
  for (const Arc& a : arcs_) {
    B(static_cast<Eigen::Index>(a.target), static_cast<Eigen::Index>(a.source)) = a.weight;
  }
  return B;
}

// Iterative Tarjan. Successors of node j are the i with B(i, j) > 0.
std::vector<std::size_t> strongly_connected_components(const Matrix& B) {
  if (B.rows() != B.cols()) {
    throw PreconditionError("expected a square matrix, got " + std::to_string(B.rows()) + "x" +
                            std::to_string(B.cols()));
  }
  const auto n = static_cast<std::size_t>(B.rows());
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) succ[j].push_back(i);
    }
  }

  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // (node, next successor slot)
  std::size_t counter = 0, n_components = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      auto& [v, slot] = frames.back();
      if (slot < succ[v].size()) {
        const std::size_t w = succ[v][slot++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = n_components;
        } while (w != done);
        ++n_components;
      }
    }
  }
  return component;
}

bool check_irreducible(const Matrix& B) {
  const auto labels = strongly_connected_components(B);
  return std::all_of(labels.begin(), labels.end(), [](std::size_t c) { return c == 0; });
}

}  // namespace bivirus
