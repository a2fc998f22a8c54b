#pragma once

#include <cstddef>
#include <vector>

#include "bivirus/types.hpp"

namespace bivirus {

/// Weighted arc of a contact graph. Contagion flows from `source` to `target`
/// at rate `weight`; self-arcs are allowed.
struct Arc {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;
};

/// Directed contact graph in sparse arc-list form.
///
/// Construction validates node indices, nonnegative weights and rejects duplicate
/// arcs. The irreducibility flag is computed once from the strictly positive arcs.
class ContactGraph {
 public:
  ContactGraph(std::size_t n, std::vector<Arc> arcs);

  std::size_t size() const noexcept { return n_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  bool is_irreducible() const noexcept { return irreducible_; }

  /// Dense matrix with entry (i, j) equal to the weight of arc j -> i.
  Matrix adjacency_matrix() const;

 private:
  std::size_t n_;
  std::vector<Arc> arcs_;
  bool irreducible_;
};

/// Strongly connected components of the digraph with an arc j -> i whenever
/// B(i, j) > 0. Returns a component label per node; labels are dense from 0.
std::vector<std::size_t> strongly_connected_components(const Matrix& B);

/// True iff B is irreducible, i.e. its positive-entry digraph is strongly connected.
/// Throws PreconditionError on a non-square input.
bool check_irreducible(const Matrix& B);

}  // namespace bivirus
