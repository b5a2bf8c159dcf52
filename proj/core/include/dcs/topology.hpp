#pragma once

#include "dcs/stacked.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dcs {

/// Undirected simple graph on agents 0..m-1. Every node is implicitly its
/// own neighbor; self-loops are therefore never listed as edges.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from 0-based edges. Throws on duplicates, self-loops and
  /// out-of-range endpoints.
  static Graph from_edges(int m, const std::vector<std::pair<int, int>>& edges);

  int agents() const { return m_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Sorted neighbor list of i, excluding i itself.
  const std::vector<int>& neighbors(int i) const { return adj_.at(i); }
  int degree(int i) const { return static_cast<int>(adj_.at(i).size()); }
  bool adjacent(int i, int j) const;

 private:
  int m_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

/// Parses "path:m", "cycle:m", "complete:m", "star:m", "erdos_renyi:m:p:seed"
/// or "file:<path>" and builds the graph.
Graph build_graph(const std::string& spec);

/// Reads the plain-text edge list format: first line m, then 1-based "i j".
Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path);

bool is_connected(const Graph& g);

struct LaplacianEntry {
  int col;
  double value;
};

/// Block action of L (x) I_d. Rows store the diagonal entry as well, sorted by
/// column.
class LaplacianOperator {
 public:
  LaplacianOperator(const Graph& g, int dim);

  int agents() const { return m_; }
  int dim() const { return d_; }
  const std::vector<LaplacianEntry>& row(int i) const { return rows_.at(i); }

  Stacked apply(const Stacked& x) const;
  /// Dense m x m Laplacian (not the Kronecker product).
  Matrix dense() const;

 private:
  int m_;
  int d_;
  std::vector<std::vector<LaplacianEntry>> rows_;
};

LaplacianOperator laplacian(const Graph& g, int dim);
Stacked apply_laplacian(const LaplacianOperator& L, const Stacked& x);

struct SpectralConstants {
  double op_norm = 0.0;
  double min_nonzero_singular = 0.0;
};

SpectralConstants spectral_constants(const LaplacianOperator& L);

}  // namespace dcs
