#include "dcs/topology.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dcs {

Graph Graph::from_edges(int m, const std::vector<std::pair<int, int>>& edges) {
  if (m < 1) throw std::invalid_argument("graph: agent count must be positive, got " + std::to_string(m));
  Graph g;
  g.m_ = m;
  g.adj_.assign(m, {});
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || a >= m || b < 0 || b >= m) {
      throw std::invalid_argument("graph: edge (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                  ") has endpoint outside 1.." + std::to_string(m));
    }
    if (a == b) throw std::invalid_argument("graph: self-loop on node " + std::to_string(a + 1));
    auto key = std::minmax(a, b);
    if (!seen.insert({key.first, key.second}).second) {
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(key.first + 1) + "," +
                                  std::to_string(key.second + 1) + ")");
    }
    g.edges_.emplace_back(key.first, key.second);
    g.adj_[a].push_back(b);
    g.adj_[b].push_back(a);
  }
  for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
  return g;
}

bool Graph::adjacent(int i, int j) const {
  const auto& nb = adj_.at(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, const std::string& spec) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("graph spec '" + spec + "': expected integer, got '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("graph spec '" + spec + "': expected integer, got '" + s + "'");
  return v;
}

void require_m(int m, const std::string& spec, int min = 2) {
  if (m < min) {
    throw std::invalid_argument("graph spec '" + spec + "': needs at least " + std::to_string(min) + " agents");
  }
}

}  // namespace

Graph build_graph(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return read_graph_file(spec.substr(5));
  auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("graph spec is empty");
  const std::string& kind = parts[0];
  std::vector<std::pair<int, int>> edges;

  auto arity = [&](std::size_t n) {
    if (parts.size() != n) throw std::invalid_argument("graph spec '" + spec + "': wrong number of fields");
  };

  if (kind == "path") {
    arity(2);
    int m = parse_int(parts[1], spec);
    require_m(m, spec);
    for (int i = 0; i + 1 < m; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(m, edges);
  }
  if (kind == "cycle") {
    arity(2);
    int m = parse_int(parts[1], spec);
    require_m(m, spec, 3);
    for (int i = 0; i < m; ++i) edges.emplace_back(i, (i + 1) % m);
    return Graph::from_edges(m, edges);
  }
  if (kind == "complete") {
    arity(2);
    int m = parse_int(parts[1], spec);
    require_m(m, spec);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) edges.emplace_back(i, j);
    return Graph::from_edges(m, edges);
  }
  if (kind == "star") {
    arity(2);
    int m = parse_int(parts[1], spec);
    require_m(m, spec);
    for (int j = 1; j < m; ++j) edges.emplace_back(0, j);
    return Graph::from_edges(m, edges);
  }
  if (kind == "erdos_renyi") {
    arity(4);
    int m = parse_int(parts[1], spec);
    require_m(m, spec);
    double p = 0.0;
    try {
      p = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw std::invalid_argument("graph spec '" + spec + "': bad probability '" + parts[2] + "'");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("graph spec '" + spec + "': p must lie in [0,1]");
    std::mt19937_64 rng(static_cast<std::uint64_t>(std::stoull(parts[3])));
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (coin(rng)) edges.emplace_back(i, j);
    return Graph::from_edges(m, edges);
  }
  throw std::invalid_argument("graph spec '" + spec + "': unknown kind '" + kind + "'");
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  int m = 0;
  if (!(in >> m)) throw std::invalid_argument("graph file " + path + ": missing agent count");
  if (m < 2) throw std::invalid_argument("graph file " + path + ": needs at least 2 agents");
  std::vector<std::pair<int, int>> edges;
  std::string line;
  std::getline(in, line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    int a = 0, b = 0;
    if (!(ls >> a)) continue;
    std::string rest;
    if (!(ls >> b) || (ls >> rest)) {
      throw std::invalid_argument("graph file " + path + ":" + std::to_string(lineno) + ": expected 'i j'");
    }
    edges.emplace_back(a - 1, b - 1);
  }
  return Graph::from_edges(m, edges);
}

void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path);
  out << g.agents() << '\n';
  for (auto [a, b] : g.edges()) out << a + 1 << ' ' << b + 1 << '\n';
}

bool is_connected(const Graph& g) {
  if (g.agents() == 0) return false;
  std::vector<char> seen(g.agents(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int i = q.front();
    q.pop();
    for (int j : g.neighbors(i)) {
      if (!seen[j]) {
        seen[j] = 1;
        ++count;
        q.push(j);
      }
    }
  }
  return count == g.agents();
}

LaplacianOperator::LaplacianOperator(const Graph& g, int dim) : m_(g.agents()), d_(dim), rows_(g.agents()) {
  if (dim < 1) throw std::invalid_argument("laplacian: block dimension must be positive");
  for (int i = 0; i < m_; ++i) {
    auto& r = rows_[i];
    for (int j : g.neighbors(i)) r.push_back({j, -1.0});
    r.push_back({i, static_cast<double>(g.degree(i))});
    std::sort(r.begin(), r.end(), [](const LaplacianEntry& a, const LaplacianEntry& b) { return a.col < b.col; });
  }
}

Stacked LaplacianOperator::apply(const Stacked& x) const {
  if (x.agents() != m_ || x.dim() != d_) {
    throw std::invalid_argument("apply_laplacian: expected " + std::to_string(m_) + " blocks of length " +
                                std::to_string(d_) + ", got " + std::to_string(x.agents()) + "x" +
                                std::to_string(x.dim()));
  }
  Stacked out(m_, d_);
  for (int i = 0; i < m_; ++i) {
    auto dst = out.block(i);
    for (const auto& e : rows_[i]) dst += e.value * x.block(e.col);
  }
  return out;
}

Matrix LaplacianOperator::dense() const {
  Matrix L = Matrix::Zero(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (const auto& e : rows_[i]) L(i, e.col) = e.value;
  return L;
}

LaplacianOperator laplacian(const Graph& g, int dim) { return LaplacianOperator(g, dim); }

Stacked apply_laplacian(const LaplacianOperator& L, const Stacked& x) { return L.apply(x); }

SpectralConstants spectral_constants(const LaplacianOperator& L) {
  if (L.agents() < 2) throw std::invalid_argument("spectral_constants: need at least 2 agents");
  Eigen::SelfAdjointEigenSolver<Matrix> es(L.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectral_constants: eigensolver failed");
  const Vector& ev = es.eigenvalues();
  double lmax = ev.maxCoeff();
  if (!(lmax > 0.0)) throw std::invalid_argument("spectral_constants: Laplacian is zero (graph has no edges)");
  double thresh = 1e-9 * lmax;
  int zeros = 0;
  double smin = lmax;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= thresh) {
      ++zeros;
    } else {
      smin = std::min(smin, ev(i));
    }
  }
  if (zeros != 1) {
    throw std::invalid_argument("spectral_constants: graph is disconnected (zero eigenvalue multiplicity " +
                                std::to_string(zeros) + ")");
  }
  return {lmax, smin};
}

}  // namespace dcs
