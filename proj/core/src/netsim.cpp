#include "dcs/netsim.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace dcs {

Mailbox::Mailbox(int owner, std::vector<std::pair<int, Vector>> entries)
    : owner_(owner), entries_(std::move(entries)), reads_(entries_.size(), 0) {
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

bool Mailbox::has(int j) const {
  return std::any_of(entries_.begin(), entries_.end(), [j](const auto& e) { return e.first == j; });
}

const Vector& Mailbox::from(int j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                             [](const auto& e, int key) { return e.first < key; });
  if (it == entries_.end() || it->first != j) {
    throw LocalityError("agent " + std::to_string(owner_ + 1) + " tried to read a payload from agent " +
                        std::to_string(j + 1) + ", which is not in its neighborhood");
  }
  ++reads_[static_cast<std::size_t>(it - entries_.begin())];
  return it->second;
}

std::vector<Mailbox> broadcast_round(RoundLedger& ledger, const Graph& graph,
                                     const std::map<int, Vector>& payloads) {
  const int m = graph.agents();
  for (int i = 0; i < m; ++i) {
    if (!payloads.count(i)) {
      throw std::invalid_argument("broadcast_round: missing payload for agent " + std::to_string(i + 1));
    }
  }
  if (static_cast<int>(payloads.size()) != m) {
    throw std::invalid_argument("broadcast_round: payload for an agent outside the graph");
  }
  std::vector<Mailbox> boxes;
  boxes.reserve(m);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, Vector>> in;
    in.emplace_back(i, payloads.at(i));
    for (int j : graph.neighbors(i)) {
      in.emplace_back(j, payloads.at(j));
      ++ledger.per_edge_messages[{j, i}];
    }
    boxes.emplace_back(i, std::move(in));
  }
  ++ledger.comm_rounds;
  return boxes;
}

std::vector<Mailbox> broadcast_round(RoundLedger& ledger, const Graph& graph, const Stacked& payloads) {
  if (payloads.agents() != graph.agents()) {
    throw std::invalid_argument("broadcast_round: payload count does not match the graph");
  }
  std::map<int, Vector> p;
  for (int i = 0; i < payloads.agents(); ++i) p.emplace(i, payloads.block(i));
  return broadcast_round(ledger, graph, p);
}

void close_round(RoundLedger& ledger, const std::vector<Mailbox>& boxes) {
  for (const auto& box : boxes) {
    const auto& counts = box.read_counts();
    for (std::size_t e = 0; e < counts.size(); ++e) {
      if (counts[e] > 0) ledger.payload_reads[{box.owner(), box.entries()[e].first}] += counts[e];
    }
  }
}

Vector neighbor_weighted_sum(int i, const Mailbox& mailbox, const std::vector<LaplacianEntry>& laplacian_row) {
  if (mailbox.owner() != i) throw LocalityError("agent " + std::to_string(i + 1) + " read another agent's mailbox");
  if (laplacian_row.empty()) throw std::invalid_argument("neighbor_weighted_sum: empty Laplacian row");
  Vector acc;
  for (const auto& e : laplacian_row) {
    const Vector& p = mailbox.from(e.col);
    if (acc.size() == 0) acc = Vector::Zero(p.size());
    acc += e.value * p;
  }
  return acc;
}

int configured_threads() {
  const char* env = std::getenv("DCS_THREADS");
  if (!env) return 1;
  try {
    int t = std::stoi(env);
    return std::max(1, t);
  } catch (const std::exception&) {
    return 1;
  }
}

void for_each_agent(int m, int threads, const std::function<void(int)>& f) {
  threads = std::clamp(threads, 1, std::max(1, m));
  if (threads == 1) {
    for (int i = 0; i < m; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < m; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace dcs
