#pragma once

#include "dcs/stacked.hpp"
#include "dcs/topology.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dcs {

class LocalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact accounting of communication and local oracle work.
struct RoundLedger {
  std::int64_t comm_rounds = 0;
  std::map<std::pair<int, int>, std::int64_t> per_edge_messages;  // (sender, receiver)
  std::vector<std::int64_t> subgrad_evals;
  std::vector<std::int64_t> stoch_evals;
  std::vector<std::int64_t> prox_solves;
  std::map<std::pair<int, int>, std::int64_t> payload_reads;  // (reader, source)

  RoundLedger() = default;
  explicit RoundLedger(int agents)
      : subgrad_evals(agents, 0), stoch_evals(agents, 0), prox_solves(agents, 0) {}

  int agents() const { return static_cast<int>(subgrad_evals.size()); }
};

/// Inbound payloads of one agent for the current round, self included.
class Mailbox {
 public:
  Mailbox(int owner, std::vector<std::pair<int, Vector>> entries);

  int owner() const { return owner_; }
  bool has(int j) const;
  /// Payload sent by j. Throws LocalityError unless j is the owner or a neighbor.
  const Vector& from(int j) const;
  const std::vector<std::pair<int, Vector>>& entries() const { return entries_; }
  const std::vector<std::int64_t>& read_counts() const { return reads_; }

 private:
  int owner_;
  std::vector<std::pair<int, Vector>> entries_;  // sorted by sender
  mutable std::vector<std::int64_t> reads_;
};

/// One synchronous round: every agent sends its payload to all neighbors.
std::vector<Mailbox> broadcast_round(RoundLedger& ledger, const Graph& graph,
                                     const std::map<int, Vector>& payloads);
std::vector<Mailbox> broadcast_round(RoundLedger& ledger, const Graph& graph, const Stacked& payloads);

/// Folds the mailbox read logs into the ledger; called at the round barrier.
void close_round(RoundLedger& ledger, const std::vector<Mailbox>& boxes);

/// sum over j in N_i of L_ij * payload_j.
Vector neighbor_weighted_sum(int i, const Mailbox& mailbox, const std::vector<LaplacianEntry>& laplacian_row);

/// Thread count from DCS_THREADS (default 1).
int configured_threads();

/// Runs f(i) for i in [0, m) on up to `threads` threads. f must only write
/// agent-local state.
void for_each_agent(int m, int threads, const std::function<void(int)>& f);

}  // namespace dcs
