#pragma once

#include <algorithm>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <type_traits>
#include <vector>

#include "spsumma/comm.hpp"
#include "spsumma/cost_ledger.hpp"
#include "spsumma/latency_model.hpp"
#include "spsumma/process_grid.hpp"

namespace spsumma {

/// Sub-matrix metadata exchanged before each payload broadcast:
/// dimensions and nonzero count, enough for receivers to size buffers.
struct SizeTriple {
  index_t rows = 0;
  index_t cols = 0;
  index_t nnz = 0;

  bool operator==(const SizeTriple&) const = default;
};

/// Three 64-bit fields on the wire.
constexpr std::uint64_t kSizeTripleBytes = 24;

enum class ScopeKind : int { row = 0, col = 1 };

/// A row or column communicator of the process grid.
struct Scope {
  ScopeKind kind;
  int index;
};

inline Scope row_scope(int index) { return {ScopeKind::row, index}; }
inline Scope col_scope(int index) { return {ScopeKind::col, index}; }

namespace detail {

struct CollKey {
  int kind;
  int index;
  std::uint64_t seq;

  auto operator<=>(const CollKey&) const = default;
};

struct Collective {
  enum class Op { sizes, bcast };

  Op op = Op::sizes;
  int root = -1;
  std::uint64_t bytes = 0;
  SizeTriple triple;
  std::shared_ptr<const std::vector<std::byte>> payload;
  int expected = 0;
  int arrived = 0;
  int consumed = 0;
  bool complete = false;
  PathKind path = PathKind::host;
  double bcast_cost = 0.0;
  double copy_cost = 0.0;
};

/// Rendezvous engine shared by all rank threads. Collectives match by
/// (communicator, per-communicator call sequence); delivery, charging,
/// and the instance log are computed once per collective, so results and
/// ledgers do not depend on thread scheduling.
class FabricEngine {
 public:
  FabricEngine(const ProcessGrid& grid, const LatencyModel& model,
               const CommConfig& cfg)
      : grid_(grid), model_(model), cfg_(cfg), waiting_(grid.size()) {}

  const ProcessGrid& grid() const { return grid_; }
  const LatencyModel& model() const { return model_; }
  const CommConfig& comm_config() const { return cfg_; }

  SizeTriple exchange_sizes(int rank, Scope scope, std::uint64_t seq, int root,
                            const SizeTriple& triple, CostLedger& ledger) {
    std::unique_lock lock(mu_);
    auto& coll = arrive(lock, rank, scope, seq, Collective::Op::sizes, root,
                        kSizeTripleBytes, nullptr, rank == root ? &triple : nullptr);
    charge(ledger, coll);
    const SizeTriple out = coll.triple;
    consume(lock, {static_cast<int>(scope.kind), scope.index, seq});
    return out;
  }

  std::vector<std::byte> bcast(int rank, Scope scope, std::uint64_t seq,
                               int root, std::vector<std::byte> payload,
                               std::uint64_t agreed_bytes, CostLedger& ledger) {
    std::unique_lock lock(mu_);
    std::shared_ptr<const std::vector<std::byte>> shared;
    if (rank == root) {
      if (payload.size() != agreed_bytes) {
        fail_entry(lock, "broadcast root payload is " +
                             std::to_string(payload.size()) +
                             " bytes but the agreed size is " +
                             std::to_string(agreed_bytes));
      }
      shared = std::make_shared<const std::vector<std::byte>>(std::move(payload));
    }
    auto& coll = arrive(lock, rank, scope, seq, Collective::Op::bcast, root,
                        agreed_bytes, shared ? &shared : nullptr, nullptr);
    charge(ledger, coll);
    std::vector<std::byte> out = *coll.payload;
    consume(lock, {static_cast<int>(scope.kind), scope.index, seq});
    return out;
  }

  void note_finished(int) {
    std::lock_guard lock(mu_);
    ++finished_;
    check_deadlock();
  }

  std::vector<InstanceRecord> take_instances() {
    std::lock_guard lock(mu_);
    std::sort(instances_.begin(), instances_.end(),
              [](const InstanceRecord& a, const InstanceRecord& b) {
                return std::tie(a.scope_kind, a.scope_index, a.seq) <
                       std::tie(b.scope_kind, b.scope_index, b.seq);
              });
    return std::move(instances_);
  }

 private:
  bool in_scope(int rank, Scope scope) const {
    return scope.kind == ScopeKind::row ? grid_.row_of(rank) == scope.index
                                        : grid_.col_of(rank) == scope.index;
  }

  [[noreturn]] void fail_entry(std::unique_lock<std::mutex>& lock,
                               const std::string& reason) {
    aborted_ = true;
    abort_is_deadlock_ = false;
    abort_reason_ = reason;
    cv_.notify_all();
    lock.unlock();
    throw ProtocolError(reason);
  }

  Collective& arrive(std::unique_lock<std::mutex>& lock, int rank, Scope scope,
                     std::uint64_t seq, Collective::Op op, int root,
                     std::uint64_t agreed_bytes,
                     const std::shared_ptr<const std::vector<std::byte>>* payload,
                     const SizeTriple* triple) {
    if (aborted_) {
      lock.unlock();
      throw_abort();
    }
    if (scope.index < 0 || scope.index >= grid_.side()) {
      fail_entry(lock, "scope index " + std::to_string(scope.index) +
                           " outside the " + std::to_string(grid_.side()) +
                           "-wide grid");
    }
    if (!in_scope(rank, scope)) {
      fail_entry(lock, "rank " + std::to_string(rank) +
                           " entered a collective on " + scope_name(scope) +
                           " it does not belong to");
    }
    if (!in_scope(root, scope)) {
      fail_entry(lock, "broadcast root " + std::to_string(root) +
                           " is outside " + scope_name(scope));
    }

    const CollKey key{static_cast<int>(scope.kind), scope.index, seq};
    auto [it, inserted] = pending_.try_emplace(key);
    Collective& coll = it->second;
    if (inserted) {
      coll.op = op;
      coll.root = root;
      coll.bytes = agreed_bytes;
      coll.expected = grid_.side();
    } else {
      if (coll.op != op) {
        fail_entry(lock, "mismatched collective types on " + scope_name(scope));
      }
      if (coll.root != root) {
        fail_entry(lock, "ranks disagree on the broadcast root for " +
                             scope_name(scope) + " (" +
                             std::to_string(coll.root) + " vs " +
                             std::to_string(root) + ")");
      }
      if (coll.bytes != agreed_bytes) {
        fail_entry(lock, "broadcast size mismatch on " + scope_name(scope) +
                             ": " + std::to_string(coll.bytes) + " vs " +
                             std::to_string(agreed_bytes) + " bytes");
      }
    }
    if (payload) coll.payload = *payload;
    if (triple) coll.triple = *triple;
    ++coll.arrived;

    if (coll.arrived == coll.expected) {
      complete(key, coll);
    } else {
      waiting_[rank] = key;
      ++blocked_;
      check_deadlock();
      cv_.wait(lock, [&] { return coll.complete || aborted_; });
      --blocked_;
      waiting_[rank].reset();
      if (!coll.complete && aborted_) {
        lock.unlock();
        throw_abort();
      }
    }
    return coll;
  }

  void complete(const CollKey& key, Collective& coll) {
    const int fanout = coll.expected;
    if (coll.op == Collective::Op::sizes) {
      coll.path = PathKind::host;
      coll.bcast_cost = model_.host_bcast(kSizeTripleBytes, fanout);
      coll.copy_cost = 0.0;
    } else {
      coll.path = choose_path(coll.bytes, cfg_);
      if (coll.path == PathKind::device) {
        coll.bcast_cost = model_.device_bcast(coll.bytes, fanout);
        coll.copy_cost = 0.0;
      } else {
        coll.bcast_cost = model_.host_bcast(coll.bytes, fanout);
        coll.copy_cost = model_.copy_d2h(coll.bytes) + model_.copy_h2d(coll.bytes);
      }
    }
    instances_.push_back({key.kind, key.index, key.seq,
                          coll.op == Collective::Op::bcast, coll.path,
                          coll.bytes, fanout, coll.bcast_cost, coll.copy_cost});
    coll.complete = true;
    cv_.notify_all();
  }

  void charge(CostLedger& ledger, const Collective& coll) const {
    ledger.sim_at(Phase::broadcast) += coll.bcast_cost;
    ledger.sim_at(Phase::copy) += coll.copy_cost;
    if (coll.op == Collective::Op::sizes) {
      ++ledger.size_exchanges;
    } else if (coll.path == PathKind::host) {
      ++ledger.host_bcasts;
      ledger.bytes_host_path += coll.bytes;
    } else {
      ++ledger.device_bcasts;
      ledger.bytes_device_path += coll.bytes;
    }
  }

  void consume(std::unique_lock<std::mutex>&, const CollKey& key) {
    auto it = pending_.find(key);
    if (it != pending_.end() && ++it->second.consumed == it->second.expected) {
      pending_.erase(it);
    }
  }

  void check_deadlock() {
    if (blocked_ + finished_ < grid_.size() || blocked_ == 0 || aborted_) return;
    // Ranks parked on an already-complete collective are about to wake.
    for (int r = 0; r < grid_.size(); ++r) {
      if (!waiting_[r]) continue;
      auto it = pending_.find(*waiting_[r]);
      if (it != pending_.end() && it->second.complete) return;
    }
    std::ostringstream msg;
    msg << "deadlock: no collective can complete;";
    for (int r = 0; r < grid_.size(); ++r) {
      if (!waiting_[r]) continue;
      const auto& key = *waiting_[r];
      msg << " rank " << r << " waits on "
          << (key.kind == 0 ? "row " : "col ") << key.index << " collective #"
          << key.seq << ";";
    }
    aborted_ = true;
    abort_is_deadlock_ = true;
    abort_reason_ = msg.str();
    cv_.notify_all();
  }

  [[noreturn]] void throw_abort() const {
    if (abort_is_deadlock_) throw DeadlockError(abort_reason_);
    throw AbortedError("peer failure: " + abort_reason_);
  }

  static std::string scope_name(Scope scope) {
    return (scope.kind == ScopeKind::row ? "grid row " : "grid column ") +
           std::to_string(scope.index);
  }

  const ProcessGrid grid_;
  const LatencyModel& model_;
  const CommConfig cfg_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::map<CollKey, Collective> pending_;
  std::vector<std::optional<CollKey>> waiting_;
  std::vector<InstanceRecord> instances_;
  int blocked_ = 0;
  int finished_ = 0;
  bool aborted_ = false;
  bool abort_is_deadlock_ = false;
  std::string abort_reason_;
};

}  // namespace detail

/// Per-rank execution context handed to rank programs. All cross-rank
/// traffic goes through the collectives below; everything else a program
/// touches must be rank-local.
class Rank {
 public:
  Rank(detail::FabricEngine& engine, int id, CostLedger& ledger)
      : engine_(engine), id_(id), ledger_(ledger) {}

  Rank(const Rank&) = delete;
  Rank& operator=(const Rank&) = delete;

  int id() const { return id_; }
  int grid_row() const { return engine_.grid().row_of(id_); }
  int grid_col() const { return engine_.grid().col_of(id_); }
  const ProcessGrid& grid() const { return engine_.grid(); }
  const LatencyModel& model() const { return engine_.model(); }
  const CommConfig& comm_config() const { return engine_.comm_config(); }
  CostLedger& ledger() { return ledger_; }

  /// Metadata broadcast; always routed through host memory.
  SizeTriple exchange_sizes(Scope scope, int root, const SizeTriple& triple) {
    return engine_.exchange_sizes(id_, scope, next_seq(scope), root, triple,
                                  ledger_);
  }

  /// Payload broadcast of device-resident bytes. The root passes the
  /// buffer; every rank passes the size agreed through a preceding
  /// exchange_sizes. Returns a device-resident copy on every rank.
  DeviceBuffer bcast(Scope scope, int root, DeviceBuffer payload,
                     std::uint64_t agreed_bytes) {
    DeviceBuffer out;
    out.bytes = engine_.bcast(id_, scope, next_seq(scope), root,
                              std::move(payload.bytes), agreed_bytes, ledger_);
    return out;
  }

  void charge_copy_h2d(std::uint64_t bytes, Phase phase) {
    ledger_.sim_at(phase) += engine_.model().copy_h2d(bytes);
  }
  void charge_copy_d2h(std::uint64_t bytes, Phase phase) {
    ledger_.sim_at(phase) += engine_.model().copy_d2h(bytes);
  }
  void add_wall(Phase phase, double seconds) {
    ledger_.wall_at(phase) += seconds;
  }
  void count_local_multiply() { ++ledger_.local_multiply_calls; }
  void count_skipped_stage() { ++ledger_.skipped_stages; }
  void note_resident_broadcast_bytes(std::uint64_t bytes) {
    ledger_.peak_bcast_buffer_bytes =
        std::max(ledger_.peak_bcast_buffer_bytes, bytes);
  }

 private:
  std::uint64_t next_seq(Scope scope) {
    return seqs_[{static_cast<int>(scope.kind), scope.index}]++;
  }

  detail::FabricEngine& engine_;
  int id_;
  CostLedger& ledger_;
  std::map<std::pair<int, int>, std::uint64_t> seqs_;
};

template <class R>
struct RunResult {
  std::vector<R> results;
  CostLedger merged;
  std::vector<CostLedger> per_rank;
  std::vector<InstanceRecord> instances;
};

/// Executes one program per rank to completion and folds the accounting.
/// Simulated collective costs enter the merged ledger once per instance
/// (bulk-synchronous accounting); rank-local phases merge as the maximum
/// across ranks; kernel invocation counters sum.
template <class F>
auto run_program(const ProcessGrid& grid, const LatencyModel& model,
                 const CommConfig& cfg, F&& program)
    -> RunResult<std::invoke_result_t<F&, Rank&>> {
  using R = std::invoke_result_t<F&, Rank&>;
  static_assert(!std::is_void_v<R>, "rank programs must return a value");

  detail::FabricEngine engine(grid, model, cfg);
  const int p = grid.size();
  std::vector<CostLedger> ledgers(p);
  std::vector<std::optional<R>> slots(p);
  std::vector<std::exception_ptr> errors(p);

  {
    std::vector<std::thread> threads;
    threads.reserve(p);
    for (int rank = 0; rank < p; ++rank) {
      threads.emplace_back([&, rank] {
        Rank ctx(engine, rank, ledgers[rank]);
        try {
          slots[rank].emplace(program(ctx));
        } catch (...) {
          errors[rank] = std::current_exception();
        }
        engine.note_finished(rank);
      });
    }
    for (auto& t : threads) t.join();
  }

  // Report the root cause: a direct error from the lowest rank wins over
  // the teardown errors it caused on its peers.
  std::exception_ptr deadlock;
  std::exception_ptr aborted;
  for (int rank = 0; rank < p; ++rank) {
    if (!errors[rank]) continue;
    try {
      std::rethrow_exception(errors[rank]);
    } catch (const AbortedError&) {
      if (!aborted) aborted = errors[rank];
    } catch (const DeadlockError&) {
      if (!deadlock) deadlock = errors[rank];
    } catch (...) {
      std::rethrow_exception(errors[rank]);
    }
  }
  if (deadlock) std::rethrow_exception(deadlock);
  if (aborted) std::rethrow_exception(aborted);

  RunResult<R> out;
  out.per_rank = std::move(ledgers);
  out.instances = engine.take_instances();
  for (const auto& rec : out.instances) {
    out.merged.sim_at(Phase::broadcast) += rec.bcast_cost;
    out.merged.sim_at(Phase::copy) += rec.copy_cost;
    if (!rec.payload) {
      ++out.merged.size_exchanges;
    } else if (rec.path == PathKind::host) {
      ++out.merged.host_bcasts;
      out.merged.bytes_host_path += rec.bytes;
    } else {
      ++out.merged.device_bcasts;
      out.merged.bytes_device_path += rec.bytes;
    }
  }
  for (const auto& led : out.per_rank) {
    for (Phase ph : {Phase::prepare, Phase::local_multiply, Phase::merge}) {
      out.merged.sim_at(ph) = std::max(out.merged.sim_at(ph), led.sim_at(ph));
    }
    for (std::size_t i = 0; i < kPhaseCount; ++i) {
      out.merged.wall[i] = std::max(out.merged.wall[i], led.wall[i]);
    }
    out.merged.local_multiply_calls += led.local_multiply_calls;
    out.merged.skipped_stages += led.skipped_stages;
    out.merged.peak_bcast_buffer_bytes = std::max(
        out.merged.peak_bcast_buffer_bytes, led.peak_bcast_buffer_bytes);
  }

  out.results.reserve(p);
  for (auto& slot : slots) out.results.push_back(std::move(*slot));
  return out;
}

/// Convenience overload; throws GridError when p is not a perfect square.
template <class F>
auto run_program(int process_count, const LatencyModel& model,
                 const CommConfig& cfg, F&& program) {
  return run_program(ProcessGrid(process_count), model, cfg,
                     std::forward<F>(program));
}

}  // namespace spsumma
