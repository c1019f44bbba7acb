#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace blockprop {

/// Simulated time in integer milliseconds.
using SimTime = std::int64_t;
using NodeId = std::uint32_t;
using BlockId = std::uint32_t;

inline constexpr NodeId kNoNode = 0xFFFFFFFFu;

/// Rounds a non-negative millisecond quantity half-up to the integer clock.
inline SimTime round_half_up(double ms) {
  return static_cast<SimTime>(ms + 0.5);
}

enum class MessageKind : std::uint8_t {
  Inv,
  GetData,
  FullBlock,
  GetDataCompact,
  CompactBlock,
  GetBlockTxn,
  BlockTxn,
};
inline constexpr std::size_t kMessageKindCount = 7;

std::string_view to_string(MessageKind kind);

enum class EventKind : std::uint8_t { MiningComplete, MessageArrival };

/// A timestamped simulator action. `block` is the block being mined or the
/// block a message refers to. For messages, `payload_bytes` is the size on the
/// wire and `aux` carries the requested byte count of a GetBlockTxn.
struct Event {
  SimTime fire_time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::MiningComplete;
  MessageKind message = MessageKind::Inv;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  BlockId block = 0;
  std::uint32_t payload_bytes = 0;
  std::uint32_t aux = 0;

  static Event mining(SimTime at, NodeId node, BlockId parent) {
    Event e;
    e.fire_time = at;
    e.kind = EventKind::MiningComplete;
    e.src = node;
    e.dst = node;
    e.block = parent;
    return e;
  }

  static Event arrival(SimTime at, NodeId from, NodeId to, MessageKind kind,
                       BlockId block, std::uint32_t payload_bytes,
                       std::uint32_t aux = 0) {
    Event e;
    e.fire_time = at;
    e.kind = EventKind::MessageArrival;
    e.message = kind;
    e.src = from;
    e.dst = to;
    e.block = block;
    e.payload_bytes = payload_bytes;
    e.aux = aux;
    return e;
  }
};

struct EventHandle {
  std::uint64_t seq = 0;
  friend bool operator==(EventHandle, EventHandle) = default;
};

class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Stop condition for Engine::run. Both limits may be set; the first to hold
/// wins. With neither set the run drains the queue.
struct StopCondition {
  std::optional<std::uint64_t> mining_events;
  std::optional<SimTime> time;

  static StopCondition block_count_reached(std::uint64_t n) {
    return StopCondition{n, std::nullopt};
  }
  static StopCondition time_reached(SimTime t) {
    return StopCondition{std::nullopt, t};
  }
  static StopCondition drain() { return {}; }
};

/// Single-threaded discrete-event core. Events dispatch in (fire_time, seq)
/// order; seq is assigned at scheduling time and strictly increases.
class Engine {
 public:
  Engine() = default;

  SimTime now() const { return now_; }
  std::size_t pending() const { return heap_.size() - cancelled_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }
  std::uint64_t mining_dispatched() const { return mining_dispatched_; }

  EventHandle schedule(Event event);

  /// Removes a pending event. The handle must refer to an event that has not
  /// been dispatched yet.
  void cancel(EventHandle handle);

  /// FNV-1a hash over (time, seq, kind, src, dst) of every dispatched event.
  std::uint64_t trace_hash() const { return trace_hash_; }

  /// When set, each dispatched event is also written as a
  /// `time,seq,kind,src,dst` CSV line.
  void set_trace_sink(std::ostream* sink) { trace_sink_ = sink; }

  template <typename Handler>
  void run(const StopCondition& stop, Handler&& handler);

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.seq > b.seq;
    }
  };

  void discard_cancelled_top();
  void compact();
  void record(const Event& event);

  std::vector<Event> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::uint64_t next_seq_ = 0;
  SimTime now_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t mining_dispatched_ = 0;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ull;
  std::ostream* trace_sink_ = nullptr;
};

template <typename Handler>
void Engine::run(const StopCondition& stop, Handler&& handler) {
  const std::uint64_t mining_start = mining_dispatched_;
  while (true) {
    if (stop.mining_events &&
        mining_dispatched_ - mining_start >= *stop.mining_events) {
      return;
    }
    discard_cancelled_top();
    if (heap_.empty()) return;
    if (stop.time && heap_.front().fire_time > *stop.time) return;

    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    const Event event = heap_.back();
    heap_.pop_back();
    now_ = event.fire_time;
    ++dispatched_;
    if (event.kind == EventKind::MiningComplete) ++mining_dispatched_;
    record(event);
    handler(event);
  }
}

}  // namespace blockprop
