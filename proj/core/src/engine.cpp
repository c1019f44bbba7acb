#include "blockprop/engine.hpp"

#include <string>

namespace blockprop {

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Inv: return "Inv";
    case MessageKind::GetData: return "GetData";
    case MessageKind::FullBlock: return "FullBlock";
    case MessageKind::GetDataCompact: return "GetDataCompact";
    case MessageKind::CompactBlock: return "CompactBlock";
    case MessageKind::GetBlockTxn: return "GetBlockTxn";
    case MessageKind::BlockTxn: return "BlockTxn";
  }
  return "?";
}

EventHandle Engine::schedule(Event event) {
  if (event.fire_time < now_) {
    throw SchedulingError("event scheduled in the past: fire_time=" +
                          std::to_string(event.fire_time) +
                          " now=" + std::to_string(now_));
  }
  event.seq = next_seq_++;
  heap_.push_back(event);
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return EventHandle{event.seq};
}

void Engine::cancel(EventHandle handle) {
  if (handle.seq >= next_seq_) return;
  cancelled_.insert(handle.seq);
  if (cancelled_.size() > 1024 && cancelled_.size() * 2 > heap_.size()) {
    compact();
  }
}

void Engine::discard_cancelled_top() {
  while (!heap_.empty() && !cancelled_.empty()) {
    auto it = cancelled_.find(heap_.front().seq);
    if (it == cancelled_.end()) return;
    cancelled_.erase(it);
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    heap_.pop_back();
  }
}

void Engine::compact() {
  std::erase_if(heap_, [this](const Event& e) {
    return cancelled_.erase(e.seq) > 0;
  });
  // Anything left in the set referred to events no longer pending.
  cancelled_.clear();
  std::make_heap(heap_.begin(), heap_.end(), Later{});
}

void Engine::record(const Event& event) {
  const auto mix = [this](std::uint64_t value, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      trace_hash_ ^= (value >> (8 * i)) & 0xFFu;
      trace_hash_ *= 0x100000001b3ull;
    }
  };
  const auto kind_code = event.kind == EventKind::MiningComplete
                             ? 0xFFu
                             : static_cast<unsigned>(event.message);
  mix(static_cast<std::uint64_t>(event.fire_time), 8);
  mix(event.seq, 8);
  mix(kind_code, 1);
  mix(event.src, 4);
  mix(event.dst, 4);

  if (trace_sink_ != nullptr) {
    *trace_sink_ << event.fire_time << ',' << event.seq << ','
                 << (event.kind == EventKind::MiningComplete
                         ? std::string_view("MiningComplete")
                         : to_string(event.message))
                 << ',' << event.src << ',' << event.dst << '\n';
  }
}

}  // namespace blockprop
