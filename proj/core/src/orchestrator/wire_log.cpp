#include "pht/orchestrator/wire_log.hpp"

#include <fstream>

#include "pht/common/binio.hpp"

namespace pht::orch {

const char* message_type_name(MessageType type) {
    switch (type) {
        case MessageType::PullTrain: return "PullTrain";
        case MessageType::ExecuteTrain: return "ExecuteTrain";
        case MessageType::TrainResult: return "TrainResult";
        case MessageType::Broadcast: return "Broadcast";
        case MessageType::ReplicaResult: return "ReplicaResult";
    }
    return "Unknown";
}

void WireLog::append(MessageType type, const std::string& run_id, std::uint64_t seq,
                     std::span<const std::uint8_t> payload) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(type));
    w.str(run_id);
    w.varint(seq);
    w.varint(payload.size());
    w.raw(payload);
    std::lock_guard lock(mutex_);
    const auto& record = w.bytes();
    bytes_.insert(bytes_.end(), record.begin(), record.end());
    ++count_;
}

std::vector<std::uint8_t> WireLog::bytes() const {
    std::lock_guard lock(mutex_);
    return bytes_;
}

std::size_t WireLog::message_count() const {
    std::lock_guard lock(mutex_);
    return count_;
}

void WireLog::write_file(const std::filesystem::path& path) const {
    std::lock_guard lock(mutex_);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write wire log: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes_.data()),
              static_cast<std::streamsize>(bytes_.size()));
}

std::vector<WireLog::Message> WireLog::parse(std::span<const std::uint8_t> bytes) {
    std::vector<Message> out;
    ByteReader r(bytes);
    while (!r.done()) {
        Message m;
        m.type = static_cast<MessageType>(r.u8());
        m.run_id = r.str();
        m.seq = r.varint();
        const std::uint64_t len = r.varint();
        m.payload = r.raw(len);
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace pht::orch
