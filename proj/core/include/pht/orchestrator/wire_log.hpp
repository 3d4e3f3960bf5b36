#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace pht::orch {

// Orchestrator <-> station message contract. Transport is in-process; the
// wire form of every message is still produced and appended to the wire
// log so the data-locality invariant can be checked against real bytes.
enum class MessageType : std::uint8_t {
    PullTrain = 1,
    ExecuteTrain = 2,
    TrainResult = 3,
    Broadcast = 4,
    ReplicaResult = 5,
};

const char* message_type_name(MessageType type);

// Record layout: u8 type, varint run_id length + bytes, varint seq,
// varint payload length + payload.
class WireLog {
public:
    void append(MessageType type, const std::string& run_id, std::uint64_t seq,
                std::span<const std::uint8_t> payload);

    std::vector<std::uint8_t> bytes() const;
    std::size_t message_count() const;
    void write_file(const std::filesystem::path& path) const;

    struct Message {
        MessageType type;
        std::string run_id;
        std::uint64_t seq;
        std::vector<std::uint8_t> payload;
    };
    // Decodes the log back into messages (used by tests and tooling).
    static std::vector<Message> parse(std::span<const std::uint8_t> bytes);

private:
    mutable std::mutex mutex_;
    std::vector<std::uint8_t> bytes_;
    std::size_t count_ = 0;
};

} // namespace pht::orch
