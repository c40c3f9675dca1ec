#pragma once

// Checkpoint/resume for long scans: canonical JSON files carrying the stream
// state and integer accumulator vectors. Accumulators are integers so a
// resumed run is bit-identical to an uninterrupted one.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepfn/sobol.hpp"

namespace sepfn {

inline constexpr int kCheckpointSchemaVersion = 1;

/// FNV-1a over the canonical parameter string; used to refuse resuming a
/// checkpoint after any parameter change.
inline std::uint64_t fingerprint(const std::string& params) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : params) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct Checkpoint {
    int schema_version = kCheckpointSchemaVersion;
    std::uint64_t command_fingerprint = 0;
    // stream state
    StreamKind kind = StreamKind::low_discrepancy;
    int dim = 1;
    std::uint64_t key = 0;
    std::uint64_t next_index = 0;
    // accumulators: integer counts per grid cell (layout owned by the caller)
    std::vector<std::int64_t> accumulators;
    std::string written_at;  // wall-clock metadata, ignored on restore

    static std::string now_string() {
        auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        return buf;
    }
};

inline Checkpoint make_checkpoint(const LdsStream& stream,
                                  const std::vector<std::int64_t>& accumulators,
                                  std::uint64_t command_fingerprint) {
    Checkpoint c;
    c.command_fingerprint = command_fingerprint;
    c.kind = stream.kind();
    c.dim = stream.dim();
    c.key = stream.key();
    c.next_index = stream.next_index();
    c.accumulators = accumulators;
    c.written_at = Checkpoint::now_string();
    return c;
}

inline nlohmann::json to_json(const Checkpoint& c) {
    nlohmann::json j;
    j["schema_version"] = c.schema_version;
    j["command_fingerprint"] = c.command_fingerprint;
    j["stream"] = {
        {"kind", c.kind == StreamKind::low_discrepancy ? "low_discrepancy" : "pseudo_random"},
        {"dim", c.dim},
        {"key", c.key},
        {"next_index", c.next_index}};
    j["accumulators"] = c.accumulators;
    j["written_at"] = c.written_at;
    return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    Checkpoint c;
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != kCheckpointSchemaVersion)
        throw std::runtime_error("checkpoint: unsupported schema_version");
    c.command_fingerprint = j.at("command_fingerprint").get<std::uint64_t>();
    const auto& s = j.at("stream");
    std::string kind = s.at("kind").get<std::string>();
    if (kind == "low_discrepancy")
        c.kind = StreamKind::low_discrepancy;
    else if (kind == "pseudo_random")
        c.kind = StreamKind::pseudo_random;
    else
        throw std::runtime_error("checkpoint: unknown stream kind");
    c.dim = s.at("dim").get<int>();
    c.key = s.at("key").get<std::uint64_t>();
    c.next_index = s.at("next_index").get<std::uint64_t>();
    c.accumulators = j.at("accumulators").get<std::vector<std::int64_t>>();
    c.written_at = j.value("written_at", "");
    return c;
}

/// Canonical serialization: nlohmann keeps object keys sorted, so the byte
/// stream depends only on the field values.
inline std::string serialize_checkpoint(const Checkpoint& c) { return to_json(c).dump(2) + "\n"; }

inline void save_checkpoint(const Checkpoint& c, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
    f << serialize_checkpoint(c);
    if (!f) throw std::runtime_error("checkpoint: write failed: " + path);
}

/// Load and validate against the expected command fingerprint.
inline Checkpoint load_checkpoint(const std::string& path, std::uint64_t expected_fingerprint) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
    nlohmann::json j;
    f >> j;
    Checkpoint c = checkpoint_from_json(j);
    if (c.command_fingerprint != expected_fingerprint)
        throw std::runtime_error("checkpoint: command fingerprint mismatch, refusing to resume");
    return c;
}

/// Rebuild the stream a checkpoint describes, positioned at its saved index.
inline LdsStream restore_stream(const Checkpoint& c) {
    return LdsStream(c.kind, c.dim, c.key, c.next_index);
}

}  // namespace sepfn
