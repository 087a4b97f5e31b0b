#pragma once

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace tbsim {

/// Append-only event log. Each record gets a monotonically increasing `seq`
/// and the round it happened in; serialized one JSON object per line.
class EventLog {
public:
    void append(std::uint64_t round, std::string type, nlohmann::json payload);

    const std::vector<nlohmann::json>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }

    void write_jsonl(std::ostream& out) const;
    std::string to_jsonl() const;

private:
    std::vector<nlohmann::json> records_;
};

}  // namespace tbsim
