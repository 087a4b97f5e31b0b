#include <tbsim/events.hpp>

#include <sstream>

namespace tbsim {

void EventLog::append(std::uint64_t round, std::string type, nlohmann::json payload)
{
    nlohmann::json rec = std::move(payload);
    rec["seq"] = records_.size();
    rec["round"] = round;
    rec["type"] = std::move(type);
    records_.push_back(std::move(rec));
}

void EventLog::write_jsonl(std::ostream& out) const
{
    for (const auto& rec : records_) {
        out << rec.dump() << '\n';
    }
}

std::string EventLog::to_jsonl() const
{
    std::ostringstream out;
    write_jsonl(out);
    return out.str();
}

}  // namespace tbsim
