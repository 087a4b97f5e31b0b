#pragma once

#include <tbsim/events.hpp>
#include <tbsim/game.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tbsim {

using Amount = std::int64_t;
using TaskId = std::uint64_t;

enum class AccountStatus { Available, Solving, Challenging, Slashed };

/// The only four reasons a deposit is ever slashed.
enum class SlashCause { GuessedRandomness, InvalidProof, LostGame, Timeout };

enum class LedgerKind { Bond, Slash, Burn, Reward, GuessReward, Escrow, Refund, Stake, Unstake };

struct Account {
    AccountId id;
    Amount balance = 0;
    Amount deposit = 0;
    AccountStatus status = AccountStatus::Available;

    bool bonded() const noexcept { return deposit > 0; }
};

struct LedgerEvent {
    LedgerKind kind;
    AccountId account;
    Amount amount = 0;
    std::optional<SlashCause> cause;
    TaskId task = 0;
    std::string note;

    friend bool operator==(const LedgerEvent&, const LedgerEvent&) = default;
};

std::string to_string(AccountStatus status);
std::string to_string(SlashCause cause);
std::string to_string(LedgerKind kind);

/// Token accounting. Funds live in exactly one of: account balances, bonded
/// deposits, contract escrow, or the burned pile; every transfer moves value
/// between these so their sum is constant.
class Ledger {
public:
    explicit Ledger(EventLog* log = nullptr) : log_(log) {}

    void set_log(EventLog* log) { log_ = log; }
    void set_round(std::uint64_t round) { round_ = round; }

    Account& open_account(const AccountId& id, Amount balance);
    bool contains(const AccountId& id) const { return accounts_.count(id) != 0; }
    Account& account(const AccountId& id);
    const Account& account(const AccountId& id) const;
    const std::map<AccountId, Account>& accounts() const noexcept { return accounts_; }

    void bond(const AccountId& id, Amount amount);
    /// balance -> escrow on behalf of a task
    void escrow(const AccountId& id, Amount amount, TaskId task, std::string note = {});
    /// escrow -> balance
    void refund(const AccountId& id, Amount amount, TaskId task, std::string note = {});
    /// escrow -> balance, recorded as a reward of `kind`
    void pay(const AccountId& id, Amount amount, LedgerKind kind, TaskId task, std::string note = {});
    /// balance -> escrow as a refundable stake
    void stake(const AccountId& id, Amount amount, TaskId task, std::string note = {});
    void unstake(const AccountId& id, Amount amount, TaskId task, std::string note = {});
    /// Entire deposit -> escrow; the account is permanently slashed.
    Amount slash(const AccountId& id, SlashCause cause, TaskId task, std::string note = {});
    /// escrow -> burned
    void burn(Amount amount, TaskId task, std::string note = {});

    Amount escrow_total() const noexcept { return escrow_; }
    Amount burned() const noexcept { return burned_; }
    Amount initial_supply() const noexcept { return supply_; }
    Amount balances_total() const;
    Amount deposits_total() const;
    bool conserved() const;
    /// Throws InvariantViolation when value has been created or destroyed.
    void check_conservation() const;

    const std::vector<LedgerEvent>& events() const noexcept { return events_; }

private:
    void record(LedgerEvent ev);

    std::map<AccountId, Account> accounts_;
    Amount escrow_ = 0;
    Amount burned_ = 0;
    Amount supply_ = 0;
    std::uint64_t round_ = 0;
    EventLog* log_ = nullptr;
    std::vector<LedgerEvent> events_;
};

}  // namespace tbsim
