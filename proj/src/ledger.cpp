#include <tbsim/errors.hpp>
#include <tbsim/ledger.hpp>

namespace tbsim {

std::string to_string(AccountStatus status)
{
    switch (status) {
    case AccountStatus::Available: return "available";
    case AccountStatus::Solving: return "solving";
    case AccountStatus::Challenging: return "challenging";
    case AccountStatus::Slashed: return "slashed";
    }
    return "?";
}

std::string to_string(SlashCause cause)
{
    switch (cause) {
    case SlashCause::GuessedRandomness: return "guessed_randomness";
    case SlashCause::InvalidProof: return "invalid_proof";
    case SlashCause::LostGame: return "lost_game";
    case SlashCause::Timeout: return "timeout";
    }
    return "?";
}

std::string to_string(LedgerKind kind)
{
    switch (kind) {
    case LedgerKind::Bond: return "bond";
    case LedgerKind::Slash: return "slash";
    case LedgerKind::Burn: return "burn";
    case LedgerKind::Reward: return "reward";
    case LedgerKind::GuessReward: return "guess_reward";
    case LedgerKind::Escrow: return "escrow";
    case LedgerKind::Refund: return "refund";
    case LedgerKind::Stake: return "stake";
    case LedgerKind::Unstake: return "unstake";
    }
    return "?";
}

Account& Ledger::open_account(const AccountId& id, Amount balance)
{
    if (balance < 0) {
        throw std::invalid_argument("negative opening balance");
    }
    auto [it, inserted] = accounts_.try_emplace(id, Account{id, balance, 0, AccountStatus::Available});
    if (!inserted) {
        throw std::invalid_argument("account " + id + " already exists");
    }
    supply_ += balance;
    return it->second;
}

Account& Ledger::account(const AccountId& id)
{
    auto it = accounts_.find(id);
    if (it == accounts_.end()) {
        throw Error(ErrorCode::UnknownAccount, id);
    }
    return it->second;
}

const Account& Ledger::account(const AccountId& id) const
{
    auto it = accounts_.find(id);
    if (it == accounts_.end()) {
        throw Error(ErrorCode::UnknownAccount, id);
    }
    return it->second;
}

void Ledger::bond(const AccountId& id, Amount amount)
{
    auto& acct = account(id);
    if (amount <= 0 || acct.balance < amount) {
        throw Error(ErrorCode::InsufficientFunds, "cannot bond " + std::to_string(amount) + " from " + id);
    }
    acct.balance -= amount;
    acct.deposit += amount;
    record({LedgerKind::Bond, id, amount, std::nullopt, 0, {}});
}

void Ledger::escrow(const AccountId& id, Amount amount, TaskId task, std::string note)
{
    auto& acct = account(id);
    if (acct.balance < amount) {
        throw Error(ErrorCode::InsufficientFunds,
                    id + " holds " + std::to_string(acct.balance) + ", needs " + std::to_string(amount));
    }
    acct.balance -= amount;
    escrow_ += amount;
    record({LedgerKind::Escrow, id, amount, std::nullopt, task, std::move(note)});
}

void Ledger::refund(const AccountId& id, Amount amount, TaskId task, std::string note)
{
    if (amount == 0) {
        return;
    }
    auto& acct = account(id);
    escrow_ -= amount;
    acct.balance += amount;
    record({LedgerKind::Refund, id, amount, std::nullopt, task, std::move(note)});
}

void Ledger::pay(const AccountId& id, Amount amount, LedgerKind kind, TaskId task, std::string note)
{
    if (amount == 0) {
        return;
    }
    auto& acct = account(id);
    escrow_ -= amount;
    acct.balance += amount;
    record({kind, id, amount, std::nullopt, task, std::move(note)});
}

void Ledger::stake(const AccountId& id, Amount amount, TaskId task, std::string note)
{
    auto& acct = account(id);
    if (acct.balance < amount) {
        throw Error(ErrorCode::InsufficientStake,
                    id + " cannot stake " + std::to_string(amount));
    }
    acct.balance -= amount;
    escrow_ += amount;
    record({LedgerKind::Stake, id, amount, std::nullopt, task, std::move(note)});
}

void Ledger::unstake(const AccountId& id, Amount amount, TaskId task, std::string note)
{
    auto& acct = account(id);
    escrow_ -= amount;
    acct.balance += amount;
    record({LedgerKind::Unstake, id, amount, std::nullopt, task, std::move(note)});
}

Amount Ledger::slash(const AccountId& id, SlashCause cause, TaskId task, std::string note)
{
    auto& acct = account(id);
    Amount amount = acct.deposit;
    acct.deposit = 0;
    acct.status = AccountStatus::Slashed;
    escrow_ += amount;
    record({LedgerKind::Slash, id, amount, cause, task, std::move(note)});
    return amount;
}

void Ledger::burn(Amount amount, TaskId task, std::string note)
{
    if (amount == 0) {
        return;
    }
    escrow_ -= amount;
    burned_ += amount;
    record({LedgerKind::Burn, {}, amount, std::nullopt, task, std::move(note)});
}

Amount Ledger::balances_total() const
{
    Amount total = 0;
    for (const auto& [id, acct] : accounts_) {
        total += acct.balance;
    }
    return total;
}

Amount Ledger::deposits_total() const
{
    Amount total = 0;
    for (const auto& [id, acct] : accounts_) {
        total += acct.deposit;
    }
    return total;
}

bool Ledger::conserved() const
{
    return balances_total() + deposits_total() + escrow_ + burned_ == supply_ && escrow_ >= 0;
}

void Ledger::check_conservation() const
{
    if (!conserved()) {
        throw Error(ErrorCode::InvariantViolation,
                    "supply " + std::to_string(supply_) + " != balances " +
                        std::to_string(balances_total()) + " + deposits " +
                        std::to_string(deposits_total()) + " + escrow " + std::to_string(escrow_) +
                        " + burned " + std::to_string(burned_));
    }
}

void Ledger::record(LedgerEvent ev)
{
    if (log_) {
        nlohmann::json j{{"kind", to_string(ev.kind)}, {"amount", ev.amount}, {"task", ev.task}};
        if (!ev.account.empty()) {
            j["account"] = ev.account;
        }
        if (ev.cause) {
            j["cause"] = to_string(*ev.cause);
        }
        if (!ev.note.empty()) {
            j["note"] = ev.note;
        }
        log_->append(round_, "ledger", std::move(j));
    }
    events_.push_back(std::move(ev));
}

}  // namespace tbsim
