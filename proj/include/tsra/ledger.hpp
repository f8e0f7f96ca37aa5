#pragma once

#include "tsra/instance.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace tsra {

// Tolerance absorbing float noise in repeated debits; a cost within this of
// the remaining budget still counts as affordable.
inline constexpr double kLedgerTol = 1e-9;

// Remaining-budget vector shared by both phases. Debits keep every component
// non-negative or throw; nothing in the toolkit may drive a budget below 0.
class BudgetLedger {
  public:
    explicit BudgetLedger(Eigen::VectorXd initial) : remaining_(std::move(initial)) {
        if ((remaining_.array() < 0.0).any())
            throw std::invalid_argument("ledger: negative initial budget");
    }

    const Eigen::VectorXd& remaining() const { return remaining_; }

    bool is_safe(const EdgeSpec& edge) const {
        for (const CostEntry& c : edge.cost)
            if (c.amount > remaining_[c.resource] + kLedgerTol) return false;
        return true;
    }

    void debit(const EdgeSpec& edge) {
        if (!is_safe(edge)) throw std::logic_error("ledger: debit would overdraw a budget");
        for (const CostEntry& c : edge.cost)
            remaining_[c.resource] = std::max(remaining_[c.resource] - c.amount, 0.0);
    }

    void debit(const Eigen::VectorXd& amount) {
        if (amount.size() != remaining_.size())
            throw std::invalid_argument("ledger: debit vector size mismatch");
        if ((amount.array() > remaining_.array() + kLedgerTol).any())
            throw std::logic_error("ledger: debit would overdraw a budget");
        remaining_ = (remaining_ - amount).cwiseMax(0.0);
    }

  private:
    Eigen::VectorXd remaining_;
};

inline bool is_safe(const BudgetLedger& ledger, const EdgeSpec& edge) {
    return ledger.is_safe(edge);
}

}  // namespace tsra
