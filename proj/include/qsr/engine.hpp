#ifndef QSR_ENGINE_HPP
#define QSR_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qsr/domains.hpp"

namespace qsr {

using VarId = std::uint32_t;
using SetVarId = std::uint32_t;
using ConstraintId = std::uint32_t;

enum class PropagateResult { Fixpoint, Failure };

enum class VarOrder { SmallestDomain, InputOrder };
enum class ValueOrder { Ascending };

/// One full assignment: a value index per finite variable and a bound set
/// (bitmask) per set variable.
struct Solution {
    std::vector<int> values;
    std::vector<std::uint16_t> set_values;
};

class Store;

class Constraint {
public:
    virtual ~Constraint() = default;
    /// Prune domains to the constraint's consistency level. False = wipeout.
    virtual bool propagate(Store& s) = 0;
    virtual bool satisfied_by(const Store& s, const Solution& sol) const = 0;
};

/// Finite-domain constraint store: variables, extensional constraints, a
/// fixpoint propagation loop and depth-first search with trailing.
///
/// Single-threaded; distinct stores are independent.
class Store {
public:
    // -- variables ---------------------------------------------------------

    /// Registers a variable with the given non-empty initial domain.
    VarId new_var(const FiniteDomain& dom);
    /// Set variable with free bounds over 0..universe_size-1 (<= 16).
    SetVarId new_set_var(int universe_size);

    std::size_t num_vars() const { return doms_.size(); }
    std::size_t num_set_vars() const { return sdoms_.size(); }
    std::size_t num_constraints() const { return cons_.size(); }

    const FiniteDomain& domain(VarId x) const { return doms_[x]; }
    const SetDomain& set_domain(SetVarId s) const { return sdoms_[s]; }

    // -- constraints -------------------------------------------------------

    /// Extensional constraint: the scoped variables must jointly take one of
    /// the listed value-index tuples. Arity 1..5.
    ConstraintId post_table(std::vector<VarId> scope,
                            std::vector<std::vector<int>> tuples);

    /// required: element joins the lower bound; otherwise it leaves the
    /// upper bound. A contradiction surfaces as Failure at propagation.
    ConstraintId post_set_membership(SetVarId var, int element, bool required);

    /// Channels a set variable to an enum variable whose value i means
    /// "the set equals valid_sets[i]". Bound-consistent both ways.
    ConstraintId channel_set_to_enum(SetVarId set_var, VarId enum_var,
                                     std::vector<std::uint16_t> valid_sets);

    /// Array constraint: the cell selected by the index variables takes a
    /// value in target. cells is a row-major d-dimensional array with the
    /// given extents. Propagation is the hybrid index/cell rule, weaker
    /// than GAC over the conjunction.
    ConstraintId post_array_constraint(std::vector<VarId> index_vars,
                                       std::vector<int> dims,
                                       std::vector<VarId> cells, Bits target);

    // -- propagation and search --------------------------------------------

    /// Runs the revision queue to fixpoint. On Fixpoint every table
    /// constraint is generalised arc-consistent; on Failure some domain
    /// (or set bound pair) is empty. Domains only ever shrink.
    PropagateResult propagate();

    std::optional<Solution> solve(VarOrder vo = VarOrder::SmallestDomain,
                                  ValueOrder lo = ValueOrder::Ascending);

    /// Enumerates all solutions; stops early when the callback returns
    /// false. Returns the number of solutions delivered.
    long solve_all(const std::function<bool(const Solution&)>& on_solution,
                   VarOrder vo = VarOrder::SmallestDomain,
                   ValueOrder lo = ValueOrder::Ascending);

    /// Randomises which pending constraint the propagation loop revises
    /// next. Fixpoints are order-independent; used by the confluence tests.
    void set_shuffle_seed(std::optional<std::uint64_t> seed);

    // -- pruning API (used by constraints) -----------------------------------

    bool intersect_domain(VarId x, const Bits& keep);
    bool remove_value(VarId x, int v);
    bool assign_value(VarId x, int v);
    bool set_require(SetVarId s, int element);
    bool set_forbid(SetVarId s, int element);

    // -- introspection -------------------------------------------------------

    /// Supporting tuple of a table constraint for (position, value) under
    /// the current domains, if any. Test hook for the GAC certificate.
    std::optional<std::vector<int>> table_support(ConstraintId c, int position,
                                                  int value) const;

    bool satisfied_by(const Solution& sol) const;

    // trail handle, exposed for search layered on top of the store
    std::size_t trail_mark() const { return trail_.size(); }
    void undo_to(std::size_t mark);

private:
    friend class TableConstraint;
    friend class SetMembershipConstraint;
    friend class ChannelSetEnumConstraint;
    friend class ArrayConstraint;

    struct Saved {
        std::int32_t idx;
        bool is_set;
        FiniteDomain fd;
        SetDomain sd;
    };

    ConstraintId add_constraint(std::unique_ptr<Constraint> c,
                                const std::vector<VarId>& watch_vars,
                                const std::vector<SetVarId>& watch_set_vars);
    void enqueue(ConstraintId c);
    void wake_var(VarId x);
    void wake_set_var(SetVarId s);
    void save_var(VarId x);
    void save_set_var(SetVarId s);
    void clear_queue();
    void requeue_all();

    bool dfs(long& delivered,
             const std::function<bool(const Solution&)>& on_solution,
             bool stop_after_first, VarOrder vo, bool& aborted);
    Solution extract_solution() const;

    std::vector<FiniteDomain> doms_;
    std::vector<SetDomain> sdoms_;
    std::vector<std::unique_ptr<Constraint>> cons_;
    std::vector<std::vector<ConstraintId>> var_watch_;
    std::vector<std::vector<ConstraintId>> svar_watch_;

    std::vector<ConstraintId> queue_;
    std::size_t qhead_ = 0;
    std::vector<std::uint8_t> in_queue_;

    std::vector<Saved> trail_;

    bool shuffle_ = false;
    std::uint64_t shuffle_state_ = 0;
};

} // namespace qsr

#endif
