#include "qsr/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsr {

namespace {

// splitmix64; portable across standard libraries, unlike the stdlib
// distributions.
std::uint64_t next_rand(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

// ---------------------------------------------------------------------------
// constraints
// ---------------------------------------------------------------------------

class TableConstraint : public Constraint {
public:
    TableConstraint(std::vector<VarId> scope, int arity,
                    std::vector<std::uint16_t> tuples_flat)
        : scope_(std::move(scope)), arity_(arity),
          tuples_(std::move(tuples_flat)) {
        residue_.resize(arity_);
        for (auto& r : residue_) r.assign(Bits::kMaxBits, -1);
    }

    std::size_t tuple_count() const { return tuples_.size() / arity_; }

    bool tuple_alive(const Store& s, std::size_t t) const {
        const std::uint16_t* tp = &tuples_[t * arity_];
        for (int p = 0; p < arity_; ++p)
            if (!s.domain(scope_[p]).bits.test(tp[p])) return false;
        return true;
    }

    // Residue scheme: remember the last support found per (position, value);
    // a stale residue is simply re-checked against the current domains.
    int find_support(const Store& s, int pos, int value) const {
        int r = residue_[pos][value];
        if (r >= 0 && tuples_[static_cast<std::size_t>(r) * arity_ + pos] == value &&
            tuple_alive(s, r))
            return r;
        const std::size_t n = tuple_count();
        for (std::size_t t = 0; t < n; ++t) {
            if (tuples_[t * arity_ + pos] != value) continue;
            if (tuple_alive(s, t)) return static_cast<int>(t);
        }
        return -1;
    }

    bool propagate(Store& s) override {
        for (int p = 0; p < arity_; ++p) {
            Bits keep;
            const Bits dom = s.domain(scope_[p]).bits;
            for (int v : dom) {
                int t = find_support(s, p, v);
                if (t >= 0) {
                    residue_[p][v] = t;
                    keep.set(v);
                }
            }
            if (!s.intersect_domain(scope_[p], keep)) return false;
        }
        return true;
    }

    bool satisfied_by(const Store&, const Solution& sol) const override {
        const std::size_t n = tuple_count();
        for (std::size_t t = 0; t < n; ++t) {
            bool match = true;
            for (int p = 0; p < arity_; ++p)
                if (sol.values[scope_[p]] != tuples_[t * arity_ + p]) {
                    match = false;
                    break;
                }
            if (match) return true;
        }
        return false;
    }

    std::optional<std::vector<int>> support_tuple(const Store& s, int pos,
                                                  int value) const {
        if (pos < 0 || pos >= arity_) return std::nullopt;
        int t = find_support(s, pos, value);
        if (t < 0) return std::nullopt;
        std::vector<int> out(arity_);
        for (int p = 0; p < arity_; ++p)
            out[p] = tuples_[static_cast<std::size_t>(t) * arity_ + p];
        return out;
    }

private:
    std::vector<VarId> scope_;
    int arity_;
    std::vector<std::uint16_t> tuples_;
    mutable std::vector<std::vector<int>> residue_;
};

class SetMembershipConstraint : public Constraint {
public:
    SetMembershipConstraint(SetVarId var, int element, bool required)
        : var_(var), element_(element), required_(required) {}

    bool propagate(Store& s) override {
        return required_ ? s.set_require(var_, element_)
                         : s.set_forbid(var_, element_);
    }

    bool satisfied_by(const Store&, const Solution& sol) const override {
        bool in = (sol.set_values[var_] >> element_) & 1;
        return required_ == in;
    }

private:
    SetVarId var_;
    int element_;
    bool required_;
};

class ChannelSetEnumConstraint : public Constraint {
public:
    ChannelSetEnumConstraint(SetVarId sv, VarId ev,
                             std::vector<std::uint16_t> valid_sets)
        : sv_(sv), ev_(ev), sets_(std::move(valid_sets)) {}

    bool propagate(Store& s) override {
        const SetDomain& sd = s.set_domain(sv_);
        Bits keep;
        std::uint16_t inter = 0xffff, uni = 0;
        for (int i : s.domain(ev_).bits) {
            std::uint16_t vs = sets_[i];
            if ((sd.lower & ~vs) || (vs & ~sd.upper)) continue; // incompatible
            keep.set(i);
            inter &= vs;
            uni |= vs;
        }
        if (keep.empty()) return false;
        if (!s.intersect_domain(ev_, keep)) return false;
        for (int e = 0; e < s.set_domain(sv_).universe; ++e) {
            std::uint16_t bit = static_cast<std::uint16_t>(1u << e);
            if ((inter & bit) && !s.set_require(sv_, e)) return false;
            if (!(uni & bit) && !s.set_forbid(sv_, e)) return false;
        }
        return true;
    }

    bool satisfied_by(const Store&, const Solution& sol) const override {
        int i = sol.values[ev_];
        return sets_[i] == sol.set_values[sv_];
    }

private:
    SetVarId sv_;
    VarId ev_;
    std::vector<std::uint16_t> sets_;
};

class ArrayConstraint : public Constraint {
public:
    ArrayConstraint(std::vector<VarId> index_vars, std::vector<int> dims,
                    std::vector<VarId> cells, Bits target)
        : idx_(std::move(index_vars)), dims_(std::move(dims)),
          cells_(std::move(cells)), target_(target) {}

    bool propagate(Store& s) override {
        const int d = static_cast<int>(idx_.size());
        std::vector<int> pick(d, -1);
        for (int k = 0; k < d; ++k) {
            Bits keep;
            for (int v : s.domain(idx_[k]).bits) {
                pick[k] = v;
                if (has_live_cell(s, pick, 0, k)) keep.set(v);
            }
            pick[k] = -1;
            if (!s.intersect_domain(idx_[k], keep)) return false;
        }
        // all indices bound: restrict the selected cell
        std::vector<int> at(d);
        for (int k = 0; k < d; ++k) {
            const FiniteDomain& dom = s.domain(idx_[k]);
            if (!dom.bound()) return true;
            at[k] = dom.value();
        }
        return s.intersect_domain(cells_[flat(at)], target_);
    }

    bool satisfied_by(const Store&, const Solution& sol) const override {
        std::vector<int> at(idx_.size());
        for (std::size_t k = 0; k < idx_.size(); ++k) at[k] = sol.values[idx_[k]];
        return target_.test(sol.values[cells_[flat(at)]]);
    }

    const std::vector<VarId>& cells() const { return cells_; }

private:
    std::size_t flat(const std::vector<int>& at) const {
        std::size_t f = 0;
        for (std::size_t k = 0; k < dims_.size(); ++k)
            f = f * dims_[k] + at[k];
        return f;
    }

    // Does some assignment of the index variables other than `fixed_pos`
    // (whose value pick[fixed_pos] is set) select a cell whose domain meets
    // the target?
    bool has_live_cell(const Store& s, std::vector<int>& pick, int k,
                       int fixed_pos) const {
        if (k == static_cast<int>(idx_.size())) {
            const FiniteDomain& cd = s.domain(cells_[flat(pick)]);
            return !(cd.bits & target_).empty();
        }
        if (k == fixed_pos) return has_live_cell(s, pick, k + 1, fixed_pos);
        for (int v : s.domain(idx_[k]).bits) {
            pick[k] = v;
            if (has_live_cell(s, pick, k + 1, fixed_pos)) return true;
        }
        pick[k] = -1;
        return false;
    }

    std::vector<VarId> idx_;
    std::vector<int> dims_;
    std::vector<VarId> cells_;
    Bits target_;
};

// ---------------------------------------------------------------------------
// store
// ---------------------------------------------------------------------------

VarId Store::new_var(const FiniteDomain& dom) {
    if (dom.universe <= 0 || dom.universe > Bits::kMaxBits)
        throw std::invalid_argument("new_var: universe size out of range");
    if (dom.empty())
        throw std::invalid_argument("new_var: empty initial domain");
    if (!dom.bits.is_subset_of(Bits::full(dom.universe)))
        throw std::invalid_argument("new_var: domain exceeds universe");
    doms_.push_back(dom);
    var_watch_.emplace_back();
    return static_cast<VarId>(doms_.size() - 1);
}

SetVarId Store::new_set_var(int universe_size) {
    if (universe_size <= 0 || universe_size > 16)
        throw std::invalid_argument("new_set_var: universe size out of range");
    sdoms_.push_back(SetDomain::free(universe_size));
    svar_watch_.emplace_back();
    return static_cast<SetVarId>(sdoms_.size() - 1);
}

ConstraintId Store::add_constraint(std::unique_ptr<Constraint> c,
                                   const std::vector<VarId>& watch_vars,
                                   const std::vector<SetVarId>& watch_set_vars) {
    cons_.push_back(std::move(c));
    in_queue_.push_back(0);
    ConstraintId id = static_cast<ConstraintId>(cons_.size() - 1);
    for (VarId x : watch_vars) var_watch_[x].push_back(id);
    for (SetVarId s : watch_set_vars) svar_watch_[s].push_back(id);
    enqueue(id);
    return id;
}

ConstraintId Store::post_table(std::vector<VarId> scope,
                               std::vector<std::vector<int>> tuples) {
    if (scope.empty() || scope.size() > 5)
        throw std::invalid_argument("post_table: arity must be 1..5");
    for (VarId x : scope)
        if (x >= doms_.size())
            throw std::invalid_argument("post_table: unknown variable");
    const int arity = static_cast<int>(scope.size());
    std::vector<std::uint16_t> flat;
    flat.reserve(tuples.size() * arity);
    for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != arity)
            throw std::invalid_argument("post_table: tuple arity mismatch");
        for (int p = 0; p < arity; ++p) {
            if (t[p] < 0 || t[p] >= doms_[scope[p]].universe)
                throw std::invalid_argument("post_table: tuple value outside universe");
            flat.push_back(static_cast<std::uint16_t>(t[p]));
        }
    }
    auto watch = scope;
    return add_constraint(
        std::make_unique<TableConstraint>(std::move(scope), arity, std::move(flat)),
        watch, {});
}

ConstraintId Store::post_set_membership(SetVarId var, int element, bool required) {
    if (var >= sdoms_.size())
        throw std::invalid_argument("post_set_membership: unknown set variable");
    if (element < 0 || element >= sdoms_[var].universe)
        throw std::invalid_argument("post_set_membership: element outside universe");
    return add_constraint(
        std::make_unique<SetMembershipConstraint>(var, element, required), {},
        {var});
}

ConstraintId Store::channel_set_to_enum(SetVarId set_var, VarId enum_var,
                                        std::vector<std::uint16_t> valid_sets) {
    if (set_var >= sdoms_.size() || enum_var >= doms_.size())
        throw std::invalid_argument("channel_set_to_enum: unknown variable");
    if (static_cast<int>(valid_sets.size()) != doms_[enum_var].universe)
        throw std::invalid_argument(
            "channel_set_to_enum: enum universe must match valid_sets size");
    std::uint16_t umask = static_cast<std::uint16_t>(
        (1u << sdoms_[set_var].universe) - 1);
    for (std::size_t i = 0; i < valid_sets.size(); ++i) {
        if (valid_sets[i] & ~umask)
            throw std::invalid_argument("channel_set_to_enum: set outside universe");
        for (std::size_t j = i + 1; j < valid_sets.size(); ++j)
            if (valid_sets[i] == valid_sets[j])
                throw std::invalid_argument("channel_set_to_enum: duplicate set");
    }
    return add_constraint(std::make_unique<ChannelSetEnumConstraint>(
                              set_var, enum_var, std::move(valid_sets)),
                          {enum_var}, {set_var});
}

ConstraintId Store::post_array_constraint(std::vector<VarId> index_vars,
                                          std::vector<int> dims,
                                          std::vector<VarId> cells, Bits target) {
    if (index_vars.empty() || index_vars.size() != dims.size())
        throw std::invalid_argument("post_array_constraint: dimension mismatch");
    std::size_t expect = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (dims[k] <= 0)
            throw std::invalid_argument("post_array_constraint: bad extent");
        expect *= static_cast<std::size_t>(dims[k]);
        if (index_vars[k] >= doms_.size())
            throw std::invalid_argument("post_array_constraint: unknown index variable");
        if (doms_[index_vars[k]].universe > dims[k])
            throw std::invalid_argument(
                "post_array_constraint: index domain exceeds array bound");
    }
    if (cells.size() != expect)
        throw std::invalid_argument("post_array_constraint: dimension mismatch");
    for (VarId c : cells)
        if (c >= doms_.size())
            throw std::invalid_argument("post_array_constraint: unknown cell variable");
    auto watch = index_vars;
    watch.insert(watch.end(), cells.begin(), cells.end());
    return add_constraint(std::make_unique<ArrayConstraint>(
                              std::move(index_vars), std::move(dims),
                              std::move(cells), target),
                          watch, {});
}

// ---------------------------------------------------------------------------
// pruning primitives
// ---------------------------------------------------------------------------

void Store::save_var(VarId x) {
    trail_.push_back({static_cast<std::int32_t>(x), false, doms_[x], {}});
}

void Store::save_set_var(SetVarId s) {
    trail_.push_back({static_cast<std::int32_t>(s), true, {}, sdoms_[s]});
}

void Store::undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
        const Saved& e = trail_.back();
        if (e.is_set)
            sdoms_[e.idx] = e.sd;
        else
            doms_[e.idx] = e.fd;
        trail_.pop_back();
    }
}

bool Store::intersect_domain(VarId x, const Bits& keep) {
    FiniteDomain& d = doms_[x];
    Bits nb = d.bits & keep;
    if (nb == d.bits) return true;
    save_var(x);
    d.bits = nb;
    wake_var(x);
    return !nb.empty();
}

bool Store::remove_value(VarId x, int v) {
    Bits keep = doms_[x].bits;
    keep.reset(v);
    return intersect_domain(x, keep);
}

bool Store::assign_value(VarId x, int v) {
    return intersect_domain(x, Bits::single(v));
}

bool Store::set_require(SetVarId s, int element) {
    SetDomain& d = sdoms_[s];
    std::uint16_t bit = static_cast<std::uint16_t>(1u << element);
    if (d.lower & bit) return d.valid();
    save_set_var(s);
    d.lower |= bit;
    wake_set_var(s);
    return d.valid();
}

bool Store::set_forbid(SetVarId s, int element) {
    SetDomain& d = sdoms_[s];
    std::uint16_t bit = static_cast<std::uint16_t>(1u << element);
    if (!(d.upper & bit)) return d.valid();
    save_set_var(s);
    d.upper &= static_cast<std::uint16_t>(~bit);
    wake_set_var(s);
    return d.valid();
}

// ---------------------------------------------------------------------------
// propagation loop
// ---------------------------------------------------------------------------

void Store::enqueue(ConstraintId c) {
    if (in_queue_[c]) return;
    in_queue_[c] = 1;
    queue_.push_back(c);
}

void Store::wake_var(VarId x) {
    for (ConstraintId c : var_watch_[x]) enqueue(c);
}

void Store::wake_set_var(SetVarId s) {
    for (ConstraintId c : svar_watch_[s]) enqueue(c);
}

void Store::clear_queue() {
    for (ConstraintId c : queue_) in_queue_[c] = 0;
    queue_.clear();
    qhead_ = 0;
}

void Store::set_shuffle_seed(std::optional<std::uint64_t> seed) {
    shuffle_ = seed.has_value();
    shuffle_state_ = seed.value_or(0);
}

PropagateResult Store::propagate() {
    while (qhead_ < queue_.size()) {
        if (shuffle_) {
            std::size_t span = queue_.size() - qhead_;
            std::size_t pick = qhead_ + next_rand(shuffle_state_) % span;
            std::swap(queue_[qhead_], queue_[pick]);
        }
        ConstraintId c = queue_[qhead_++];
        in_queue_[c] = 0;
        if (!cons_[c]->propagate(*this)) {
            clear_queue();
            return PropagateResult::Failure;
        }
        if (qhead_ > 1024 && qhead_ * 2 > queue_.size()) {
            queue_.erase(queue_.begin(), queue_.begin() + qhead_);
            qhead_ = 0;
        }
    }
    queue_.clear();
    qhead_ = 0;
    return PropagateResult::Fixpoint;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

Solution Store::extract_solution() const {
    Solution sol;
    sol.values.reserve(doms_.size());
    for (const auto& d : doms_) sol.values.push_back(d.value());
    sol.set_values.reserve(sdoms_.size());
    for (const auto& d : sdoms_) sol.set_values.push_back(d.lower);
    return sol;
}

bool Store::satisfied_by(const Solution& sol) const {
    for (const auto& c : cons_)
        if (!c->satisfied_by(*this, sol)) return false;
    return true;
}

// Chronological DFS. Returns false when the callback asked to stop.
bool Store::dfs(long& delivered,
                const std::function<bool(const Solution&)>& on_solution,
                bool stop_after_first, VarOrder vo, bool& aborted) {
    // variable selection
    int best = -1;
    int best_size = 0;
    if (vo == VarOrder::SmallestDomain) {
        for (std::size_t x = 0; x < doms_.size(); ++x) {
            int sz = doms_[x].size();
            if (sz > 1 && (best < 0 || sz < best_size)) {
                best = static_cast<int>(x);
                best_size = sz;
            }
        }
    } else {
        for (std::size_t x = 0; x < doms_.size(); ++x)
            if (doms_[x].size() > 1) {
                best = static_cast<int>(x);
                break;
            }
    }
    if (best >= 0) {
        Bits vals = doms_[best].bits;
        for (int v : vals) {
            std::size_t mark = trail_.size();
            bool ok = assign_value(static_cast<VarId>(best), v) &&
                      propagate() == PropagateResult::Fixpoint;
            if (ok && !dfs(delivered, on_solution, stop_after_first, vo, aborted))
                return false;
            undo_to(mark);
            if (aborted) return false;
        }
        return true;
    }
    // finite variables all bound; branch undecided set variables
    for (std::size_t s = 0; s < sdoms_.size(); ++s) {
        if (sdoms_[s].bound()) continue;
        std::uint16_t und = static_cast<std::uint16_t>(sdoms_[s].upper & ~sdoms_[s].lower);
        int e = std::countr_zero(static_cast<unsigned>(und));
        for (bool required : {true, false}) {
            std::size_t mark = trail_.size();
            bool ok = (required ? set_require(static_cast<SetVarId>(s), e)
                                : set_forbid(static_cast<SetVarId>(s), e)) &&
                      propagate() == PropagateResult::Fixpoint;
            if (ok && !dfs(delivered, on_solution, stop_after_first, vo, aborted))
                return false;
            undo_to(mark);
            if (aborted) return false;
        }
        return true;
    }
    Solution sol = extract_solution();
    if (!satisfied_by(sol))
        throw std::logic_error("search produced an assignment violating a constraint");
    ++delivered;
    if (!on_solution(sol)) return false;
    return !stop_after_first;
}

void Store::requeue_all() {
    clear_queue();
    for (ConstraintId c = 0; c < cons_.size(); ++c) enqueue(c);
}

std::optional<Solution> Store::solve(VarOrder vo, ValueOrder) {
    std::size_t mark = trail_.size();
    std::optional<Solution> found;
    if (propagate() == PropagateResult::Fixpoint) {
        long delivered = 0;
        bool aborted = false;
        dfs(delivered,
            [&](const Solution& s) {
                found = s;
                return false;
            },
            true, vo, aborted);
    }
    undo_to(mark);
    requeue_all();
    return found;
}

long Store::solve_all(const std::function<bool(const Solution&)>& on_solution,
                      VarOrder vo, ValueOrder) {
    std::size_t mark = trail_.size();
    long delivered = 0;
    if (propagate() == PropagateResult::Fixpoint) {
        bool aborted = false;
        dfs(delivered, on_solution, false, vo, aborted);
    }
    undo_to(mark);
    requeue_all();
    return delivered;
}

std::optional<std::vector<int>> Store::table_support(ConstraintId c, int position,
                                                     int value) const {
    auto* tc = dynamic_cast<const TableConstraint*>(cons_[c].get());
    if (!tc) return std::nullopt;
    return tc->support_tuple(*this, position, value);
}

} // namespace qsr
