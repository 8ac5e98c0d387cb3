#include "mawarith/solver.hpp"

#include <algorithm>
#include <sstream>

#include "mawarith/error.hpp"

namespace mawarith {

namespace {

constexpr int kMaxBlockingPasses = 32;

const BlockingRule* find_blocker(HeirKind kind, const ShareContext& ctx, const RuleProfile& profile) {
    for (const BlockingRule& r : profile.blocking) {
        if (r.target != kind || !ctx.has(r.blocker)) continue;
        if (!r.when || r.when(ctx)) return &r;
    }
    return nullptr;
}

const FixedShareRule* find_fixed(HeirKind kind, const ShareContext& ctx, const RuleProfile& profile) {
    for (const FixedShareRule& r : profile.fixed) {
        if (r.kind == kind && (!r.when || r.when(ctx))) return &r;
    }
    return nullptr;
}

const ResiduaryRule* find_residuary(HeirKind kind, const ShareContext& ctx, const RuleProfile& profile) {
    for (const ResiduaryRule& r : profile.residuary) {
        if (r.kind == kind && (!r.when || r.when(ctx))) return &r;
    }
    return nullptr;
}

std::string heads(HeirKind kind, int count) {
    std::string s(heir_id(kind));
    if (count > 1) s += " x" + std::to_string(count);
    return s;
}

}  // namespace

BlockingResult determine_blocking(const CaseInput& input, const RuleProfile& profile) {
    BlockingResult result;
    result.input = input;
    ShareContext& ctx = result.context;
    for (const auto& [kind, count] : input.heirs) {
        if (count <= 0) continue;
        if (!profile.supports(kind)) {
            throw ConfigError("heir kind '" + std::string(heir_id(kind)) + "' is not in profile " + profile.id);
        }
        ctx.present[heir_index(kind)] = count;
        ctx.eligible[heir_index(kind)] = count;
    }

    std::map<HeirKind, const BlockingRule*> blocked_by;
    bool changed = true;
    int passes = 0;
    while (changed) {
        if (++passes > kMaxBlockingPasses) {
            throw ConfigError("blocking table of profile " + profile.id + " does not reach a fixpoint");
        }
        changed = false;
        for (HeirKind kind : all_heir_kinds()) {
            const int present = ctx.present_count(kind);
            if (present == 0) continue;
            const BlockingRule* rule = find_blocker(kind, ctx, profile);
            const int now = rule ? 0 : present;
            if (now != ctx.count(kind)) {
                ctx.eligible[heir_index(kind)] = now;
                changed = true;
            }
            if (rule) {
                blocked_by[kind] = rule;
            } else {
                blocked_by.erase(kind);
            }
        }
    }

    for (HeirKind kind : all_heir_kinds()) {
        const int present = ctx.present_count(kind);
        if (present == 0) continue;
        if (auto it = blocked_by.find(kind); it != blocked_by.end()) {
            result.blocked.push_back({kind, present, it->second->blocker, it->second->reason});
        } else {
            result.eligible.emplace_back(kind, present);
        }
    }
    return result;
}

ShareAssignment assign_shares(const BlockingResult& blocking, const RuleProfile& profile) {
    const ShareContext& ctx = blocking.context;
    ShareAssignment out;

    std::map<std::string, std::size_t> group_index;
    std::map<HeirKind, std::size_t> group_of;
    std::vector<std::pair<HeirKind, const ResiduaryRule*>> residuaries;

    for (const auto& [kind, count] : blocking.eligible) {
        out.counts[kind] = count;
        const FixedShareRule* fixed = find_fixed(kind, ctx, profile);
        const ResiduaryRule* res = find_residuary(kind, ctx, profile);
        if (!fixed && !res) {
            throw ConfigError("profile " + profile.id + " has no share rule for eligible " + std::string(heir_id(kind)));
        }
        out.basis[kind] = fixed && res ? ShareBasis::fixed_and_residuary
                          : fixed      ? ShareBasis::fixed
                                       : ShareBasis::residuary;
        std::string label;
        if (fixed) {
            const Frac share = fixed->special ? fixed->special(ctx) : fixed->share;
            auto [it, inserted] = group_index.try_emplace(fixed->group, out.fixed_groups.size());
            if (inserted) {
                out.fixed_groups.push_back({fixed->group, share, {}, fixed->label});
            } else if (out.fixed_groups[it->second].share != share) {
                throw ConfigError("members of group '" + fixed->group + "' disagree on their share");
            }
            out.fixed_groups[it->second].members.push_back(kind);
            group_of[kind] = it->second;
            label = fixed->special ? fixed->special_name + ": " + fixed->label : fixed->label;
        }
        if (res) {
            residuaries.emplace_back(kind, res);
            label += label.empty() ? res->label : "; " + res->label;
        }
        out.labels[kind] = std::move(label);
        out.shares[kind] = Frac(0);
    }

    // Fixed parts: a group's fard is split per head among its member kinds.
    for (const ShareGroup& g : out.fixed_groups) {
        out.fixed_total += g.share;
        int group_heads = 0;
        for (HeirKind k : g.members) group_heads += out.counts[k];
        for (HeirKind k : g.members) out.shares[k] += g.share * Frac(out.counts[k], group_heads);
    }

    if (!residuaries.empty()) {
        const int best = std::min_element(residuaries.begin(), residuaries.end(), [](const auto& a, const auto& b) {
                             return a.second->rank < b.second->rank;
                         })->second->rank;
        ResidueClass cls;
        cls.rank = best;
        cls.amount = out.fixed_total < Frac(1) ? Frac(1) - out.fixed_total : Frac(0);
        std::int64_t weight_total = 0;
        for (const auto& [kind, rule] : residuaries) {
            if (rule->rank != best) continue;
            cls.members.emplace_back(kind, rule->weight);
            weight_total = checked_add(weight_total, checked_mul(rule->weight, out.counts[kind]));
        }
        for (const auto& [kind, weight] : cls.members) {
            out.shares[kind] += cls.amount * Frac(checked_mul(weight, out.counts[kind]), weight_total);
        }
        out.residue = std::move(cls);
    }

    std::vector<Frac> parts;
    for (const ShareGroup& g : out.fixed_groups) {
        if (!g.share.is_zero()) parts.push_back(g.share);
    }
    if (out.residue && !out.residue->amount.is_zero()) parts.push_back(out.residue->amount);
    out.asl = parts.empty() ? 1 : lcm_of_dens(parts);
    return out;
}

AdjustmentResult compute_adjustment(const ShareAssignment& a, const RuleProfile& profile) {
    AdjustmentResult out;
    out.adjustment = {AdjustmentKind::none, a.asl, a.asl};
    out.adjusted_shares = a.shares;
    const Frac one(1);

    if (a.fixed_total > one) {
        out.adjustment.kind = AdjustmentKind::awl;
        const Frac raised = a.fixed_total * Frac(a.asl);
        if (!raised.is_integer()) throw ArithmeticError("'awl base is not integral");
        out.adjustment.adjusted_base = raised.num();
        for (auto& [kind, share] : out.adjusted_shares) share = share / a.fixed_total;
        out.note = "fixed shares total " + a.fixed_total.str() + "; 'awl raises base " + std::to_string(a.asl) +
                   " to " + std::to_string(out.adjustment.adjusted_base);
        return out;
    }

    if (a.fixed_total < one && !a.residue) {
        out.adjustment.kind = AdjustmentKind::radd;
        auto excluded = [&](HeirKind k) {
            return std::find(profile.radd.excluded.begin(), profile.radd.excluded.end(), k) != profile.radd.excluded.end();
        };
        std::vector<const ShareGroup*> participants;
        for (const ShareGroup& g : a.fixed_groups) {
            if (std::none_of(g.members.begin(), g.members.end(), excluded)) participants.push_back(&g);
        }
        const bool alone = participants.empty();
        if (alone) {
            if (!profile.radd.return_to_excluded_when_alone) {
                throw ConfigError("profile " + profile.id + " leaves the surplus without a radd participant");
            }
            for (const ShareGroup& g : a.fixed_groups) participants.push_back(&g);
        }

        Frac kept(0);
        Frac participating(0);
        std::vector<Frac> parts;
        for (const ShareGroup& g : a.fixed_groups) {
            if (std::find(participants.begin(), participants.end(), &g) == participants.end()) {
                kept += g.share;
            } else {
                participating += g.share;
                parts.push_back(g.share);
            }
        }
        const std::int64_t participant_asl = lcm_of_dens(parts);
        const Frac participant_base = participating * Frac(participant_asl);
        out.adjustment.adjusted_base = participant_base.num();

        const Frac scale = (one - kept) / participating;
        for (const ShareGroup* g : participants) {
            for (HeirKind k : g->members) out.adjusted_shares[k] = a.shares.at(k) * scale;
        }
        out.note = "fixed shares total " + a.fixed_total.str() + " with no residuary; surplus " +
                   (one - a.fixed_total).str() + " returned" + (alone ? " to the spouse" : " excluding spouses") +
                   " over participant base " + std::to_string(out.adjustment.adjusted_base);
        return out;
    }

    out.note = a.residue ? "residue " + a.residue->amount.str() + " taken by residuaries; no adjustment"
                         : "fixed shares exhaust the estate exactly; no adjustment";
    return out;
}

TasilResult tasil(const std::map<HeirKind, Frac>& adjusted_shares, const std::map<HeirKind, int>& counts) {
    TasilResult out;
    std::int64_t base = 1;
    for (const auto& [kind, share] : adjusted_shares) {
        if (share.is_zero()) continue;
        base = checked_lcm(base, (share / Frac(counts.at(kind))).den());
    }
    out.final_base = base;
    for (const auto& [kind, share] : adjusted_shares) {
        const Frac siham = share * Frac(base);
        if (!siham.is_integer()) throw ArithmeticError("siham not integral after tashih");
        out.post_tasil[kind] = {siham.num(), share * Frac(100) / Frac(counts.at(kind))};
    }
    return out;
}

SolvedCase solve_case(const CaseInput& input, const RuleProfile& profile) {
    if (auto violations = validate_case_input(input); !violations.empty()) {
        std::string msg = "invalid case input:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw InputError(msg);
    }

    SolvedCase s;
    s.input = input;

    const BlockingResult blocking = determine_blocking(input, profile);
    const ShareAssignment assignment = assign_shares(blocking, profile);
    const AdjustmentResult adjustment = compute_adjustment(assignment, profile);
    const TasilResult distribution = tasil(adjustment.adjusted_shares, assignment.counts);

    for (const auto& [kind, count] : blocking.eligible) s.eligible.push_back({kind, count, assignment.basis.at(kind)});
    s.blocked = blocking.blocked;
    s.shares = assignment.shares;
    s.adjustment = adjustment.adjustment;
    s.adjusted_shares = adjustment.adjusted_shares;
    s.final_base = distribution.final_base;
    s.post_tasil = distribution.post_tasil;

    std::ostringstream elig;
    elig << "eligible:";
    for (const auto& [kind, count] : blocking.eligible) elig << ' ' << heads(kind, count) << ';';
    if (blocking.blocked.empty()) {
        elig << " nobody blocked";
    } else {
        for (const BlockedHeir& b : blocking.blocked) {
            elig << " blocked " << heads(b.kind, b.count) << " by " << heir_id(b.blocker) << " (" << b.reason << ");";
        }
    }
    s.trace.push_back({Stage::eligibility, elig.str()});

    std::ostringstream shares;
    shares << "asl " << assignment.asl << ":";
    for (const auto& [kind, share] : assignment.shares) {
        shares << ' ' << heir_id(kind) << ' ' << share.str() << " (" << assignment.labels.at(kind) << ");";
    }
    s.trace.push_back({Stage::shares, shares.str()});
    s.trace.push_back({Stage::adjustment, adjustment.note});

    std::ostringstream dist;
    dist << "final base " << distribution.final_base << ":";
    for (const auto& [kind, a] : distribution.post_tasil) {
        dist << ' ' << heir_id(kind) << ' ' << a.siham << " siham, " << a.per_head_percent.str() << "% each;";
    }
    s.trace.push_back({Stage::tasil, dist.str()});
    return s;
}

}  // namespace mawarith
