#include "mawarith/case_json.hpp"

#include "mawarith/error.hpp"

namespace mawarith {

namespace {

HeirKind heir_field(const ordered_json& j, const char* key) {
    const std::string id = j.at(key).get<std::string>();
    auto kind = heir_from_id(id);
    if (!kind) throw FormatError("unknown heir id '" + id + "'");
    return *kind;
}

Frac frac_field(const ordered_json& j, const char* key) {
    return Frac::parse(j.at(key).get<std::string>());
}

ordered_json share_list(const std::map<HeirKind, Frac>& shares) {
    ordered_json out = ordered_json::array();
    for (const auto& [kind, share] : shares) {
        out.push_back({{"heir", heir_id(kind)}, {"fraction", share.str()}});
    }
    return out;
}

std::map<HeirKind, Frac> share_map(const ordered_json& j) {
    std::map<HeirKind, Frac> out;
    for (const auto& e : j) out.emplace(heir_field(e, "heir"), frac_field(e, "fraction"));
    return out;
}

}  // namespace

ordered_json to_json(const CaseInput& input) {
    ordered_json heirs = ordered_json::object();
    for (const auto& [kind, count] : input.heirs) heirs[std::string(heir_id(kind))] = count;
    ordered_json j{{"heirs", std::move(heirs)}};
    j["estate"] = input.estate ? ordered_json(*input.estate) : ordered_json(nullptr);
    return j;
}

CaseInput case_input_from_json(const ordered_json& j) {
    CaseInput input;
    for (const auto& [id, count] : j.at("heirs").items()) {
        auto kind = heir_from_id(id);
        if (!kind) throw FormatError("unknown heir id '" + id + "'");
        input.heirs[*kind] = count.get<int>();
    }
    if (j.contains("estate") && !j.at("estate").is_null()) input.estate = j.at("estate").get<std::int64_t>();
    return input;
}

ordered_json to_json(const SolvedCase& s) {
    ordered_json j;
    j["input"] = to_json(s.input);

    ordered_json heirs = ordered_json::array();
    for (const EligibleHeir& e : s.eligible) {
        heirs.push_back({{"heir", heir_id(e.kind)}, {"count", e.count}, {"basis", to_string(e.basis)}});
    }
    j["heirs"] = std::move(heirs);

    ordered_json blocked = ordered_json::array();
    for (const BlockedHeir& b : s.blocked) {
        blocked.push_back({{"heir", heir_id(b.kind)}, {"count", b.count}, {"by", heir_id(b.blocker)}, {"reason", b.reason}});
    }
    j["blocked"] = std::move(blocked);

    j["shares"] = share_list(s.shares);
    j["awl_or_radd"] = to_string(s.adjustment.kind);
    j["tasil_stage"] = {{"asl", s.adjustment.original_base}, {"adjusted", s.adjustment.adjusted_base}, {"final", s.final_base}};
    j["adjusted_shares"] = share_list(s.adjusted_shares);

    ordered_json dist = ordered_json::array();
    for (const auto& [kind, a] : s.post_tasil) {
        dist.push_back({{"heir", heir_id(kind)},
                        {"count", s.input.count(kind)},
                        {"siham", a.siham},
                        {"per_head_percent", a.per_head_percent.str()}});
    }
    j["post_tasil"] = {{"base", s.final_base}, {"distribution", std::move(dist)}};

    ordered_json trace = ordered_json::array();
    for (const TraceRecord& t : s.trace) trace.push_back({{"stage", to_string(t.stage)}, {"note", t.note}});
    j["trace"] = std::move(trace);
    return j;
}

SolvedCase solved_case_from_json(const ordered_json& j) {
    try {
        SolvedCase s;
        s.input = case_input_from_json(j.at("input"));
        for (const auto& e : j.at("heirs")) {
            auto basis = share_basis_from_string(e.at("basis").get<std::string>());
            if (!basis) throw FormatError("unknown share basis");
            s.eligible.push_back({heir_field(e, "heir"), e.at("count").get<int>(), *basis});
        }
        for (const auto& b : j.at("blocked")) {
            s.blocked.push_back({heir_field(b, "heir"), b.at("count").get<int>(), heir_field(b, "by"),
                                 b.at("reason").get<std::string>()});
        }
        s.shares = share_map(j.at("shares"));
        auto kind = adjustment_kind_from_string(j.at("awl_or_radd").get<std::string>());
        if (!kind) throw FormatError("unknown awl_or_radd label");
        const auto& stage = j.at("tasil_stage");
        s.adjustment = {*kind, stage.at("asl").get<std::int64_t>(), stage.at("adjusted").get<std::int64_t>()};
        s.final_base = stage.at("final").get<std::int64_t>();
        s.adjusted_shares = share_map(j.at("adjusted_shares"));
        for (const auto& d : j.at("post_tasil").at("distribution")) {
            s.post_tasil.emplace(heir_field(d, "heir"),
                                 Allotment{d.at("siham").get<std::int64_t>(), frac_field(d, "per_head_percent")});
        }
        for (const auto& t : j.at("trace")) {
            auto st = stage_from_string(t.at("stage").get<std::string>());
            if (!st) throw FormatError("unknown trace stage");
            s.trace.push_back({*st, t.at("note").get<std::string>()});
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed solved case: ") + e.what());
    } catch (const InputError& e) {
        throw FormatError(std::string("malformed solved case: ") + e.what());
    }
}

std::string to_canonical_string(const SolvedCase& solved) {
    return to_json(solved).dump();
}

}  // namespace mawarith
