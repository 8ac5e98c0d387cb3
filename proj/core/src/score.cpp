#include "mawarith/score.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "mawarith/error.hpp"
#include "mawarith/text.hpp"

namespace mawarith {

namespace {

bool within(const Number& gold, const Number& pred, const Frac& eps) {
    if (gold.exact && pred.exact) {
        try {
            const Frac d = *gold.exact - *pred.exact;
            return (d < Frac(0) ? -d : d) <= eps;
        } catch (const ArithmeticError&) {
        }
    }
    return std::fabs(gold.value - pred.value) <= eps.to_double() + 1e-12;
}

std::set<HeirKind> keys_of(const auto& m) {
    std::set<HeirKind> out;
    for (const auto& [k, v] : m) out.insert(k);
    return out;
}

// Mean of per-heir indicators over the union of gold and predicted heirs.
template <typename G, typename P, typename Match>
Frac per_heir(const std::map<HeirKind, G>& gold, const std::map<HeirKind, P>* pred, Match match) {
    std::set<HeirKind> all = keys_of(gold);
    if (pred) {
        for (const auto& [k, v] : *pred) all.insert(k);
    }
    if (all.empty()) return Frac(1);
    std::int64_t hits = 0;
    for (HeirKind k : all) {
        auto g = gold.find(k);
        if (g == gold.end() || !pred) continue;
        auto p = pred->find(k);
        if (p != pred->end() && match(k, g->second, p->second)) ++hits;
    }
    return Frac(hits, static_cast<std::int64_t>(all.size()));
}

}  // namespace

void ScoreConfig::validate() const {
    for (const Frac& w : {weights.heirs, weights.blocked, weights.shares, weights.awl, weights.final_distribution}) {
        if (w < Frac(0)) throw ConfigError("stage weights must be non-negative");
    }
    if (weights.sum() != Frac(1)) throw ConfigError("stage weights sum to " + weights.sum().str() + ", not 1");
    if (fraction_epsilon < Frac(0) || percent_epsilon < Frac(0)) throw ConfigError("tolerances must be non-negative");
}

int score_value(const Scalar& gold, const Scalar& pred, const Frac& epsilon, std::string* diagnostic) {
    if (gold.index() != pred.index()) {
        if (diagnostic) *diagnostic = "type mismatch: numeric value against a label";
        return 0;
    }
    if (const auto* g = std::get_if<std::string>(&gold)) return *g == std::get<std::string>(pred) ? 1 : 0;
    return within(std::get<Number>(gold), std::get<Number>(pred), epsilon) ? 1 : 0;
}

Frac weighted_score(const StageScores& s, const MireWeights& w) {
    return w.heirs * s.heirs + w.blocked * s.blocked + w.shares * s.shares + w.awl * s.awl +
           w.final_distribution * s.final_distribution;
}

StageScores score_case(const SolvedCase& gold, const Prediction* pred, const ScoreConfig& config) {
    StageScores s;
    if (!pred) {
        s.diagnostics.emplace_back("missing prediction");
        return s;
    }

    std::set<HeirKind> gold_heirs, gold_blocked, pred_heirs, pred_blocked;
    for (const EligibleHeir& e : gold.eligible) gold_heirs.insert(e.kind);
    for (const BlockedHeir& b : gold.blocked) gold_blocked.insert(b.kind);
    if (pred->heirs) pred_heirs = keys_of(*pred->heirs);
    if (pred->blocked) pred_blocked.insert(pred->blocked->begin(), pred->blocked->end());
    s.heirs = score_set_exact(gold_heirs, pred_heirs);
    s.blocked = score_set_exact(gold_blocked, pred_blocked);

    s.shares = per_heir(gold.shares, pred->shares ? &*pred->shares : nullptr,
                        [&](HeirKind, const Frac& g, const Number& p) {
                            return score_value(Number::of(g), p, config.fraction_epsilon) == 1;
                        });

    const Scalar gold_label = std::string(to_string(gold.adjustment.kind));
    int label = 0;
    if (pred->adjustment) {
        label = score_value(gold_label, std::string(to_string(*pred->adjustment)), config.fraction_epsilon);
    } else if (pred->awl_or_radd) {
        label = score_value(gold_label, *pred->awl_or_radd, config.fraction_epsilon);
    }
    int base = 0;
    if (pred->tasil_stage && pred->tasil_stage->adjusted) {
        base = score_value(Number::of(Frac(gold.adjustment.adjusted_base)), *pred->tasil_stage->adjusted,
                           config.fraction_epsilon);
    }
    s.awl = Frac(label + base, 2);

    s.final_distribution = per_heir(gold.post_tasil, pred->post_tasil ? &*pred->post_tasil : nullptr,
                                    [&](HeirKind k, const Allotment& g, const PostEntry& p) {
                                        if (p.count && *p.count != gold.input.count(k)) return false;
                                        return score_value(Number::of(g.per_head_percent), p.percent,
                                                           config.percent_epsilon) == 1;
                                    });

    if (s.heirs != Frac(1)) s.diagnostics.emplace_back("heirs differ");
    if (s.blocked != Frac(1)) s.diagnostics.emplace_back("blocked heirs differ");
    if (s.shares != Frac(1)) s.diagnostics.emplace_back("shares differ");
    if (label == 0) s.diagnostics.emplace_back("awl_or_radd label differs");
    if (base == 0) s.diagnostics.emplace_back("adjusted base differs");
    if (s.final_distribution != Frac(1)) s.diagnostics.emplace_back("final distribution differs");
    return s;
}

MireReport score_run(std::span<const GoldCase> gold, std::span<const Prediction> preds, const ScoreConfig& config) {
    config.validate();
    std::map<std::string, const Prediction*> by_id;
    for (const Prediction& p : preds) {
        if (!by_id.emplace(p.id, &p).second) throw InputError("duplicate prediction id '" + p.id + "'");
    }
    std::unordered_set<std::string> gold_ids;
    MireReport r;
    std::map<Category, double> sums;
    double total = 0.0;
    for (const GoldCase& g : gold) {
        if (!gold_ids.insert(g.id).second) throw InputError("duplicate gold id '" + g.id + "'");
        auto it = by_id.find(g.id);
        const Prediction* p = it == by_id.end() ? nullptr : it->second;
        CaseScore c;
        c.id = g.id;
        c.category = g.category;
        c.missing = p == nullptr;
        c.stages = score_case(g.solved, p, config);
        c.score = weighted_score(c.stages, config.weights);
        const double v = c.score.to_double();
        total += v;
        sums[g.category] += v;
        ++r.category_counts[g.category];
        if (c.missing) ++r.missing;
        r.cases.push_back(std::move(c));
    }
    for (const auto& [id, p] : by_id) {
        if (!gold_ids.contains(id)) r.unmatched_predictions.push_back(id);
    }
    r.mean = gold.empty() ? 0.0 : total / static_cast<double>(gold.size());
    for (const auto& [cat, sum] : sums) r.per_category[cat] = sum / static_cast<double>(r.category_counts[cat]);
    return r;
}

ordered_json to_json(const MireReport& r) {
    ordered_json cases = ordered_json::array();
    for (const CaseScore& c : r.cases) {
        cases.push_back({
            {"id", c.id},
            {"category", to_string(c.category)},
            {"missing", c.missing},
            {"score", c.score.to_double()},
            {"s_heirs", c.stages.heirs.to_double()},
            {"s_blocked", c.stages.blocked.to_double()},
            {"s_shares", c.stages.shares.to_double()},
            {"s_awl", c.stages.awl.to_double()},
            {"s_final", c.stages.final_distribution.to_double()},
            {"diagnostics", c.stages.diagnostics},
        });
    }
    ordered_json cats = ordered_json::object();
    for (const auto& [cat, mean] : r.per_category) {
        cats[std::string(to_string(cat))] = {{"count", r.category_counts.at(cat)}, {"mean", mean}};
    }
    return ordered_json{{"mean", r.mean},
                        {"cases", r.cases.size()},
                        {"missing", r.missing},
                        {"per_category", std::move(cats)},
                        {"unmatched_predictions", r.unmatched_predictions},
                        {"per_case", std::move(cases)}};
}

std::string summary_table(const MireReport& r) {
    double stage[5] = {0, 0, 0, 0, 0};
    for (const CaseScore& c : r.cases) {
        stage[0] += c.stages.heirs.to_double();
        stage[1] += c.stages.blocked.to_double();
        stage[2] += c.stages.shares.to_double();
        stage[3] += c.stages.awl.to_double();
        stage[4] += c.stages.final_distribution.to_double();
    }
    const double n = r.cases.empty() ? 1.0 : static_cast<double>(r.cases.size());
    char line[128];
    std::string out;
    std::snprintf(line, sizeof line, "%-14s %8s %8s\n", "group", "cases", "MIR-E");
    out += line;
    std::snprintf(line, sizeof line, "%-14s %8zu %8.4f\n", "all", r.cases.size(), r.mean);
    out += line;
    for (const auto& [cat, mean] : r.per_category) {
        std::snprintf(line, sizeof line, "%-14s %8zu %8.4f\n", std::string(to_string(cat)).c_str(),
                      r.category_counts.at(cat), mean);
        out += line;
    }
    std::snprintf(line, sizeof line, "missing: %zu\n", r.missing);
    out += line;
    const char* names[5] = {"heirs", "blocked", "shares", "awl_or_radd", "post_tasil"};
    for (int i = 0; i < 5; ++i) {
        std::snprintf(line, sizeof line, "  %-12s %8.4f\n", names[i], stage[i] / n);
        out += line;
    }
    return out;
}

std::string_view to_string(QualityBin b) noexcept {
    switch (b) {
        case QualityBin::excellent: return "excellent";
        case QualityBin::good: return "good";
        case QualityBin::fair: return "fair";
        case QualityBin::poor: return "poor";
    }
    return "poor";
}

QualityBin quality_bin(double s, const AblationConfig& c) {
    if (s >= c.excellent) return QualityBin::excellent;
    if (s >= c.good) return QualityBin::good;
    if (s >= c.fair) return QualityBin::fair;
    return QualityBin::poor;
}

AblationRow make_ablation_row(double s_sem, double s_kw, double s_tfidf, const AblationConfig& c) {
    AblationRow r{s_sem, s_kw, s_tfidf, 0.0, false, QualityBin::poor};
    r.s_comb = c.w_sem * s_sem + c.w_kw * s_kw + c.w_tfidf * s_tfidf;
    r.success = r.s_comb >= c.success_threshold;
    r.bin = quality_bin(r.s_comb, c);
    return r;
}

void TfidfModel::fit(std::span<const std::string_view> texts) {
    docs_ = texts.size();
    df_.clear();
    for (std::string_view t : texts) {
        auto toks = analyze_ar(t);
        std::sort(toks.begin(), toks.end());
        toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
        for (auto& tok : toks) ++df_[tok];
    }
}

std::map<std::string, double> TfidfModel::vector(std::string_view text) const {
    std::map<std::string, double> v;
    for (auto& tok : analyze_ar(text)) v[tok] += 1.0;
    const double n = static_cast<double>(docs_);
    for (auto& [tok, w] : v) {
        auto it = df_.find(tok);
        const double df = it == df_.end() ? 0.0 : it->second;
        w *= std::log((1.0 + n) / (1.0 + df)) + 1.0;
    }
    return v;
}

double TfidfModel::similarity(std::string_view a, std::string_view b) const {
    const auto va = vector(a), vb = vector(b);
    double dot = 0, na = 0, nb = 0;
    for (const auto& [t, w] : va) {
        na += w * w;
        if (auto it = vb.find(t); it != vb.end()) dot += w * it->second;
    }
    for (const auto& [t, w] : vb) nb += w * w;
    if (na == 0 || nb == 0) return 0.0;
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

AblationRow ablation_metrics(std::string_view question, std::span<const std::string_view> contexts,
                             const Embedder& embedder, const TfidfModel& tfidf, const AblationConfig& config) {
    if (contexts.empty()) return make_ablation_row(0, 0, 0, config);
    const auto qv = embedder.embed(question);
    auto qt = analyze_ar(question);
    std::set<std::string> qset(qt.begin(), qt.end());
    double sem = 0, kw = 0, tf = 0;
    for (std::string_view ctx : contexts) {
        sem += std::max(0.0, cosine(qv, embedder.embed(ctx)));
        auto ct = analyze_ar(ctx);
        std::set<std::string> cset(ct.begin(), ct.end());
        std::size_t common = 0;
        for (const auto& t : qset) common += cset.count(t);
        const std::size_t uni = qset.size() + cset.size() - common;
        kw += uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
        tf += tfidf.similarity(question, ctx);
    }
    const double n = static_cast<double>(contexts.size());
    return make_ablation_row(sem / n, kw / n, tf / n, config);
}

}  // namespace mawarith
